#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsr/fock_oracle.hpp"
#include "qsr/gkls.hpp"
#include "qsr/photon_kernel.hpp"
#include "qsr/propagator.hpp"
#include "qsr/spin_algebra.hpp"

namespace py = pybind11;
using namespace qsr;

PYBIND11_MODULE(qsr, m) {
  m.doc() = "GKLS spin-relaxation approximation and its truncated-Fock oracle";

  py::class_<CutoffSpec>(m, "CutoffSpec")
      .def(py::init<>())
      .def(py::init([](const std::string& kind, double lambda) {
             return CutoffSpec{kind, lambda};
           }),
           py::arg("kind") = "gaussian", py::arg("lambda_") = 4.0)
      .def_readwrite("kind", &CutoffSpec::kind)
      .def_readwrite("lambda_", &CutoffSpec::lambda)
      .def("validate", &CutoffSpec::validate);

  py::class_<QuadratureSettings>(m, "QuadratureSettings")
      .def(py::init<>())
      .def_readwrite("tol", &QuadratureSettings::tol)
      .def_readwrite("max_nodes", &QuadratureSettings::max_nodes);

  py::class_<BathKernel>(m, "BathKernel")
      .def(py::init<>())
      .def(py::init([](const CutoffSpec& cutoff, double beta) {
             return BathKernel{cutoff, beta, {}};
           }),
           py::arg("cutoff") = CutoffSpec{}, py::arg("beta") = 1.0)
      .def_readwrite("cutoff", &BathKernel::cutoff)
      .def_readwrite("beta", &BathKernel::beta)
      .def_readwrite("quad", &BathKernel::quad)
      .def("validate", &BathKernel::validate);

  m.def("chi", &chi, py::arg("cutoff"), py::arg("r"));
  m.def("radial_density", &radial_density, py::arg("cutoff"), py::arg("knorm"));
  m.def("spectral_density", &spectral_density, py::arg("kernel"), py::arg("omega"));
  m.def("spectral_tail", &spectral_tail, py::arg("kernel"), py::arg("omega"));
  m.def("u_of_t", &u_of_t, py::arg("kernel"), py::arg("t"));

  py::class_<AbelDiagnostics>(m, "AbelDiagnostics")
      .def_readonly("epsilons", &AbelDiagnostics::epsilons)
      .def_readonly("integrals", &AbelDiagnostics::integrals)
      .def_readonly("value", &AbelDiagnostics::value)
      .def_readonly("residual", &AbelDiagnostics::residual);

  py::class_<DCoefficients>(m, "DCoefficients")
      .def_readonly("freq", &DCoefficients::freq)
      .def_readonly("pv_radius", &DCoefficients::pv_radius)
      .def_readonly("timeside", &DCoefficients::timeside)
      .def_readonly("has_timeside", &DCoefficients::has_timeside)
      .def("at", &DCoefficients::at, py::arg("m"));

  m.def("d_coefficient",
        [](const BathKernel& k, int mm) { return d_coefficient(k, mm); },
        py::arg("kernel"), py::arg("m"));
  m.def("d_timeside",
        [](const BathKernel& k, int mm) { return d_timeside(k, mm); },
        py::arg("kernel"), py::arg("m"));
  m.def("d_coefficients", &d_coefficients, py::arg("kernel"),
        py::arg("with_timeside") = false);

  m.def("pauli", &pauli, py::arg("j"));
  m.def("ladder", &ladder, py::arg("m"));
  m.def("decompose", &decompose, py::arg("a"));
  m.def("reconstruct", &reconstruct, py::arg("c"));

  py::class_<ExternalField>(m, "ExternalField")
      .def(py::init<>())
      .def(py::init([](double b1, double b2, double b3) {
             return ExternalField{b1, b2, b3};
           }),
           py::arg("b1"), py::arg("b2"), py::arg("b3"))
      .def_readwrite("b1", &ExternalField::b1)
      .def_readwrite("b2", &ExternalField::b2)
      .def_readwrite("b3", &ExternalField::b3)
      .def("norm", &ExternalField::norm)
      .def("canonical", &ExternalField::canonical);

  m.def("h_mag", &h_mag, py::arg("field"));
  m.def("free_evolve", &free_evolve, py::arg("t"), py::arg("field"), py::arg("a"));

  py::class_<GklsGenerator>(m, "GklsGenerator")
      .def_readonly("matrix4", &GklsGenerator::matrix4)
      .def_readonly("d", &GklsGenerator::d)
      .def_readonly("h_l", &GklsGenerator::h_l);

  py::class_<EigenPair>(m, "EigenPair")
      .def_readonly("value", &EigenPair::value)
      .def_readonly("vector", &EigenPair::vector);

  py::class_<Eigensystem>(m, "Eigensystem")
      .def_readonly("pairs", &Eigensystem::pairs)
      .def_readonly("defective", &Eigensystem::defective);

  py::class_<Semigroup>(m, "Semigroup")
      .def_readonly("tau", &Semigroup::tau)
      .def_readonly("matrix4", &Semigroup::matrix4);

  py::class_<CpReport>(m, "CpReport")
      .def_readonly("min_choi_eigenvalue", &CpReport::min_choi_eigenvalue)
      .def_readonly("trace_defect", &CpReport::trace_defect)
      .def_readonly("unitality_defect", &CpReport::unitality_defect)
      .def("passes", &CpReport::pass, py::arg("tol") = 1e-10);

  m.def("build_generator", &build_generator, py::arg("d"));
  m.def("apply_generator",
        [](const GklsGenerator& l, const Mat2& a) { return qsr::apply(l, a); },
        py::arg("generator"), py::arg("a"));
  m.def("eigensystem", &eigensystem, py::arg("generator"));
  m.def("semigroup", &semigroup, py::arg("generator"), py::arg("tau"));
  m.def("apply_semigroup",
        [](const Semigroup& s, const Mat2& a) { return qsr::apply(s, a); },
        py::arg("semigroup"), py::arg("a"));
  m.def("predual_matrix", &predual_matrix, py::arg("semigroup"));
  m.def("choi_matrix", &choi_matrix, py::arg("semigroup"));
  m.def("verify_cp", &verify_cp, py::arg("semigroup"));

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("bloch", &Trajectory::bloch);

  py::class_<RelaxationRates>(m, "RelaxationRates")
      .def_readonly("longitudinal_rate", &RelaxationRates::longitudinal_rate)
      .def_readonly("transverse_rate", &RelaxationRates::transverse_rate)
      .def_readonly("frequency_shift", &RelaxationRates::frequency_shift);

  py::class_<Propagator>(m, "Propagator")
      .def(py::init<GklsGenerator, ExternalField>(), py::arg("generator"), py::arg("field"))
      .def("approx_heisenberg", &Propagator::approx_heisenberg, py::arg("t"), py::arg("g"),
           py::arg("sigma"))
      .def("bloch_trajectory", &Propagator::bloch_trajectory, py::arg("a"), py::arg("times"),
           py::arg("g"))
      .def("semigroup_matrix", &Propagator::semigroup_matrix, py::arg("tau"));

  m.def("relaxation_rates", &relaxation_rates, py::arg("g"), py::arg("d"));

  py::class_<Mode>(m, "Mode")
      .def_readonly("omega", &Mode::omega)
      .def_readonly("lambda_", &Mode::lambda);

  py::class_<DiscretizationReport>(m, "DiscretizationReport")
      .def_readonly("delta_omega", &DiscretizationReport::delta_omega)
      .def_readonly("tail_mass", &DiscretizationReport::tail_mass)
      .def_readonly("recurrence_time", &DiscretizationReport::recurrence_time)
      .def_readonly("t_work", &DiscretizationReport::t_work)
      .def_readonly("max_kernel_error", &DiscretizationReport::max_kernel_error);

  py::class_<ModeSet>(m, "ModeSet")
      .def_readonly("modes", &ModeSet::modes)
      .def_readonly("channel_active", &ModeSet::channel_active)
      .def_readonly("channel_pauli", &ModeSet::channel_pauli)
      .def_readonly("report", &ModeSet::report)
      .def("u_hat", &ModeSet::u_hat, py::arg("t"));

  m.def("discretize_bath", &discretize_bath, py::arg("kernel"), py::arg("omega_max"),
        py::arg("n_modes"), py::arg("rule"), py::arg("t_work"),
        py::arg("guard_fraction") = 0.75, py::arg("tail_tol") = 1e-6);

  py::class_<TruncatedSpace>(m, "TruncatedSpace")
      .def(py::init<int, int, int, std::int64_t>(), py::arg("modes_per_channel"),
           py::arg("n_channels"), py::arg("excitation_cap"),
           py::arg("dim_budget") = 2000000)
      .def_property_readonly("dimension", &TruncatedSpace::dimension)
      .def_property_readonly("photon_states", &TruncatedSpace::photon_states)
      .def_property_readonly("pool", &TruncatedSpace::pool)
      .def("rank", &TruncatedSpace::rank, py::arg("multiset"))
      .def("unrank", &TruncatedSpace::unrank, py::arg("photon_index"))
      .def("flat", &TruncatedSpace::flat, py::arg("photon_index"), py::arg("spin"));

  py::class_<FullHamiltonian>(m, "FullHamiltonian")
      .def_property_readonly("dimension", &FullHamiltonian::dimension)
      .def_readonly("g", &FullHamiltonian::g)
      .def_readonly("beta", &FullHamiltonian::beta)
      .def("with_coupling", &FullHamiltonian::with_coupling, py::arg("g"))
      .def("apply", &FullHamiltonian::apply, py::arg("psi"));

  m.def("build_hamiltonian", &build_hamiltonian, py::arg("modes"), py::arg("beta"),
        py::arg("g"), py::arg("space"));

  py::class_<EvolverSettings>(m, "EvolverSettings")
      .def(py::init<>())
      .def_readwrite("dense_threshold", &EvolverSettings::dense_threshold)
      .def_readwrite("krylov_m", &EvolverSettings::krylov_m)
      .def_readwrite("grid_dt", &EvolverSettings::grid_dt)
      .def_readwrite("step_tol", &EvolverSettings::step_tol);

  m.def("evolve_state", &evolve_state, py::arg("hamiltonian"), py::arg("psi"), py::arg("t"),
        py::arg("settings") = EvolverSettings{});
  m.def("reduced_observable", &reduced_observable, py::arg("hamiltonian"), py::arg("sigma"),
        py::arg("t"), py::arg("settings") = EvolverSettings{});
  m.def("sred_consistency", &sred_consistency, py::arg("hamiltonian"), py::arg("sigma"),
        py::arg("t"), py::arg("settings") = EvolverSettings{});

  py::class_<ErrorCurveConfig>(m, "ErrorCurveConfig")
      .def(py::init<>())
      .def_readwrite("omega_max", &ErrorCurveConfig::omega_max)
      .def_readwrite("n_modes", &ErrorCurveConfig::n_modes)
      .def_readwrite("rule", &ErrorCurveConfig::rule)
      .def_readwrite("excitation_cap", &ErrorCurveConfig::excitation_cap)
      .def_readwrite("dim_budget", &ErrorCurveConfig::dim_budget)
      .def_readwrite("guard_fraction", &ErrorCurveConfig::guard_fraction)
      .def_readwrite("tail_tol", &ErrorCurveConfig::tail_tol)
      .def_readwrite("evolver", &ErrorCurveConfig::evolver)
      .def_readwrite("threads", &ErrorCurveConfig::threads);

  py::class_<ErrorCurve>(m, "ErrorCurve")
      .def_readonly("couplings", &ErrorCurve::couplings)
      .def_readonly("times", &ErrorCurve::times)
      .def_readonly("traces", &ErrorCurve::traces)
      .def_readonly("sup_error", &ErrorCurve::sup_error)
      .def_readonly("zero_trace", &ErrorCurve::zero_trace)
      .def_readonly("zero_coupling_error", &ErrorCurve::zero_coupling_error)
      .def_readonly("discretization_error", &ErrorCurve::discretization_error)
      .def_readonly("floor", &ErrorCurve::floor)
      .def_readonly("status", &ErrorCurve::status)
      .def_readonly("discretization", &ErrorCurve::discretization);

  m.def("error_curve", &error_curve, py::arg("kernel"), py::arg("sigma"), py::arg("g_list"),
        py::arg("times"), py::arg("config") = ErrorCurveConfig{},
        py::call_guard<py::gil_scoped_release>());
}
