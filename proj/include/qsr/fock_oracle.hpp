#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qsr/photon_kernel.hpp"
#include "qsr/spin_algebra.hpp"

namespace qsr {

struct Mode {
  double omega = 0.0;
  double lambda = 0.0;
};

struct DiscretizationReport {
  double delta_omega = 0.0;
  double tail_mass = 0.0;
  double recurrence_time = 0.0;
  double t_work = 0.0;
  double max_kernel_error = 0.0;
};

// Three independent bosonic families share one frequency comb; cross-channel
// correlations vanish, so a single mode list describes all of them.
struct ModeSet {
  std::vector<Mode> modes;
  std::array<bool, 3> channel_active{true, true, true};
  std::array<int, 3> channel_pauli{1, 2, 3};
  DiscretizationReport report;
  std::complex<double> u_hat(double t) const;
};

ModeSet discretize_bath(const BathKernel& k, double omega_max, int n_modes,
                        const std::string& rule, double t_work,
                        double guard_fraction = 0.75, double tail_tol = 1e-6);

// Spin x capped total-excitation Fock space. Photon states are multisets of
// excited mode indices ranked in colex order within each excitation sector;
// the flat state index is 2 * photon_index + spin (spin 0 = up).
class TruncatedSpace {
 public:
  TruncatedSpace(int modes_per_channel, int n_channels, int excitation_cap,
                 std::int64_t dim_budget = 2000000);
  int modes_per_channel() const { return mpc_; }
  int n_channels() const { return nch_; }
  int pool() const { return pool_; }
  int excitation_cap() const { return cap_; }
  std::int64_t photon_states() const { return offsets_.back(); }
  std::int64_t dimension() const { return 2 * photon_states(); }
  std::int64_t rank(const std::vector<int>& multiset) const;
  std::vector<int> unrank(std::int64_t photon_index) const;
  std::int64_t flat(std::int64_t photon_index, int spin) const {
    return 2 * photon_index + spin;
  }

 private:
  int mpc_, nch_, pool_, cap_;
  std::vector<std::int64_t> offsets_;
};

struct FullHamiltonian {
  Eigen::VectorXd diag;
  std::shared_ptr<const Eigen::SparseMatrix<std::complex<double>>> interaction;
  double g = 0.0;
  double beta = 0.0;
  std::int64_t npht = 0;
  std::int64_t dimension() const { return diag.size(); }
  FullHamiltonian with_coupling(double g_new) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;
  Eigen::SparseMatrix<std::complex<double>> matrix() const;
};

FullHamiltonian build_hamiltonian(const ModeSet& modes, double beta, double g,
                                  const TruncatedSpace& space);

struct EvolverSettings {
  int dense_threshold = 2000;
  int krylov_m = 20;
  double grid_dt = 0.25;
  double step_tol = 1e-10;
};

// Exact eigensolve below the dense threshold, short-iterative Lanczos above.
class Evolver {
 public:
  explicit Evolver(const FullHamiltonian& h, EvolverSettings settings = {});
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;
  double max_residual() const { return max_residual_; }
  bool dense() const { return dense_; }

 private:
  Eigen::VectorXcd krylov_step(const Eigen::VectorXcd& psi, double dt, double* residual) const;
  Eigen::VectorXcd step(const Eigen::VectorXcd& psi, double dt, int depth) const;
  FullHamiltonian h_;
  EvolverSettings set_;
  bool dense_ = false;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  mutable Eigen::MatrixXcd krylov_;
  mutable double max_residual_ = 0.0;
};

Eigen::VectorXcd evolve_state(const FullHamiltonian& h, const Eigen::VectorXcd& psi, double t,
                              const EvolverSettings& settings = {});

// Vacuum-spinor pair evolved in lockstep; observe() assembles the reduced
// observable sigma_0(S(t, sigma)) for any sigma at the current time.
class ReducedDynamics {
 public:
  explicit ReducedDynamics(const FullHamiltonian& h, EvolverSettings settings = {});
  void advance(double t);
  double time() const { return t_; }
  Mat2 observe(const Mat2& sigma) const;
  double max_residual() const { return ev_.max_residual(); }

 private:
  void refresh_kernels();
  Evolver ev_;
  std::int64_t npht_;
  std::array<Eigen::VectorXcd, 2> psi_;
  std::array<std::array<Mat2, 2>, 2> k_;
  double t_ = 0.0;
};

Mat2 reduced_observable(const FullHamiltonian& h, const Mat2& sigma, double t,
                        const EvolverSettings& settings = {});

double sred_consistency(const FullHamiltonian& h, const Mat2& sigma, double t,
                        const EvolverSettings& settings = {});

struct ErrorCurveConfig {
  double omega_max = 16.0;
  int n_modes = 200;
  std::string rule = "midpoint";
  int excitation_cap = 2;
  std::int64_t dim_budget = 2000000;
  double guard_fraction = 0.75;
  double tail_tol = 1e-6;
  EvolverSettings evolver;
  int threads = 0;
};

struct ErrorCurve {
  std::vector<double> couplings;
  std::vector<double> times;
  std::vector<std::vector<double>> traces;
  std::vector<double> sup_error;
  std::vector<double> zero_trace;
  double zero_coupling_error = 0.0;
  double discretization_error = 0.0;
  double floor = 0.0;
  std::string status;
  DiscretizationReport discretization;
};

ErrorCurve error_curve(const BathKernel& k, const Mat2& sigma, const std::vector<double>& g_list,
                       const std::vector<double>& times, const ErrorCurveConfig& cfg = {});

}  // namespace qsr
