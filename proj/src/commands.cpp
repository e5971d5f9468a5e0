#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <json.hpp>
#include <limits>
#include <string>
#include <vector>

#include "qsr/cli.hpp"
#include "qsr/emit.hpp"
#include "qsr/gkls.hpp"
#include "qsr/propagator.hpp"

namespace qsr {

namespace {

using ojson = nlohmann::ordered_json;
using complexd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

ojson config_json(const RunConfig& c) {
  ojson j;
  j["beta"] = c.beta;
  j["g_list"] = c.g_list;
  j["cutoff"] = ojson{{"kind", c.cutoff.kind}, {"lambda", c.cutoff.lambda}};
  j["times"] = ojson{{"t_max", c.times.t_max}, {"n_points", c.times.n_points}};
  j["bath"] = ojson{{"omega_max", c.bath.omega_max},
                    {"n_modes", c.bath.n_modes},
                    {"rule", c.bath.rule},
                    {"guard_fraction", c.bath.guard_fraction}};
  j["oracle"] = ojson{{"excitation_cap", c.oracle.excitation_cap},
                      {"dim_budget", c.oracle.dim_budget},
                      {"propagator", c.oracle.propagator},
                      {"dense_threshold", c.oracle.dense_threshold},
                      {"krylov_m", c.oracle.krylov_m}};
  j["tolerances"] = ojson{{"quadrature", c.tolerances.quadrature},
                          {"propagation", c.tolerances.propagation},
                          {"discretization", c.tolerances.discretization},
                          {"timeside", c.tolerances.timeside}};
  j["output"] = ojson{{"directory", c.output.directory}, {"formats", c.output.formats}};
  j["evolve"] = ojson{{"spinor", c.evolve.spinor}, {"sigma", c.evolve.sigma},
                      {"mode", c.evolve.mode}};
  j["sweep"] = ojson{{"axis", c.sweep.axis}, {"values", c.sweep.values},
                     {"watch", c.sweep.watch}};
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

ojson cjson(complexd z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

// Every report embeds the full resolved config next to a schema version.
void write_report(const RunConfig& cfg, const std::string& command, const std::string& name,
                  const ojson& body) {
  ojson report;
  report["schema_version"] = "1";
  report["command"] = command;
  report["config"] = config_json(cfg);
  for (const auto& item : body.items()) report[item.key()] = item.value();
  write_atomic(cfg.output.directory + "/" + name, report.dump(2) + "\n");
}

void write_table(const RunConfig& cfg, const std::string& name, const Table& table) {
  if (cfg.wants("csv")) write_atomic(cfg.output.directory + "/" + name, table.csv());
}

void write_svg(const RunConfig& cfg, const std::string& name, const PlotSpec& spec) {
  if (cfg.wants("svg")) write_atomic(cfg.output.directory + "/" + name, svg_plot(spec));
}

Mat2 sigma_from(const std::string& name) {
  if (name == "sigma1") return pauli(1);
  if (name == "sigma2") return pauli(2);
  if (name == "sigma3") return pauli(3);
  return Mat2::Identity();
}

Eigen::Vector2cd spinor_from(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "down") return Eigen::Vector2cd(0.0, 1.0);
  if (name == "plus") return Eigen::Vector2cd(r, r);
  if (name == "minus") return Eigen::Vector2cd(r, -r);
  if (name == "plus_i") return Eigen::Vector2cd(complexd(r, 0.0), complexd(0.0, r));
  return Eigen::Vector2cd(1.0, 0.0);
}

ErrorCurveConfig curve_config(const RunConfig& cfg) {
  ErrorCurveConfig ec;
  ec.omega_max = cfg.bath.omega_max;
  ec.n_modes = cfg.bath.n_modes;
  ec.rule = cfg.bath.rule;
  ec.excitation_cap = cfg.oracle.excitation_cap;
  ec.dim_budget = cfg.oracle.dim_budget;
  ec.guard_fraction = cfg.bath.guard_fraction;
  ec.tail_tol = cfg.tolerances.discretization;
  ec.evolver = cfg.evolver_settings();
  ec.threads = cfg.threads;
  return ec;
}

ojson discretization_json(const DiscretizationReport& r) {
  return ojson{{"delta_omega", r.delta_omega},
               {"tail_mass", r.tail_mass},
               {"recurrence_time", r.recurrence_time},
               {"t_work", r.t_work},
               {"max_kernel_error", r.max_kernel_error}};
}

std::string coupling_label(double g) { return "e_g" + format_double(g); }

}  // namespace

int cmd_coeffs(const RunConfig& cfg) {
  const BathKernel k = cfg.kernel();
  const DCoefficients d = d_coefficients(k, true);

  const auto grid = cfg.time_grid();
  Table table{{"t", "re_u", "im_u", "abs_u"}, {}};
  double sup_weighted = 0.0;
  std::complex<double> u_last = 0.0;
  Series abs_series{"|u(t)|", {}, {}};
  for (double t : grid) {
    u_last = u_of_t(k, t);
    const double a = std::abs(u_last);
    table.rows.push_back({t, u_last.real(), u_last.imag(), a});
    sup_weighted = std::max(sup_weighted, a * (1.0 + t * t * t));
    abs_series.x.push_back(t);
    abs_series.y.push_back(a);
  }

  ojson body;
  ojson coeffs;
  for (int m : {1, 0, -1}) {
    const int s = DCoefficients::slot(m);
    ojson entry;
    entry["value"] = cjson(d.freq[s]);
    entry["pv_radius"] = d.pv_radius[s];
    const auto& ts = d.timeside[s];
    entry["timeside"] = ojson{{"value", cjson(ts.value)},
                              {"residual", ts.residual},
                              {"epsilons", ts.epsilons}};
    entry["route_gap"] = std::abs(d.freq[s] - ts.value);
    coeffs["m=" + std::to_string(m)] = entry;
  }
  body["coefficients"] = coeffs;
  body["re_d1"] = d.at(1).real();
  body["zero_checks"] = ojson{{"abs_re_d0", std::abs(d.at(0).real())},
                              {"abs_re_dm1", std::abs(d.at(-1).real())}};
  body["golden_rule_rate_positive"] = d.at(1).real() > 0.0;
  body["u_decay"] = ojson{{"sup_weighted", sup_weighted},
                          {"t_max", grid.back()},
                          {"n_points", static_cast<int>(grid.size())},
                          {"abs_u_at_t_max", std::abs(u_last)}};
  write_report(cfg, "coeffs", "coeffs.json", body);
  write_table(cfg, "u_grid.csv", table);

  PlotSpec plot;
  plot.title = "photon correlation kernel decay";
  plot.x_label = "t";
  plot.y_label = "|u(t)|";
  plot.log_y = true;
  plot.series.push_back(abs_series);
  write_svg(cfg, "u_decay.svg", plot);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const BathKernel k = cfg.kernel();
  DCoefficients d = d_coefficients(k);
  if (cfg.test_zero_fgr)
    for (auto& z : d.freq) z = complexd(0.0, z.imag());

  const GklsGenerator gen = build_generator(d);
  const Eigensystem es = eigensystem(gen);

  const double r1 = d.at(1).real();
  const double delta_im = d.at(1).imag() - d.at(-1).imag();
  struct Closed {
    complexd value;
    Coeffs4 coeffs;
    int top;
  };
  const std::array<Closed, 4> closed = {
      Closed{complexd(0.0, 0.0), Coeffs4(1, 0, 0, 0), 0},
      Closed{complexd(-r1, delta_im), Coeffs4(0, 1, 0, 0), 1},
      Closed{complexd(-r1, -delta_im), Coeffs4(0, 0, 0, 1), 3},
      Closed{complexd(-2.0 * r1, 0.0), Coeffs4(1, 0, 1, 0), 2},
  };

  ojson values = ojson::array();
  double max_value_residual = 0.0, max_vector_residual = 0.0, min_abs = 1e300;
  Table table{{"re", "im", "residual_value", "residual_vector"}, {}};
  for (const auto& pair : es.pairs) {
    const Closed* best = &closed[0];
    for (const auto& c : closed)
      if (std::abs(pair.value - c.value) < std::abs(pair.value - best->value)) best = &c;
    const double rv = std::abs(pair.value - best->value);
    const Coeffs4 c = decompose(pair.vector);
    double rvec = std::numeric_limits<double>::infinity();
    if (std::abs(c(best->top)) > 1e-300) {
      const Coeffs4 diff = c / c(best->top) - best->coeffs / best->coeffs(best->top);
      rvec = diff.cwiseAbs().maxCoeff();
    }
    values.push_back(ojson{{"re", pair.value.real()},
                           {"im", pair.value.imag()},
                           {"residual_value", rv},
                           {"residual_vector", rvec}});
    table.rows.push_back({pair.value.real(), pair.value.imag(), rv, rvec});
    max_value_residual = std::max(max_value_residual, rv);
    max_vector_residual = std::max(max_vector_residual, rvec);
    min_abs = std::min(min_abs, std::abs(pair.value));
  }

  ojson cp = ojson::array();
  bool cp_all_pass = true;
  for (double tau : {0.1, 1.0, 10.0}) {
    const CpReport rep = verify_cp(semigroup(gen, tau));
    cp_all_pass = cp_all_pass && rep.pass();
    cp.push_back(ojson{{"tau", tau},
                       {"min_choi_eigenvalue", rep.min_choi_eigenvalue},
                       {"trace_defect", rep.trace_defect},
                       {"unitality_defect", rep.unitality_defect},
                       {"pass", rep.pass()}});
  }

  ojson body;
  body["eigenvalues"] = values;
  body["closed_form"] = ojson{
      {"relaxation_rate", r1},
      {"imaginary_shift", delta_im},
      {"values", ojson::array({cjson(closed[0].value), cjson(closed[1].value),
                               cjson(closed[2].value), cjson(closed[3].value)})}};
  body["contains_zero"] = min_abs < 1e-12;
  body["max_value_residual"] = max_value_residual;
  body["max_vector_residual"] = max_vector_residual;
  body["defective"] = es.defective;
  body["cp"] = cp;
  body["cp_all_pass"] = cp_all_pass;
  write_report(cfg, "spectrum", "spectrum.json", body);
  write_table(cfg, "eigenvalues.csv", table);
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  const BathKernel k = cfg.kernel();
  const DCoefficients d = d_coefficients(k);
  const Propagator prop(build_generator(d), ExternalField{0.0, 0.0, cfg.beta});
  const double g = cfg.g_list.front();
  const auto grid = cfg.time_grid();

  Table table;
  PlotSpec plot;
  plot.x_label = "t";
  ojson body;
  body["g"] = g;
  body["mode"] = cfg.evolve.mode;

  if (cfg.evolve.mode == "bloch") {
    const Trajectory traj = prop.bloch_trajectory(spinor_from(cfg.evolve.spinor), grid, g);
    table.header = {"t", "sx", "sy", "sz"};
    plot.title = "Bloch trajectory, g = " + format_double(g);
    plot.y_label = "component";
    plot.series = {Series{"sx", {}, {}}, Series{"sy", {}, {}}, Series{"sz", {}, {}}};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const auto& v = traj.bloch[i];
      table.rows.push_back({traj.times[i], v(0), v(1), v(2)});
      for (int j = 0; j < 3; ++j) {
        plot.series[static_cast<std::size_t>(j)].x.push_back(traj.times[i]);
        plot.series[static_cast<std::size_t>(j)].y.push_back(v(j));
      }
    }
    body["spinor"] = cfg.evolve.spinor;
    const auto& last = traj.bloch.back();
    body["final"] = ojson{{"t", traj.times.back()},
                          {"sx", last(0)},
                          {"sy", last(1)},
                          {"sz", last(2)}};
  } else {
    const Mat2 sigma = sigma_from(cfg.evolve.sigma);
    table.header = {"t", "re_c_i", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus",
                    "re_c_0"};
    plot.title = "ladder coefficients of " + cfg.evolve.sigma + ", g = " + format_double(g);
    plot.y_label = "coefficient";
    for (const auto& name : {"re_c_i", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus",
                             "re_c_0"})
      plot.series.push_back(Series{name, {}, {}});
    Coeffs4 c = Coeffs4::Zero();
    for (double t : grid) {
      c = decompose(prop.approx_heisenberg(t, g, sigma));
      const std::array<double, 6> cols = {c(0).real(), c(1).real(), c(1).imag(),
                                          c(3).real(), c(3).imag(), c(2).real()};
      std::vector<double> row{t};
      for (std::size_t j = 0; j < cols.size(); ++j) {
        row.push_back(cols[j]);
        plot.series[j].x.push_back(t);
        plot.series[j].y.push_back(cols[j]);
      }
      table.rows.push_back(row);
    }
    body["sigma"] = cfg.evolve.sigma;
    body["final"] = ojson{{"t", grid.back()},
                          {"c_i", cjson(c(0))},
                          {"c_plus", cjson(c(1))},
                          {"c_0", cjson(c(2))},
                          {"c_minus", cjson(c(3))}};
  }

  write_report(cfg, "evolve", "evolve.json", body);
  write_table(cfg, "evolve.csv", table);
  write_svg(cfg, "evolve.svg", plot);
  return 0;
}

int cmd_oracle_compare(const RunConfig& cfg) {
  const BathKernel k = cfg.kernel();
  const Mat2 sigma = sigma_from(cfg.evolve.sigma);
  const ErrorCurve ec = error_curve(k, sigma, cfg.g_list, cfg.time_grid(), curve_config(cfg));

  Table table;
  table.header = {"t", "e_g0"};
  for (double g : ec.couplings) table.header.push_back(coupling_label(g));
  for (std::size_t i = 0; i < ec.times.size(); ++i) {
    std::vector<double> row{ec.times[i], ec.zero_trace[i]};
    for (const auto& trace : ec.traces) row.push_back(trace[i]);
    table.rows.push_back(row);
  }

  ojson couplings = ojson::array();
  double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
  Series curve{"sup error", {}, {}};
  for (std::size_t i = 0; i < ec.couplings.size(); ++i) {
    const double g = ec.couplings[i];
    const double e = ec.sup_error[i];
    ojson entry{{"g", g}, {"sup_error", e}};
    if (g > 0.0) {
      const double r = e / (g * g);
      entry["sup_error_over_g2"] = r;
      ratio_min = std::min(ratio_min, r);
      ratio_max = std::max(ratio_max, r);
      curve.x.push_back(g);
      curve.y.push_back(e);
    }
    couplings.push_back(entry);
  }

  ojson body;
  body["discretization"] = discretization_json(ec.discretization);
  body["couplings"] = couplings;
  if (ratio_min > 0.0 && std::isfinite(ratio_max) && ratio_max > 0.0)
    body["ratio_consistency"] = ratio_max / ratio_min;
  else
    body["ratio_consistency"] = nullptr;
  body["zero_coupling_error"] = ec.zero_coupling_error;
  body["discretization_error"] = ec.discretization_error;
  body["floor"] = ec.floor;
  body["status"] = ec.status;
  write_report(cfg, "oracle-compare", "compare.json", body);
  write_table(cfg, "traces.csv", table);

  PlotSpec plot;
  plot.title = "sup error versus coupling";
  plot.x_label = "g";
  plot.y_label = "sup |error|";
  plot.log_x = true;
  plot.log_y = true;
  std::vector<std::size_t> order(curve.x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return curve.x[a] < curve.x[b]; });
  Series sorted{curve.label, {}, {}};
  for (std::size_t i : order) {
    sorted.x.push_back(curve.x[i]);
    sorted.y.push_back(curve.y[i]);
  }
  plot.series.push_back(sorted);
  write_svg(cfg, "compare.svg", plot);
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.sweep.axis.empty()) throw ConfigError("sweep.axis is required");
  if (cfg.sweep.values.empty()) throw ConfigError("sweep.values must not be empty");
  const std::string watch =
      cfg.sweep.watch != "auto" ? cfg.sweep.watch
                                : (cfg.sweep.axis == "excitation_cap" ? "error" : "uhat");

  const bool integral_axis = cfg.sweep.axis != "omega_max";
  for (double v : cfg.sweep.values) {
    if (integral_axis && v != std::floor(v))
      throw ConfigError("sweep.values for " + cfg.sweep.axis + " must be integers");
    const double lo = cfg.sweep.axis == "excitation_cap" ? 0.0 : 1.0;
    if (!(v >= lo)) throw ConfigError("sweep.values out of range for " + cfg.sweep.axis);
  }

  const BathKernel k = cfg.kernel();
  Table table;
  ojson rows = ojson::array();
  Series curve{watch, {}, {}};
  ojson body;
  body["axis"] = cfg.sweep.axis;
  body["watch"] = watch;

  if (watch == "uhat") {
    // Shrink to the largest window every swept discretization can cover, so
    // the reported errors are comparable across the axis.
    double t_work = cfg.times.t_max;
    for (double v : cfg.sweep.values) {
      const double omega_max = cfg.sweep.axis == "omega_max" ? v : cfg.bath.omega_max;
      const double n = cfg.sweep.axis == "n_modes" ? v : cfg.bath.n_modes;
      t_work = std::min(t_work, cfg.bath.guard_fraction * 2.0 * kPi * n / omega_max);
    }
    body["t_work"] = t_work;
    table.header = {cfg.sweep.axis, "uhat_error"};
    for (double v : cfg.sweep.values) {
      const double omega_max = cfg.sweep.axis == "omega_max" ? v : cfg.bath.omega_max;
      const int n = cfg.sweep.axis == "n_modes" ? static_cast<int>(v) : cfg.bath.n_modes;
      const ModeSet ms = discretize_bath(k, omega_max, n, cfg.bath.rule, t_work,
                                         cfg.bath.guard_fraction, cfg.tolerances.discretization);
      table.rows.push_back({v, ms.report.max_kernel_error});
      rows.push_back(ojson{{"value", v}, {"uhat_error", ms.report.max_kernel_error}});
      curve.x.push_back(v);
      curve.y.push_back(ms.report.max_kernel_error);
    }
  } else {
    double g = 0.0;
    for (double c : cfg.g_list)
      if (c > 0.0) g = (g == 0.0) ? c : std::min(g, c);
    if (g == 0.0) throw ConfigError("sweep with watch=error requires a positive coupling");
    body["g"] = g;
    const Mat2 sigma = sigma_from(cfg.evolve.sigma);
    const auto grid = cfg.time_grid();
    table.header = {cfg.sweep.axis, "e", "floor"};
    for (double v : cfg.sweep.values) {
      ErrorCurveConfig ecfg = curve_config(cfg);
      if (cfg.sweep.axis == "n_modes") ecfg.n_modes = static_cast<int>(v);
      else if (cfg.sweep.axis == "excitation_cap") ecfg.excitation_cap = static_cast<int>(v);
      else ecfg.omega_max = v;
      const ErrorCurve ec = error_curve(k, sigma, {g}, grid, ecfg);
      table.rows.push_back({v, ec.sup_error[0], ec.floor});
      rows.push_back(ojson{{"value", v},
                           {"e", ec.sup_error[0]},
                           {"floor", ec.floor},
                           {"status", ec.status}});
      curve.x.push_back(v);
      curve.y.push_back(ec.sup_error[0]);
    }
  }

  body["rows"] = rows;
  write_report(cfg, "sweep", "sweep.json", body);
  write_table(cfg, "sweep.csv", table);

  PlotSpec plot;
  plot.title = "sweep over " + cfg.sweep.axis;
  plot.x_label = cfg.sweep.axis;
  plot.y_label = watch == "uhat" ? "max |uhat - u|" : "sup |error|";
  plot.log_y = true;
  plot.series.push_back(curve);
  write_svg(cfg, "sweep.svg", plot);
  return 0;
}

}  // namespace qsr
