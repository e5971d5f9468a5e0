#include "qsr/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace qsr {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty() || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + value + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of numbers");
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "beta") beta = parse_double(key, value);
  else if (key == "g") g_list = {parse_double(key, value)};
  else if (key == "g_list") g_list = parse_double_list(key, value);
  else if (key == "cutoff.kind") cutoff.kind = value;
  else if (key == "cutoff.lambda") cutoff.lambda = parse_double(key, value);
  else if (key == "times.t_max") times.t_max = parse_double(key, value);
  else if (key == "times.n_points") times.n_points = static_cast<int>(parse_integer(key, value));
  else if (key == "bath.omega_max") bath.omega_max = parse_double(key, value);
  else if (key == "bath.n_modes") bath.n_modes = static_cast<int>(parse_integer(key, value));
  else if (key == "bath.rule") bath.rule = value;
  else if (key == "bath.guard_fraction") bath.guard_fraction = parse_double(key, value);
  else if (key == "oracle.excitation_cap")
    oracle.excitation_cap = static_cast<int>(parse_integer(key, value));
  else if (key == "oracle.dim_budget") oracle.dim_budget = parse_integer(key, value);
  else if (key == "oracle.propagator") oracle.propagator = value;
  else if (key == "oracle.dense_threshold")
    oracle.dense_threshold = static_cast<int>(parse_integer(key, value));
  else if (key == "oracle.krylov_m") oracle.krylov_m = static_cast<int>(parse_integer(key, value));
  else if (key == "tolerances.quadrature") tolerances.quadrature = parse_double(key, value);
  else if (key == "tolerances.propagation") tolerances.propagation = parse_double(key, value);
  else if (key == "tolerances.discretization")
    tolerances.discretization = parse_double(key, value);
  else if (key == "tolerances.timeside") tolerances.timeside = parse_double(key, value);
  else if (key == "output.directory") output.directory = value;
  else if (key == "output.formats") {
    output.formats = split_list(value);
  } else if (key == "evolve.spinor") evolve.spinor = value;
  else if (key == "evolve.sigma") evolve.sigma = value;
  else if (key == "evolve.mode") evolve.mode = value;
  else if (key == "sweep.axis") sweep.axis = value;
  else if (key == "sweep.values") sweep.values = parse_double_list(key, value);
  else if (key == "sweep.watch") sweep.watch = value;
  else if (key == "seed") seed = static_cast<long>(parse_integer(key, value));
  else if (key == "threads") threads = static_cast<int>(parse_integer(key, value));
  else throw ConfigError("unknown config key '" + key + "'");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "beta",
      "g",
      "g_list",
      "cutoff.kind",
      "cutoff.lambda",
      "times.t_max",
      "times.n_points",
      "bath.omega_max",
      "bath.n_modes",
      "bath.rule",
      "bath.guard_fraction",
      "oracle.excitation_cap",
      "oracle.dim_budget",
      "oracle.propagator",
      "oracle.dense_threshold",
      "oracle.krylov_m",
      "tolerances.quadrature",
      "tolerances.propagation",
      "tolerances.discretization",
      "tolerances.timeside",
      "output.directory",
      "output.formats",
      "evolve.spinor",
      "evolve.sigma",
      "evolve.mode",
      "sweep.axis",
      "sweep.values",
      "sweep.watch",
      "seed",
      "threads",
  };
  return keys;
}

void apply_env_overrides(RunConfig& cfg) {
  for (const auto& key : known_keys()) {
    std::string name = "QSR_";
    for (char c : key) name += (c == '.') ? '_' : static_cast<char>(std::toupper(c));
    if (const char* value = std::getenv(name.c_str())) cfg.set(key, value);
  }
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string stripped = trim(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const std::size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
      cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
  }
  apply_env_overrides(cfg);
  return cfg;
}

void RunConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
  try {
    cutoff.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // Fermi golden rule hypothesis: the relaxation rate pi J(2 beta) must not
  // vanish, which for this cutoff family means chi(2 beta) > 0 in double
  // precision.
  if (chi(cutoff, 2.0 * beta) == 0.0)
    throw ConfigError("golden-rule hypothesis violated: chi(2*beta) underflows to zero");
  for (double g : g_list)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("couplings must be finite and >= 0");
  if (g_list.empty()) throw ConfigError("at least one coupling is required");
  if (!(times.t_max >= 0.0) || !std::isfinite(times.t_max))
    throw ConfigError("times.t_max must be finite and >= 0");
  if (times.n_points < 1) throw ConfigError("times.n_points must be >= 1");
  if (times.n_points > 1 && !(times.t_max > 0.0))
    throw ConfigError("times.t_max must be positive when times.n_points > 1");
  if (!(bath.omega_max > 0.0)) throw ConfigError("bath.omega_max must be positive");
  if (bath.n_modes < 1) throw ConfigError("bath.n_modes must be >= 1");
  if (bath.rule != "midpoint" && bath.rule != "gauss")
    throw ConfigError("bath.rule must be 'midpoint' or 'gauss'");
  if (!(bath.guard_fraction > 0.0) || bath.guard_fraction > 1.0)
    throw ConfigError("bath.guard_fraction must lie in (0, 1]");
  if (oracle.excitation_cap < 0) throw ConfigError("oracle.excitation_cap must be >= 0");
  if (oracle.dim_budget < 2) throw ConfigError("oracle.dim_budget must be >= 2");
  if (oracle.propagator != "auto" && oracle.propagator != "dense" &&
      oracle.propagator != "krylov")
    throw ConfigError("oracle.propagator must be 'auto', 'dense', or 'krylov'");
  if (oracle.dense_threshold < 0) throw ConfigError("oracle.dense_threshold must be >= 0");
  if (oracle.krylov_m < 2) throw ConfigError("oracle.krylov_m must be >= 2");
  for (double tol : {tolerances.quadrature, tolerances.propagation, tolerances.discretization,
                     tolerances.timeside})
    if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (output.formats.empty()) throw ConfigError("output.formats must not be empty");
  for (const auto& f : output.formats)
    if (f != "csv" && f != "json" && f != "svg")
      throw ConfigError("unknown output format '" + f + "'");
  if (evolve.spinor != "up" && evolve.spinor != "down" && evolve.spinor != "plus" &&
      evolve.spinor != "minus" && evolve.spinor != "plus_i")
    throw ConfigError("unknown evolve.spinor '" + evolve.spinor + "'");
  if (evolve.sigma != "sigma1" && evolve.sigma != "sigma2" && evolve.sigma != "sigma3" &&
      evolve.sigma != "identity")
    throw ConfigError("unknown evolve.sigma '" + evolve.sigma + "'");
  if (evolve.mode != "bloch" && evolve.mode != "coefficients")
    throw ConfigError("evolve.mode must be 'bloch' or 'coefficients'");
  if (!sweep.axis.empty() && sweep.axis != "n_modes" && sweep.axis != "excitation_cap" &&
      sweep.axis != "omega_max")
    throw ConfigError("sweep.axis must be 'n_modes', 'excitation_cap', or 'omega_max'");
  if (sweep.watch != "auto" && sweep.watch != "uhat" && sweep.watch != "error")
    throw ConfigError("sweep.watch must be 'auto', 'uhat', or 'error'");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

BathKernel RunConfig::kernel() const {
  BathKernel k;
  k.cutoff = cutoff;
  k.beta = beta;
  k.quad.tol = tolerances.quadrature;
  return k;
}

std::vector<double> RunConfig::time_grid() const {
  std::vector<double> grid;
  if (times.n_points == 1) {
    grid.push_back(0.0);
    return grid;
  }
  grid.reserve(static_cast<std::size_t>(times.n_points));
  for (int i = 0; i < times.n_points; ++i)
    grid.push_back(times.t_max * static_cast<double>(i) / (times.n_points - 1));
  return grid;
}

EvolverSettings RunConfig::evolver_settings() const {
  EvolverSettings s;
  if (oracle.propagator == "dense") s.dense_threshold = std::numeric_limits<int>::max();
  else if (oracle.propagator == "krylov") s.dense_threshold = 0;
  else s.dense_threshold = oracle.dense_threshold;
  s.krylov_m = oracle.krylov_m;
  s.step_tol = tolerances.propagation;
  return s;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) !=
         output.formats.end();
}

}  // namespace qsr
