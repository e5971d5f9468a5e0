#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsr/fock_oracle.hpp"
#include "qsr/photon_kernel.hpp"

namespace qsr {

// Config errors exit with status 2; numerical failures exit with status 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double beta = 1.0;
  std::vector<double> g_list{0.2, 0.1, 0.05};
  CutoffSpec cutoff;

  struct Times {
    double t_max = 10.0;
    int n_points = 101;
  } times;

  struct Bath {
    double omega_max = 16.0;
    int n_modes = 200;
    std::string rule = "midpoint";
    double guard_fraction = 0.75;
  } bath;

  struct Oracle {
    int excitation_cap = 2;
    std::int64_t dim_budget = 2000000;
    std::string propagator = "auto";  // auto | dense | krylov
    int dense_threshold = 2000;
    int krylov_m = 20;
  } oracle;

  struct Tolerances {
    double quadrature = 1e-9;
    double propagation = 1e-10;
    double discretization = 1e-6;
    double timeside = 1e-4;
  } tolerances;

  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};
  } output;

  struct Evolve {
    std::string spinor = "up";      // up | down | plus | minus | plus_i
    std::string sigma = "sigma3";   // sigma1 | sigma2 | sigma3 | identity
    std::string mode = "bloch";     // bloch | coefficients
  } evolve;

  struct Sweep {
    std::string axis;  // n_modes | excitation_cap | omega_max
    std::vector<double> values;
    std::string watch = "auto";  // auto | uhat | error
  } sweep;

  long seed = 0;
  int threads = 0;
  bool test_zero_fgr = false;

  void set(const std::string& key, const std::string& value);
  void validate() const;

  BathKernel kernel() const;
  std::vector<double> time_grid() const;
  EvolverSettings evolver_settings() const;
  bool wants(const std::string& format) const;
};

const std::vector<std::string>& known_keys();
// File values (flat key=value lines), then QSR_* environment overrides.
RunConfig load_config(const std::string& path);
void apply_env_overrides(RunConfig& cfg);

int cmd_coeffs(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_oracle_compare(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

}  // namespace qsr
