#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <json.hpp>
#include <string>

#include "qsr/cli.hpp"
#include "qsr/quadrature.hpp"

namespace {

int fail(int code, const std::string& type, const std::string& message) {
  nlohmann::ordered_json record;
  record["schema_version"] = "1";
  record["error"] = nlohmann::ordered_json{{"type", type}, {"message", message}};
  std::cout << record.dump(2) << '\n';
  return code;
}

std::vector<std::string> split_formats(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin relaxation artifact: GKLS approximation versus truncated-Fock oracle"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string config_path, out_dir, formats, axis;
  int threads = -1;
  long seed = 0;
  bool zero_fgr = false;
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--format", formats, "comma-separated formats: csv,json,svg");
  app.add_option("--threads", threads, "worker threads (0 = hardware default)");
  auto* seed_opt = app.add_option("--seed", seed, "seed recorded in reports");

  auto* c_coeffs = app.add_subcommand("coeffs", "bath coefficients d_m via both routes");
  auto* c_spectrum = app.add_subcommand("spectrum", "generator eigensystem and CP checks");
  c_spectrum->add_flag("--test-zero-fgr", zero_fgr,
                       "zero out all dissipative rates (diagnostic)");
  auto* c_evolve = app.add_subcommand("evolve", "approximate spin dynamics");
  auto* c_compare = app.add_subcommand("oracle-compare", "error curve against the Fock oracle");
  auto* c_sweep = app.add_subcommand("sweep", "watch a quantity along a discretization axis");
  c_sweep->add_option("--axis", axis, "n_modes | excitation_cap | omega_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fail(2, "usage", e.what());
  }

  try {
    qsr::RunConfig cfg = qsr::load_config(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    if (!formats.empty()) cfg.output.formats = split_formats(formats);
    if (threads >= 0) cfg.threads = threads;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (!axis.empty()) cfg.sweep.axis = axis;
    cfg.test_zero_fgr = zero_fgr;
    cfg.validate();

    if (c_coeffs->parsed()) return qsr::cmd_coeffs(cfg);
    if (c_spectrum->parsed()) return qsr::cmd_spectrum(cfg);
    if (c_evolve->parsed()) return qsr::cmd_evolve(cfg);
    if (c_compare->parsed()) return qsr::cmd_oracle_compare(cfg);
    if (c_sweep->parsed()) return qsr::cmd_sweep(cfg);
    return fail(2, "usage", "no subcommand selected");
  } catch (const qsr::ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "config", e.what());
  } catch (const qsr::QuadratureError& e) {
    return fail(1, "quadrature", e.what());
  } catch (const std::exception& e) {
    return fail(1, "numerical", e.what());
  }
}
