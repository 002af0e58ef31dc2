// polsim CLI: simulate / sweep / steady / validate / preset.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polsim/scenario.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalAbort = 3;
constexpr int kExitValidationFailure = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw polsim::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_run(const polsim::RunResult& result) {
  std::cout << "wrote " << result.rows << " rows to " << result.csv_path << " (metadata "
            << result.meta_path << ", final ||L[rho]|| = "
            << polsim::format_double(result.final_l_norm) << ")\n";
}

int print_validation(const polsim::ValidationReport& report, bool verbose) {
  for (const auto& check : report.checks) {
    std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name;
    if (verbose || !check.pass)
      std::cout << "  (deviation " << polsim::format_double(check.deviation) << ", tolerance "
                << polsim::format_double(check.tolerance) << ")";
    std::cout << "\n";
  }
  if (report.all_pass()) {
    std::cout << "all checks passed\n";
    return 0;
  }
  std::cout << "validation FAILED\n";
  return kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polsim: thermal correlation dynamics of fiber-coupled polaritonic qubit chains"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "run one scenario from a JSON config");
  simulate->add_option("config", config_path, "scenario config JSON")->required();

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a JSON config");
  sweep->add_option("config", sweep_path, "sweep config JSON")->required();

  std::string steady_path;
  double t_guard = 500.0;
  auto* steady = app.add_subcommand("steady", "integrate a scenario to its steady state");
  steady->add_option("config", steady_path, "scenario config JSON")->required();
  steady->add_option("--t-guard", t_guard, "abort if no steady state by this time (default 500)");

  bool verbose = false;
  double tolerance_scale = 1.0;
  auto* validate = app.add_subcommand("validate", "run the oracle cross-check suite");
  validate->add_flag("--verbose", verbose, "print the numeric margin of every check");
  validate->add_option("--tolerance-scale", tolerance_scale,
                       "multiply every check tolerance (tighten with values < 1)");

  std::string preset_name;
  bool emit_config = false;
  std::string output_dir;
  double fig4_n = 0.0;
  auto* preset = app.add_subcommand("preset", "run (or emit) a published-figure preset");
  preset->add_option("name", preset_name, "one of fig2, fig3, fig4, fig5, fig6")->required();
  preset->add_flag("--emit-config", emit_config, "print the preset config instead of running");
  preset->add_option("--output-dir", output_dir, "override the preset output directory");
  preset->add_option("--n", fig4_n, "fiber occupation for the fig4 preset (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (simulate->parsed()) {
      print_run(polsim::run_scenario(polsim::parse_config(read_file(config_path))));
    } else if (sweep->parsed()) {
      const auto result = polsim::run_sweep(polsim::parse_sweep(read_file(sweep_path)));
      std::cout << "ran " << result.n_points << " sweep points (" << result.n_failed
                << " failed), index at " << result.index_path << "\n";
      if (result.n_failed > 0) return kExitNumericalAbort;
    } else if (steady->parsed()) {
      const auto spec = polsim::parse_config(read_file(steady_path));
      const auto result = polsim::run_steady(spec, t_guard);
      print_run(result);
    } else if (validate->parsed()) {
      return print_validation(polsim::run_validation(tolerance_scale), verbose);
    } else if (preset->parsed()) {
      auto cfg = polsim::preset_config(preset_name, fig4_n);
      if (!output_dir.empty()) cfg.config["output_dir"] = output_dir;
      if (emit_config) {
        std::cout << cfg.config.dump(2) << "\n";
        return 0;
      }
      const auto result = polsim::run_sweep(polsim::parse_sweep(cfg.config.dump()));
      std::cout << "ran " << result.n_points << " preset points (" << result.n_failed
                << " failed), index at " << result.index_path << "\n";
      if (result.n_failed > 0) return kExitNumericalAbort;
    }
  } catch (const polsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const polsim::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumericalAbort;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
