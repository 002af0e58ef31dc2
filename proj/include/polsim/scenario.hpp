#pragma once

// Config ingestion, scenario execution, parameter sweeps, figure presets and
// the oracle cross-check suite -- the CLI face of the library.

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polsim/dynamics.hpp"
#include "polsim/measures.hpp"

namespace polsim {

inline constexpr const char* kVersion = "1.0.0";

struct MeasureSet {
  bool concurrence = true;
  bool discord = true;
  bool mutual_information = true;
  bool spin_squeezing = true;
  bool moments = true;
};

struct ScenarioSpec {
  int n_sites = 0;
  std::string initial_label;            // empty when amplitudes are given
  Eigen::VectorXcd initial_amplitudes;  // size 0 when a label is given
  Eigen::VectorXd gammas;
  Eigen::VectorXd occupations;
  double dt = 1e-3;
  double t_max = 50.0;
  int record_stride = 100;
  double steady_tol = 1e-9;
  MeasureSet measures;
  std::vector<std::pair<int, int>> pairs;  // resolved, lexicographic
  std::string output_path;                 // empty -> "polsim_out.csv"

  DensityMatrix initial_state() const;
  BathSpec bath() const;
  EvolutionConfig evolution_config() const;
  nlohmann::json echo() const;  // canonical resolved form
};

// Parses and validates a scenario config; unknown keys, length mismatches and
// malformed values raise ConfigError.
ScenarioSpec parse_config(const std::string& text);

// One recorded trajectory sample with every requested measure.
struct CorrelationRecord {
  double t = 0.0;
  std::vector<double> concurrence;       // per pair
  std::vector<double> discord_meas_b;    // measurement on the later site j
  std::vector<double> discord_meas_a;    // measurement on the earlier site i
  std::vector<double> mutual_information;
  double xi_squared = std::numeric_limits<double>::quiet_NaN();
  bool xi_defined = false;
  Eigen::Vector3d mean_spin = Eigen::Vector3d::Zero();
  double trace_dev = 0.0;
  double min_eig = 0.0;
};

CorrelationRecord evaluate_record(double t, const DensityMatrix& rho,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  const MeasureSet& measures);

std::string csv_header(const ScenarioSpec& spec);
std::string csv_row(const CorrelationRecord& record, const MeasureSet& measures);

// Shortest round-trip decimal representation; NaN prints as "nan".
std::string format_double(double v);

struct RunResult {
  std::string csv_path;
  std::string meta_path;
  long rows = 0;
  double final_l_norm = 0.0;
};

// Integrates, evaluates measures at the recorded samples, writes the CSV and
// a JSON metadata sidecar. Byte-identical CSV for identical specs.
RunResult run_scenario(const ScenarioSpec& spec);

// Single steady-state solve; writes a one-row CSV at the reach time.
RunResult run_steady(const ScenarioSpec& spec, double t_guard);

struct SweepAxis {
  std::string path;  // e.g. "occupations[0]", "dt", "initial"
  std::vector<nlohmann::json> values;
};

struct SweepSpec {
  nlohmann::json base;
  std::vector<SweepAxis> axes;
  std::string output_dir;

  long n_points() const;
};

SweepSpec parse_sweep(const std::string& text);

struct SweepResult {
  std::string index_path;
  long n_points = 0;
  long n_failed = 0;
};

// Runs every grid point into output_dir (points may execute concurrently),
// then writes an index JSON mapping points to files and statuses.
SweepResult run_sweep(const SweepSpec& spec);

struct PresetConfig {
  bool is_sweep = false;
  nlohmann::json config;
};

// Named presets fig2..fig6 matching the published parameter regimes; fig4
// exposes the fiber occupation as a parameter (caption does not fix it).
PresetConfig preset_config(const std::string& name, double fig4_occupation = 0.0);
std::vector<std::string> preset_names();

struct ValidationCheck {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

// Oracle cross-check suite (dense vs fast Liouvillian, RK4 vs expm, discord
// optimizer vs grid, squeezing eigenvalue vs scan, steady state vs kernel).
ValidationReport run_validation(double tolerance_scale = 1.0);

}  // namespace polsim
