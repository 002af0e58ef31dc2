#include "polsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "polsim/squeezing.hpp"

namespace polsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kMeasureNames = {"concurrence", "discord", "mutual_information",
                                                "spin_squeezing", "moments"};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return j.get<double>();
}

long require_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return j.get<long>();
}

Eigen::VectorXd parse_rate_vector(const json& j, const std::string& key, int expected) {
  if (!j.is_array()) throw ConfigError("field '" + key + "' must be an array");
  if (static_cast<int>(j.size()) != expected) {
    std::ostringstream msg;
    msg << key << " length " << j.size() << " ≠ n_sites-1 = " << expected;
    throw ConfigError(msg.str());
  }
  Eigen::VectorXd out(expected);
  for (int i = 0; i < expected; ++i) {
    out[i] = require_number(j[i], key);
    if (!std::isfinite(out[i]) || out[i] < 0.0)
      throw ConfigError("field '" + key + "' entries must be finite and nonnegative");
  }
  return out;
}

}  // namespace

DensityMatrix ScenarioSpec::initial_state() const {
  QubitRegister reg(n_sites);
  if (!initial_label.empty()) return density_from_pure(basis_state(initial_label, reg));
  return density_from_pure(PureState(reg, initial_amplitudes));
}

BathSpec ScenarioSpec::bath() const { return BathSpec(gammas, occupations); }

EvolutionConfig ScenarioSpec::evolution_config() const {
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.record_stride = record_stride;
  cfg.steady_tol = steady_tol;
  return cfg;
}

json ScenarioSpec::echo() const {
  json j;
  j["n_sites"] = n_sites;
  if (!initial_label.empty()) {
    j["initial"] = initial_label;
  } else {
    json amps = json::array();
    for (long i = 0; i < initial_amplitudes.size(); ++i)
      amps.push_back({initial_amplitudes[i].real(), initial_amplitudes[i].imag()});
    j["initial"] = amps;
  }
  j["gammas"] = std::vector<double>(gammas.begin(), gammas.end());
  j["occupations"] = std::vector<double>(occupations.begin(), occupations.end());
  j["dt"] = dt;
  j["t_max"] = t_max;
  j["record_stride"] = record_stride;
  j["steady_tol"] = steady_tol;
  std::vector<std::string> ms;
  const bool flags[5] = {measures.concurrence, measures.discord, measures.mutual_information,
                         measures.spin_squeezing, measures.moments};
  for (int i = 0; i < 5; ++i)
    if (flags[i]) ms.push_back(kMeasureNames[i]);
  j["measures"] = ms;
  json prs = json::array();
  for (const auto& [a, b] : pairs) prs.push_back({a, b});
  j["pairs"] = prs;
  j["output_path"] = output_path.empty() ? "polsim_out.csv" : output_path;
  return j;
}

ScenarioSpec parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {"n_sites",    "initial",       "gammas",
                                              "occupations", "dt",           "t_max",
                                              "record_stride", "steady_tol", "measures",
                                              "pairs",      "output_path"};
  std::vector<std::string> unknown;
  for (const auto& item : j.items())
    if (!known.count(item.key())) unknown.push_back(item.key());
  if (!unknown.empty()) throw ConfigError("unknown keys: " + join(unknown, ", "));

  ScenarioSpec spec;
  if (!j.contains("n_sites")) throw ConfigError("missing required key 'n_sites'");
  const long n = require_integer(j["n_sites"], "n_sites");
  if (n < 1 || n > kMaxSites)
    throw ConfigError("n_sites must be in [1, " + std::to_string(kMaxSites) + "]");
  spec.n_sites = static_cast<int>(n);
  const long dim = 1L << spec.n_sites;

  if (!j.contains("initial")) throw ConfigError("missing required key 'initial'");
  const json& init = j["initial"];
  if (init.is_string()) {
    const std::string label = init.get<std::string>();
    if (static_cast<long>(label.size()) != n) {
      std::ostringstream msg;
      msg << "initial length " << label.size() << " ≠ n_sites " << n;
      throw ConfigError(msg.str());
    }
    for (char ch : label)
      if (ch != 'G' && ch != 'E') throw ConfigError("initial labels use symbols G and E only");
    spec.initial_label = label;
  } else if (init.is_array()) {
    if (static_cast<long>(init.size()) != dim)
      throw ConfigError("initial amplitude list must have length 2^n_sites");
    spec.initial_amplitudes.resize(dim);
    for (long i = 0; i < dim; ++i) {
      const json& entry = init[i];
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError("initial amplitudes must be [re, im] pairs");
      spec.initial_amplitudes[i] =
          Complex(require_number(entry[0], "initial"), require_number(entry[1], "initial"));
    }
    const double norm = spec.initial_amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-9)
      throw ConfigError("initial amplitude list is not normalized");
    spec.initial_amplitudes /= norm;
  } else {
    throw ConfigError("field 'initial' must be a basis label or an amplitude list");
  }

  if (!j.contains("occupations")) throw ConfigError("missing required key 'occupations'");
  const int n_fibers = spec.n_sites - 1;
  spec.occupations = parse_rate_vector(j["occupations"], "occupations", n_fibers);
  spec.gammas = j.contains("gammas") ? parse_rate_vector(j["gammas"], "gammas", n_fibers)
                                     : Eigen::VectorXd::Ones(n_fibers).eval();

  if (j.contains("dt")) spec.dt = require_number(j["dt"], "dt");
  if (j.contains("t_max")) spec.t_max = require_number(j["t_max"], "t_max");
  if (j.contains("record_stride"))
    spec.record_stride = static_cast<int>(require_integer(j["record_stride"], "record_stride"));
  if (j.contains("steady_tol")) spec.steady_tol = require_number(j["steady_tol"], "steady_tol");
  try {
    spec.evolution_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("measures")) {
    if (!j["measures"].is_array()) throw ConfigError("field 'measures' must be an array");
    MeasureSet ms;
    ms.concurrence = ms.discord = ms.mutual_information = ms.spin_squeezing = ms.moments = false;
    for (const json& entry : j["measures"]) {
      if (!entry.is_string()) throw ConfigError("measure names must be strings");
      const std::string name = entry.get<std::string>();
      if (name == "concurrence") ms.concurrence = true;
      else if (name == "discord") ms.discord = true;
      else if (name == "mutual_information") ms.mutual_information = true;
      else if (name == "spin_squeezing") ms.spin_squeezing = true;
      else if (name == "moments") ms.moments = true;
      else throw ConfigError("unknown measure name: " + name);
    }
    spec.measures = ms;
  }

  if (!j.contains("pairs") || (j["pairs"].is_string() && j["pairs"] == "all")) {
    for (int a = 1; a <= spec.n_sites; ++a)
      for (int b = a + 1; b <= spec.n_sites; ++b) spec.pairs.emplace_back(a, b);
  } else if (j["pairs"].is_array()) {
    for (const json& entry : j["pairs"]) {
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError("pairs must be [i, j] site pairs");
      const long a = require_integer(entry[0], "pairs");
      const long b = require_integer(entry[1], "pairs");
      if (a < 1 || b <= a || b > spec.n_sites)
        throw ConfigError("pairs must satisfy 1 <= i < j <= n_sites");
      spec.pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    std::sort(spec.pairs.begin(), spec.pairs.end());
    if (std::adjacent_find(spec.pairs.begin(), spec.pairs.end()) != spec.pairs.end())
      throw ConfigError("duplicate entries in 'pairs'");
  } else {
    throw ConfigError("field 'pairs' must be \"all\" or a list of [i, j] pairs");
  }

  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) throw ConfigError("field 'output_path' must be a string");
    spec.output_path = j["output_path"].get<std::string>();
  }
  return spec;
}

CorrelationRecord evaluate_record(double t, const DensityMatrix& rho,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  const MeasureSet& measures) {
  CorrelationRecord rec;
  rec.t = t;
  rec.trace_dev = rho.trace_deviation();
  if (std::abs(rec.trace_dev) >= 1e-8) throw NumericalError("recorded sample lost the trace");
  rec.min_eig = rho.min_eigenvalue();

  for (const auto& [i, j] : pairs) {
    const PairState pair = pair_state(rho, i, j);
    if (measures.concurrence) rec.concurrence.push_back(concurrence(pair));
    if (measures.discord) {
      rec.discord_meas_b.push_back(discord(pair, MeasuredSide::B).discord);
      rec.discord_meas_a.push_back(discord(pair, MeasuredSide::A).discord);
    }
    if (measures.mutual_information) rec.mutual_information.push_back(mutual_information(pair));
  }

  if (measures.spin_squeezing || measures.moments) {
    const CollectiveMoments moments = collective_moments(rho);
    rec.mean_spin = moments.mean;
    if (measures.spin_squeezing) {
      try {
        rec.xi_squared = spin_squeezing(moments).xi_squared;
        rec.xi_defined = true;
      } catch (const UndefinedSqueezingError&) {
        rec.xi_squared = std::numeric_limits<double>::quiet_NaN();
        rec.xi_defined = false;
      }
    }
  }
  return rec;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_header(const ScenarioSpec& spec) {
  std::vector<std::string> cols{"t"};
  for (const auto& [i, j] : spec.pairs) {
    const std::string tag = std::to_string(i) + "_" + std::to_string(j);
    if (spec.measures.concurrence) cols.push_back("C_" + tag);
    if (spec.measures.discord) {
      cols.push_back("D_" + tag + "_measB");
      cols.push_back("D_" + tag + "_measA");
    }
    if (spec.measures.mutual_information) cols.push_back("I_" + tag);
  }
  if (spec.measures.spin_squeezing) {
    cols.push_back("xi2");
    cols.push_back("xi2_defined");
  }
  if (spec.measures.moments) {
    cols.push_back("Jx");
    cols.push_back("Jy");
    cols.push_back("Jz");
  }
  cols.push_back("trace_dev");
  cols.push_back("min_eig");
  return join(cols, ",");
}

std::string csv_row(const CorrelationRecord& rec, const MeasureSet& measures) {
  std::vector<std::string> cols{format_double(rec.t)};
  const size_t n_pairs = measures.concurrence   ? rec.concurrence.size()
                         : measures.discord     ? rec.discord_meas_b.size()
                                                : rec.mutual_information.size();
  for (size_t p = 0; p < n_pairs; ++p) {
    if (measures.concurrence) cols.push_back(format_double(rec.concurrence[p]));
    if (measures.discord) {
      cols.push_back(format_double(rec.discord_meas_b[p]));
      cols.push_back(format_double(rec.discord_meas_a[p]));
    }
    if (measures.mutual_information) cols.push_back(format_double(rec.mutual_information[p]));
  }
  if (measures.spin_squeezing) {
    cols.push_back(format_double(rec.xi_squared));
    cols.push_back(rec.xi_defined ? "1" : "0");
  }
  if (measures.moments) {
    cols.push_back(format_double(rec.mean_spin[0]));
    cols.push_back(format_double(rec.mean_spin[1]));
    cols.push_back(format_double(rec.mean_spin[2]));
  }
  cols.push_back(format_double(rec.trace_dev));
  cols.push_back(format_double(rec.min_eig));
  return join(cols, ",");
}

namespace {

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::vector<CorrelationRecord> evaluate_all(const Trajectory& traj, const ScenarioSpec& spec) {
  const long n = static_cast<long>(traj.times.size());
  std::vector<CorrelationRecord> records(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      records[i] = evaluate_record(traj.times[i], traj.states[i], spec.pairs, spec.measures);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (long i = 0; i < n; ++i)
    if (!errors[i].empty())
      throw NumericalError("sample at t=" + format_double(traj.times[i]) + ": " + errors[i]);
  return records;
}

RunResult write_outputs(const ScenarioSpec& spec, const std::vector<CorrelationRecord>& records,
                        double final_l_norm, double wall_seconds) {
  RunResult result;
  result.csv_path = spec.output_path.empty() ? "polsim_out.csv" : spec.output_path;
  result.meta_path = result.csv_path + ".meta.json";
  result.rows = static_cast<long>(records.size());
  result.final_l_norm = final_l_norm;

  ensure_parent_dir(result.csv_path);
  std::ofstream csv(result.csv_path, std::ios::binary);
  if (!csv) throw ConfigError("cannot open output file: " + result.csv_path);
  csv << csv_header(spec) << "\n";
  for (const auto& rec : records) csv << csv_row(rec, spec.measures) << "\n";
  csv.close();

  json meta;
  meta["version"] = kVersion;
  meta["spec"] = spec.echo();
  meta["rows"] = result.rows;
  meta["final_l_norm"] = final_l_norm;
  meta["wall_time_s"] = wall_seconds;
  std::ofstream metaf(result.meta_path, std::ios::binary);
  metaf << meta.dump(2) << "\n";
  return result;
}

}  // namespace

RunResult run_scenario(const ScenarioSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  const DensityMatrix rho0 = spec.initial_state();
  const BathSpec bath = spec.bath();
  const Trajectory traj = evolve(rho0, bath, spec.evolution_config());
  const auto records = evaluate_all(traj, spec);
  const double final_norm = liouvillian_apply(traj.states.back(), bath).norm();
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs(spec, records, final_norm, wall);
}

RunResult run_steady(const ScenarioSpec& spec, double t_guard) {
  const auto start = std::chrono::steady_clock::now();
  const SteadyResult steady =
      steady_state(spec.initial_state(), spec.bath(), spec.steady_tol, t_guard, spec.dt);
  const CorrelationRecord rec =
      evaluate_record(steady.reach_time, steady.state, spec.pairs, spec.measures);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return write_outputs(spec, {rec}, steady.final_norm, wall);
}

long SweepSpec::n_points() const {
  long n = 1;
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.path + "' has no values");
    n *= static_cast<long>(axis.values.size());
  }
  return n;
}

SweepSpec parse_sweep(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  std::vector<std::string> unknown;
  for (const auto& item : j.items())
    if (item.key() != "base" && item.key() != "axes" && item.key() != "output_dir")
      unknown.push_back(item.key());
  if (!unknown.empty()) throw ConfigError("unknown keys: " + join(unknown, ", "));
  if (!j.contains("base") || !j["base"].is_object())
    throw ConfigError("sweep config needs a 'base' scenario object");

  SweepSpec spec;
  spec.base = j["base"];
  spec.output_dir = j.value("output_dir", std::string("sweep_out"));
  if (j.contains("axes")) {
    if (!j["axes"].is_array()) throw ConfigError("field 'axes' must be an array");
    for (const json& axis : j["axes"]) {
      if (!axis.is_object() || !axis.contains("path") || !axis.contains("values") ||
          !axis["path"].is_string() || !axis["values"].is_array())
        throw ConfigError("each axis must be {\"path\": ..., \"values\": [...]}");
      SweepAxis a;
      a.path = axis["path"].get<std::string>();
      for (const json& v : axis["values"]) a.values.push_back(v);
      spec.axes.push_back(std::move(a));
    }
  }
  if (spec.n_points() > 10000) throw ConfigError("sweep grid exceeds the 10^4 point guard");
  return spec;
}

namespace {

void set_by_path(json& cfg, const std::string& path, const json& value) {
  const auto bracket = path.find('[');
  if (bracket == std::string::npos) {
    cfg[path] = value;
    return;
  }
  if (path.back() != ']') throw ConfigError("malformed parameter path: " + path);
  const std::string name = path.substr(0, bracket);
  const std::string idx_str = path.substr(bracket + 1, path.size() - bracket - 2);
  long idx = -1;
  const auto res = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
  if (res.ec != std::errc() || res.ptr != idx_str.data() + idx_str.size() || idx < 0)
    throw ConfigError("malformed parameter path: " + path);
  if (!cfg.contains(name) || !cfg[name].is_array() ||
      idx >= static_cast<long>(cfg[name].size()))
    throw ConfigError("parameter path '" + path + "' does not address the base config");
  cfg[name][idx] = value;
}

std::string value_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string path_token(const std::string& path) {
  std::string out;
  for (char ch : path) {
    if (ch == '[') out += '_';
    else if (ch != ']') out += ch;
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  const long n_points = spec.n_points();  // also validates axis value lists
  fs::create_directories(spec.output_dir);

  struct Point {
    std::string file;
    json params = json::object();
    std::string error;
    bool ok = false;
  };
  std::vector<Point> points(n_points);

  // decompose point index in mixed radix, last axis fastest
  for (long k = 0; k < n_points; ++k) {
    long rem = k;
    std::vector<std::string> tokens;
    std::vector<std::pair<std::string, json>> sets;
    for (long a = static_cast<long>(spec.axes.size()) - 1; a >= 0; --a) {
      const auto& axis = spec.axes[a];
      const long m = static_cast<long>(axis.values.size());
      const json& v = axis.values[rem % m];
      rem /= m;
      tokens.insert(tokens.begin(), path_token(axis.path) + "=" + value_token(v));
      sets.insert(sets.begin(), {axis.path, v});
    }
    points[k].file = tokens.empty() ? "base.csv" : join(tokens, "__") + ".csv";
    for (const auto& [p, v] : sets) points[k].params[p] = v;
  }

#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n_points; ++k) {
    try {
      json cfg = spec.base;
      for (const auto& item : points[k].params.items())
        set_by_path(cfg, item.key(), item.value());
      cfg["output_path"] = (fs::path(spec.output_dir) / points[k].file).string();
      run_scenario(parse_config(cfg.dump()));
      points[k].ok = true;
    } catch (const std::exception& e) {
      points[k].error = e.what();
    }
  }

  json index;
  index["output_dir"] = spec.output_dir;
  index["points"] = json::array();
  long n_failed = 0;
  for (const auto& pt : points) {
    json entry;
    entry["file"] = pt.file;
    entry["params"] = pt.params;
    entry["status"] = pt.ok ? "ok" : "error";
    if (!pt.ok) {
      entry["error"] = pt.error;
      ++n_failed;
    }
    index["points"].push_back(entry);
  }
  SweepResult result;
  result.index_path = (fs::path(spec.output_dir) / "index.json").string();
  result.n_points = n_points;
  result.n_failed = n_failed;
  std::ofstream out(result.index_path, std::ios::binary);
  out << index.dump(2) << "\n";
  return result;
}

PresetConfig preset_config(const std::string& name, double fig4_occupation) {
  json base;
  json axes = json::array();
  if (name == "fig2") {
    base = {{"n_sites", 3}, {"initial", "GGG"}, {"occupations", {0.2, 0.0}}};
    axes.push_back({{"path", "occupations[0]"}, {"values", {0.2, 1.0}}});
  } else if (name == "fig3") {
    base = {{"n_sites", 3}, {"initial", "EEE"}, {"occupations", {0.0, 0.0}}};
    axes.push_back({{"path", "occupations[0]"}, {"values", {0.0, 0.2}}});
  } else if (name == "fig4") {
    base = {{"n_sites", 3},
            {"initial", "GGG"},
            {"occupations", {fig4_occupation, fig4_occupation}}};
    axes.push_back({{"path", "initial"}, {"values", {"GGG", "EEE", "EEG"}}});
  } else if (name == "fig5") {
    base = {{"n_sites", 5}, {"initial", "GGGGG"}, {"occupations", {0.0, 0.2, 0.0, 0.0}}};
    axes.push_back({{"path", "occupations[1]"}, {"values", {0.2, 1.0}}});
  } else if (name == "fig6") {
    base = {{"n_sites", 5}, {"initial", "EEEEE"}, {"occupations", {0.0, 0.2, 0.0, 0.0}}};
    axes.push_back({{"path", "occupations[1]"}, {"values", {0.2, 1.0}}});
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  PresetConfig preset;
  preset.is_sweep = true;
  preset.config = {{"base", base}, {"axes", axes}, {"output_dir", "preset_" + name}};
  return preset;
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6"}; }

bool ValidationReport::all_pass() const {
  for (const auto& check : checks)
    if (!check.pass) return false;
  return true;
}

}  // namespace polsim
