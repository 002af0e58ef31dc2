#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "helpers.hpp"
#include "polsim/kernels.hpp"
#include "polsim/oracle.hpp"
#include "polsim/scenario.hpp"

using namespace polsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    rows.push_back(std::move(fields));
  }
  return rows;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("scenario_test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int column_of(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("parse_config applies defaults and validates") {
  const ScenarioSpec spec =
      parse_config(R"({"n_sites":3,"initial":"GGG","occupations":[0.2,0.0]})");
  CHECK(spec.n_sites == 3);
  CHECK(spec.initial_label == "GGG");
  CHECK(spec.gammas.size() == 2);
  CHECK(spec.gammas[0] == 1.0);
  CHECK(spec.gammas[1] == 1.0);
  CHECK(spec.occupations[0] == 0.2);
  CHECK(spec.dt == 1e-3);
  CHECK(spec.t_max == 50.0);
  CHECK(spec.record_stride == 100);
  CHECK(spec.steady_tol == 1e-9);
  CHECK(spec.pairs.size() == 3);
  CHECK(spec.pairs[0] == std::pair<int, int>{1, 2});
  CHECK(spec.pairs[2] == std::pair<int, int>{2, 3});
  CHECK(spec.measures.discord);
  CHECK(spec.measures.moments);

  const ScenarioSpec tiny = parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0]})");
  CHECK(tiny.pairs.size() == 1);
}

TEST_CASE("parse_config rejects malformed documents") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"n_sites":3,"initial":"GG"})"),
                       doctest::Contains("initial length 2 ≠ n_sites 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"n_sites":2,"initial":"GG","ocupations":[0.0]})"),
                       doctest::Contains("ocupations"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0,0.1]})"),
      doctest::Contains("occupations"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n_sites":2,"initial":"GX","occupations":[0.0]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n_sites":2,"initial":"GG","occupations":[-0.2]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0],"dt":0.5})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0],"measures":["x"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0],"pairs":[[2,1]]})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);

  // non-normalized amplitude list
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"n_sites":1,"initial":[[0.8,0.0],[0.0,0.0]],"occupations":[]})"),
      doctest::Contains("not normalized"), ConfigError);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("stationary ground scenario emits all-zero correlation columns") {
  const fs::path dir = fresh_dir("stationary");
  ScenarioSpec spec = parse_config(R"({"n_sites":2,"initial":"GG","occupations":[0.0],
      "t_max":2.0,"output_path":")" + (dir / "run.csv").string() + R"("})");
  const RunResult result = run_scenario(spec);
  CHECK(result.rows == 21);
  CHECK(result.final_l_norm == 0.0);

  const auto rows = parse_csv(slurp(result.csv_path));
  REQUIRE(rows.size() == 22);  // header + samples
  const auto& header = rows[0];
  CHECK(header[0] == "t");
  for (const std::string col : {"C_1_2", "D_1_2_measB", "D_1_2_measA", "I_1_2"}) {
    const int idx = column_of(header, col);
    REQUIRE(idx > 0);
    for (size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][idx] == "0");
  }
  const int xi = column_of(header, "xi2");
  for (size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][xi] == "1");

  // metadata sidecar echoes the resolved spec
  const auto meta = nlohmann::json::parse(slurp(result.meta_path));
  CHECK(meta["spec"]["n_sites"] == 2);
  CHECK(meta["spec"]["dt"] == 1e-3);
  CHECK(meta["version"] == kVersion);
  CHECK(meta["rows"] == 21);
}

TEST_CASE("thermal blockade shows up in the CSV") {
  const fs::path dir = fresh_dir("blockade");
  ScenarioSpec spec = parse_config(R"({"n_sites":3,"initial":"GGG","occupations":[0.2,0.0],
      "t_max":5.0,"output_path":")" + (dir / "fig2.csv").string() + R"("})");
  const RunResult result = run_scenario(spec);
  const auto rows = parse_csv(slurp(result.csv_path));
  const auto& header = rows[0];
  const int c12 = column_of(header, "C_1_2");
  const int c13 = column_of(header, "C_1_3");
  const int c23 = column_of(header, "C_2_3");
  double max_c23 = 0.0;
  for (size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r][c12] == "0");
    CHECK(rows[r][c13] == "0");
    max_c23 = std::max(max_c23, std::stod(rows[r][c23]));
  }
  CHECK(max_c23 > 1e-6);
}

TEST_CASE("identical specs give byte-identical CSVs") {
  const fs::path dir = fresh_dir("determinism");
  const std::string base = R"({"n_sites":3,"initial":"EEG","occupations":[0.3,0.1],"t_max":2.0,)";
  const ScenarioSpec a =
      parse_config(base + R"("output_path":")" + (dir / "a.csv").string() + R"("})");
  const ScenarioSpec b =
      parse_config(base + R"("output_path":")" + (dir / "b.csv").string() + R"("})");
  const RunResult ra = run_scenario(a);
  const RunResult rb = run_scenario(b);
  CHECK(slurp(ra.csv_path) == slurp(rb.csv_path));
}

TEST_CASE("undefined squeezing is emitted as a nan marker, not a value") {
  const fs::path dir = fresh_dir("nan_marker");
  // two-site GHZ (= Bell) has vanishing mean spin
  ScenarioSpec spec = parse_config(
      R"({"n_sites":2,"initial":[[0.70710678118654757,0],[0,0],[0,0],[0.70710678118654757,0]],
          "occupations":[0.0],"t_max":0.01,"record_stride":10,
          "output_path":")" +
      (dir / "ghz.csv").string() + R"("})");
  const RunResult result = run_scenario(spec);
  const auto rows = parse_csv(slurp(result.csv_path));
  const auto& header = rows[0];
  const int xi = column_of(header, "xi2");
  const int defined = column_of(header, "xi2_defined");
  REQUIRE(xi > 0);
  CHECK(rows[1][xi] == "nan");
  CHECK(rows[1][defined] == "0");
}

TEST_CASE("measure subsets shrink the column set in fixed order") {
  const fs::path dir = fresh_dir("subset");
  ScenarioSpec spec = parse_config(
      R"({"n_sites":2,"initial":"GG","occupations":[0.0],"t_max":1.0,
          "measures":["concurrence","moments"],
          "output_path":")" +
      (dir / "subset.csv").string() + R"("})");
  run_scenario(spec);
  const auto rows = parse_csv(slurp((dir / "subset.csv").string()));
  const std::vector<std::string> expect = {"t",  "C_1_2", "Jx",        "Jy",
                                           "Jz", "trace_dev", "min_eig"};
  CHECK(rows[0] == expect);
}

TEST_CASE("run_steady writes the reach-time row") {
  const fs::path dir = fresh_dir("steady");
  ScenarioSpec spec = parse_config(R"({"n_sites":2,"initial":"EE","occupations":[0.0],
      "output_path":")" + (dir / "steady.csv").string() + R"("})");
  const RunResult result = run_steady(spec, 100.0);
  CHECK(result.rows == 1);
  CHECK(result.final_l_norm < 1e-9);
  const auto rows = parse_csv(slurp(result.csv_path));
  const auto& header = rows[0];
  CHECK(std::stod(rows[1][0]) > 0.0);
  CHECK(rows[1][column_of(header, "C_1_2")] == "0");
  CHECK(std::stod(rows[1][column_of(header, "Jz")]) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("sweep with empty axes reproduces the plain scenario run") {
  const fs::path dir = fresh_dir("sweep_empty");
  nlohmann::json sweep_json = {
      {"base",
       {{"n_sites", 2}, {"initial", "EE"}, {"occupations", {0.1}}, {"t_max", 2.0}}},
      {"output_dir", (dir / "sweep").string()}};
  const SweepResult swept = run_sweep(parse_sweep(sweep_json.dump()));
  CHECK(swept.n_points == 1);
  CHECK(swept.n_failed == 0);

  ScenarioSpec spec = parse_config(R"({"n_sites":2,"initial":"EE","occupations":[0.1],
      "t_max":2.0,"output_path":")" + (dir / "plain.csv").string() + R"("})");
  const RunResult plain = run_scenario(spec);
  CHECK(slurp((dir / "sweep" / "base.csv").string()) == slurp(plain.csv_path));

  const auto index = nlohmann::json::parse(slurp(swept.index_path));
  CHECK(index["points"].size() == 1);
  CHECK(index["points"][0]["status"] == "ok");
}

TEST_CASE("sweep expands an occupation axis into per-point files") {
  const fs::path dir = fresh_dir("sweep_axis");
  nlohmann::json sweep_json = {
      {"base",
       {{"n_sites", 3}, {"initial", "GGG"}, {"occupations", {0.2, 0.0}}, {"t_max", 1.0}}},
      {"axes", {{{"path", "occupations[0]"}, {"values", {0.0, 0.2, 1.0}}}}},
      {"output_dir", (dir / "out").string()}};
  const SweepResult swept = run_sweep(parse_sweep(sweep_json.dump()));
  CHECK(swept.n_points == 3);
  CHECK(swept.n_failed == 0);
  for (const std::string name :
       {"occupations_0=0.0.csv", "occupations_0=0.2.csv", "occupations_0=1.0.csv"})
    CHECK(fs::exists(dir / "out" / name));

  // the n1=0 point is stationary from |GGG>: its concurrence columns stay 0
  const auto rows = parse_csv(slurp((dir / "out" / "occupations_0=0.0.csv").string()));
  const int c23 = column_of(rows[0], "C_2_3");
  for (size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][c23] == "0");
}

TEST_CASE("sweep guard rejects oversized grids before running") {
  nlohmann::json sweep_json = {
      {"base", {{"n_sites", 2}, {"initial", "GG"}, {"occupations", {0.0}}}},
      {"axes",
       {{{"path", "dt"}, {"values", nlohmann::json::array()}}}},
      {"output_dir", "unused"}};
  auto& values = sweep_json["axes"][0]["values"];
  for (int i = 0; i < 101; ++i) values.push_back(1e-3);
  nlohmann::json second_axis = {{"path", "t_max"}, {"values", nlohmann::json::array()}};
  for (int i = 0; i < 101; ++i) second_axis["values"].push_back(1.0);
  sweep_json["axes"].push_back(second_axis);
  CHECK_THROWS_WITH_AS(parse_sweep(sweep_json.dump()), doctest::Contains("guard"), ConfigError);
}

TEST_CASE("sweep records per-point failures in the index") {
  const fs::path dir = fresh_dir("sweep_fail");
  nlohmann::json sweep_json = {
      {"base",
       {{"n_sites", 2}, {"initial", "GG"}, {"occupations", {0.1}}, {"t_max", 1.0}}},
      {"axes", {{{"path", "dt"}, {"values", {1e-3, 0.7}}}}},  // 0.7 violates dt <= 0.1
      {"output_dir", (dir / "out").string()}};
  const SweepResult swept = run_sweep(parse_sweep(sweep_json.dump()));
  CHECK(swept.n_points == 2);
  CHECK(swept.n_failed == 1);
  const auto index = nlohmann::json::parse(slurp(swept.index_path));
  CHECK(index["points"][0]["status"] == "ok");
  CHECK(index["points"][1]["status"] == "error");
}

TEST_CASE("presets match the published parameter regimes") {
  for (const std::string& name : preset_names()) {
    const PresetConfig preset = preset_config(name);
    CHECK(preset.is_sweep);
    const SweepSpec sweep = parse_sweep(preset.config.dump());
    const ScenarioSpec base = parse_config(sweep.base.dump());
    if (name == "fig2") {
      CHECK(base.n_sites == 3);
      CHECK(base.initial_label == "GGG");
      CHECK(base.occupations[0] == 0.2);
      CHECK(base.occupations[1] == 0.0);
      CHECK(sweep.axes[0].path == "occupations[0]");
      CHECK(sweep.axes[0].values == std::vector<nlohmann::json>{0.2, 1.0});
    } else if (name == "fig3") {
      CHECK(base.initial_label == "EEE");
      CHECK(sweep.axes[0].values == std::vector<nlohmann::json>{0.0, 0.2});
    } else if (name == "fig4") {
      CHECK(base.n_sites == 3);
      CHECK(sweep.axes[0].path == "initial");
      CHECK(sweep.axes[0].values ==
            std::vector<nlohmann::json>{"GGG", "EEE", "EEG"});
      CHECK(base.occupations[0] == 0.0);
      CHECK(base.occupations[1] == 0.0);
    } else {
      CHECK(base.n_sites == 5);
      CHECK(base.initial_label == (name == "fig5" ? "GGGGG" : "EEEEE"));
      CHECK(base.occupations[1] == 0.2);
      CHECK(base.occupations[0] == 0.0);
      CHECK(sweep.axes[0].path == "occupations[1]");
      CHECK(sweep.axes[0].values == std::vector<nlohmann::json>{0.2, 1.0});
    }
  }
  const PresetConfig fig4_hot = preset_config("fig4", 0.5);
  CHECK(fig4_hot.config["base"]["occupations"] == nlohmann::json({0.5, 0.5}));
  CHECK_THROWS_AS(preset_config("fig7"), ConfigError);
}

TEST_CASE("validation suite passes on a fresh build") {
  const ValidationReport report = run_validation();
  for (const auto& check : report.checks) {
    INFO(check.name, " deviation ", check.deviation, " tolerance ", check.tolerance);
    CHECK(check.pass);
    CHECK(check.deviation >= 0.0);
    CHECK(check.tolerance > 0.0);
  }
  CHECK(report.all_pass());
  CHECK(report.checks.size() >= 5);
}

TEST_CASE("a corrupted rate sign is caught by the equivalence metric") {
  std::mt19937 rng(13);
  const BathSpec bath(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 0.3));
  const Eigen::MatrixXcd rho = oracle::random_density(4, rng);
  const auto dense = oracle::dense_liouvillian(bath, 2);
  const Eigen::MatrixXcd ref = oracle::unvectorize(dense.matrix * oracle::vectorize(rho));

  kernels::FiberTerm corrupted;
  corrupted.mask_a = 2;
  corrupted.mask_b = 1;
  corrupted.gn = bath.gammas[0] * bath.occupations[0];
  corrupted.gp = -bath.gammas[0] * (bath.occupations[0] + 1.0);  // sign flip
  Eigen::MatrixXcd out(4, 4);
  kernels::liouvillian_serial(rho.data(), out.data(), 4, &corrupted, 1);
  CHECK(helpers::max_abs_diff(out, ref) > 1e-12);  // the validate check would fail
}

TEST_CASE("CLI exit codes") {
  const char* cli = std::getenv("POLSIM_CLI");
  if (!cli) return;  // only run when ctest provides the binary path
  const std::string bin(cli);
  auto run = [](const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run(bin + " simulate /nonexistent_config.json") == 2);
  CHECK(run(bin + " preset fig7") == 2);
  CHECK(run(bin + " preset fig2 --emit-config") == 0);

  const fs::path dir = fresh_dir("cli");
  std::ofstream bad(dir / "bad.json");
  bad << R"({"n_sites":2,"initial":"GG","occupations":[0.0],"dt":0.5})";
  bad.close();
  CHECK(run(bin + " simulate " + (dir / "bad.json").string()) == 2);
}

}  // TEST_SUITE
