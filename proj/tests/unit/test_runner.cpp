#include <filesystem>
#include <string>

#include "core/errors.hpp"
#include "core/report.hpp"
#include "core/runner.hpp"
#include "doctest.h"

using namespace nsprofile;
using nlohmann::json;

namespace {

std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("nsprofile_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

RunConfig quick(const std::string& dir) {
  RunConfig c = RunConfig::from_json({{"t_min", 16.0}, {"t_max", 512.0}, {"points", 8}, {"svg", true}});
  c.output_dir = dir;
  return c;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = RunConfig::from_json(json::object());
  CHECK(c.params.n == 2);
  CHECK(c.params.alpha == 1.0);
  CHECK(c.data.amplitude_v == RealVec{0.1, 0.0});
  CHECK(c.data.amplitude_rho == 1.0);
  CHECK(c.grid.t_min == 16.0);
  CHECK(c.grid.t_max == 16384.0);
  CHECK(c.grid.points == 11);
  CHECK(c.oracle.step == 1e-4);
  const RunConfig c3 = RunConfig::from_json({{"n", 3}});
  CHECK(c3.data.amplitude_v == RealVec{0.1, 0.0, 0.0});
}

TEST_CASE("config validation") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json({{"alpah", 1.0}}), doctest::Contains("unknown config key"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"alpha", "one"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"points", 2.5}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"points", 4}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"P0", {0.1, 0.0, 0.0}}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"alpha", 0.0}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"spacing", "log"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json({{"svg", 1}}), ConfigError);
}

TEST_CASE("config hash") {
  const RunConfig a = RunConfig::from_json(json::object());
  RunConfig b = a;
  b.quadrature.threads = 8;
  b.output_dir = "elsewhere";
  CHECK(a.hash() == b.hash());
  const RunConfig c = RunConfig::from_json({{"alpha", 1.5}});
  CHECK(a.hash() != c.hash());
  CHECK(RunConfig::from_json(a.to_json()).hash() == a.hash());
}

TEST_CASE("unknown subcommand") {
  CHECK_THROWS_AS(run("fly", quick(scratch_dir("unknown"))), UsageError);
}

TEST_CASE("asymptotic runs need t_min >= 1") {
  RunConfig c = quick(scratch_dir("tmin"));
  c.grid.t_min = 0.5;
  CHECK_THROWS_AS(run("rate", c), ConfigError);
}

TEST_CASE("plot on an empty CSV") {
  const std::string dir = scratch_dir("plot_empty");
  std::filesystem::create_directories(dir);
  const std::string csv = dir + "/empty.csv";
  write_text_file(csv, "");
  CHECK_THROWS_WITH(run("plot", quick(dir), csv), doctest::Contains("no data rows"));
}

TEST_CASE("plot renders a CSV") {
  const std::string dir = scratch_dir("plot");
  std::filesystem::create_directories(dir);
  const std::string csv = dir + "/in.csv";
  write_text_file(csv, "t,a\n1,1\n10,0.1\n");
  const RunResult r = run("plot", quick(dir), csv);
  CHECK(r.pass);
  CHECK(std::filesystem::exists(dir + "/plot.svg"));
}

TEST_CASE("oracle-check writes a passing verdict") {
  const std::string dir = scratch_dir("oracle");
  RunConfig c = quick(dir);
  c.oracle.radii = 4;
  c.oracle.times = 3;
  c.oracle.t_max = 2.0;
  const RunResult r = run("oracle-check", c);
  CHECK(r.pass);
  const json v = json::parse(read_text_file(dir + "/oracle-check.json"));
  CHECK(v["pass"] == true);
  CHECK(v["config_hash"] == c.hash());
  CHECK(v["thresholds"]["max_rel_err"] == 1e-8);
  CHECK(v["results"]["max_rel_err"].get<double>() <= 1e-8);
  const Table t = read_csv(dir + "/oracle-check.csv");
  CHECK(t.columns == std::vector<std::string>{"r", "t", "rel_err"});
  CHECK(t.rows.size() == 12);
}

TEST_CASE("outputs are identical across thread counts") {
  std::string csv[2], verdict[2];
  const int threads[2] = {1, 4};
  for (int i = 0; i < 2; ++i) {
    const std::string dir = scratch_dir("det" + std::to_string(i));
    RunConfig c = quick(dir);
    c.quadrature.threads = threads[i];
    run("profile-error", c);
    csv[i] = read_text_file(dir + "/profile-error.csv");
    verdict[i] = read_text_file(dir + "/profile-error.json");
  }
  CHECK(csv[0] == csv[1]);
  CHECK(verdict[0] == verdict[1]);
}

TEST_CASE("numerical failure leaves a diagnostic verdict") {
  const std::string dir = scratch_dir("numfail");
  RunConfig c = quick(dir);
  c.quadrature.rel_tol = 1e-18;
  c.quadrature.max_refinements = 0;
  CHECK_THROWS_AS(run("rate", c), NumericalError);
  const json v = json::parse(read_text_file(dir + "/rate.json"));
  CHECK(v["pass"] == false);
  CHECK(v["error"]["kind"] == "numerical");
}
