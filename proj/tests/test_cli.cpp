#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sfnls/experiment.hpp"

using namespace sfnls;
namespace fs = std::filesystem;

namespace {

std::string write_tmp(const std::string& name, const std::string& text) {
  std::ofstream out(name);
  out << text;
  return name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBasicConfig = R"(# smoke configuration
[experiment]
name = simulate

[grid]
dim = 1
extent = 40
points = 128
alpha = 0.5

[model]
sigma = 1
gamma = 0.5

[time]
dt = 0.01
t_end = 0.5
stride = 10

[noise]
seed = 7

[output]
directory = test_cli_out
)";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("full round trip through the renderer") {
    auto path = write_tmp("test_cfg_a.ini", kBasicConfig);
    ExperimentConfig c = parse_config(path);
    CHECK(c.experiment == "simulate");
    CHECK(c.points == 128);
    CHECK(c.gamma == 0.5);
    CHECK(c.dt == 0.01);
    CHECK(c.seed == 7);
    CHECK(c.directory == "test_cli_out");

    auto path2 = write_tmp("test_cfg_b.ini", render_config(c));
    ExperimentConfig c2 = parse_config(path2);
    CHECK(render_config(c2) == render_config(c));
    std::remove(path.c_str());
    std::remove(path2.c_str());
  }

  SUBCASE("unknown key is rejected with a line number") {
    auto path = write_tmp("test_cfg_c.ini",
                          "[experiment]\nname = simulate\n[grid]\npionts = 128\n");
    try {
      parse_config(path);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      CHECK(msg.find("line 4") != std::string::npos);
      CHECK(msg.find("pionts") != std::string::npos);
    }
    std::remove(path.c_str());
  }

  SUBCASE("unknown section is rejected") {
    auto path = write_tmp("test_cfg_d.ini", "[experiment]\nname = simulate\n[grd]\ndim = 1\n");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
    std::remove(path.c_str());
  }

  SUBCASE("missing experiment name is rejected") {
    auto path = write_tmp("test_cfg_e.ini", "[grid]\ndim = 1\n");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
    std::remove(path.c_str());
  }

  SUBCASE("unknown experiment name is rejected") {
    auto path = write_tmp("test_cfg_f.ini", "[experiment]\nname = frobnicate\n");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
    std::remove(path.c_str());
  }

  SUBCASE("malformed number is rejected") {
    auto path = write_tmp("test_cfg_g.ini",
                          "[experiment]\nname = simulate\n[grid]\nalpha = half\n");
    CHECK_THROWS_AS(parse_config(path), ConfigError);
    std::remove(path.c_str());
  }

  SUBCASE("missing file") { CHECK_THROWS_AS(parse_config("no_such.ini"), ConfigError); }

  SUBCASE("schedule lists parse") {
    auto path = write_tmp("test_cfg_h.ini",
                          "[experiment]\nname = pullback\n[attractor]\nt_schedule = 1, 2, "
                          "4\nk_schedule = 8,16\n");
    ExperimentConfig c = parse_config(path);
    CHECK(c.t_schedule == std::vector<double>{1.0, 2.0, 4.0});
    CHECK(c.k_schedule == std::vector<double>{8.0, 16.0});
    std::remove(path.c_str());
  }
}

TEST_CASE("experiment catalog") {
  std::string cat = list_experiments();
  for (const char* name : {"simulate", "mass_check", "energy_check", "gn_audit",
                           "ground_state", "pullback", "absorbing", "tails",
                           "strichartz_probe", "convergence"})
    CHECK(cat.find(name) != std::string::npos);
  CHECK(cat == list_experiments());  // stable
}

TEST_CASE("regime gate returns the dedicated exit code") {
  ExperimentConfig c;
  c.experiment = "simulate";
  c.dim = 2;
  c.alpha = 0.5;  // below the sharp interval in two dimensions
  c.directory = "test_cli_gate";
  CHECK(run_experiment(c) == 2);
  fs::remove_all("test_cli_gate");
}

TEST_CASE("simulate run writes artifacts and reruns byte-identically") {
  auto path = write_tmp("test_cfg_run.ini", kBasicConfig);
  ExperimentConfig c = parse_config(path);
  REQUIRE(run_experiment(c) == 0);
  fs::path dir("test_cli_out");
  REQUIRE(fs::exists(dir / "diagnostics.csv"));
  REQUIRE(fs::exists(dir / "manifest.ini"));
  REQUIRE(fs::exists(dir / "summary.json"));
  std::string diag1 = slurp(dir / "diagnostics.csv");
  std::string sum1 = slurp(dir / "summary.json");

  // rerunning from the manifest reproduces every byte
  ExperimentConfig c2 = parse_config((dir / "manifest.ini").string());
  REQUIRE(run_experiment(c2) == 0);
  CHECK(slurp(dir / "diagnostics.csv") == diag1);
  CHECK(slurp(dir / "summary.json") == sum1);

  std::remove(path.c_str());
  fs::remove_all(dir);
}
