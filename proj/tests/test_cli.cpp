// Copyright 2026 The rydgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "rydgate/cli.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rydgate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      rydgate::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p =
      fs::temp_directory_path() / ("rydgate_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string cfg(const char* name) { return rydgate::testing::source_path(std::string("configs/") + name); }

}  // namespace

TEST_CASE("simulate writes a report and trajectories") {
  const fs::path out = scratch("sim");
  const Result r = run({"simulate", "--config", cfg("sinusoidal_cz.json"), "--out", out.string()});
  REQUIRE(r.code == 0);
  const json report = json::parse(slurp(out / "gate_report.json"));
  CHECK(report["gate"]["fidelity"].get<double>() >= 0.9999);
  CHECK(report["tool"] == "rydgate");
  CHECK(report["config"]["waveform"]["angular"] == true);
  for (const char* f : {"trajectory_00.csv", "trajectory_01.csv", "trajectory_10.csv"}) {
    const std::string csv = slurp(out / f);
    CHECK(csv.rfind("# rydgate", 0) == 0);
  }
  const std::string t00 = slurp(out / "trajectory_00.csv");
  CHECK(t00.find("t_us,pop_00,pop_R,pop_rr,pop_pp,phase_00,phase_R,phase_rr,phase_pp") !=
        std::string::npos);
}

TEST_CASE("bernstein config reaches the controlled-phase target") {
  const fs::path out = scratch("sim3");
  REQUIRE(run({"simulate", "--config", cfg("bernstein_phase.json"), "--out", out.string()}).code == 0);
  const json report = json::parse(slurp(out / "gate_report.json"));
  CHECK(report["target_gate_error"].get<double>() < 1e-5);
}

TEST_CASE("invalid configs exit 2 without output") {
  const fs::path bad = write_config("bad.json", "{\"physics\": {\"B_MHz\": 5");
  const fs::path out = scratch("bad_out");
  const Result r = run({"simulate", "--config", bad.string(), "--out", out.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("malformed JSON") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  const fs::path unknown = write_config(
      "unknown.json", R"({"physics": {"B_MHz": 5, "delta_p_MHz": 0, "colour": 1}})");
  const Result u = run({"simulate", "--config", unknown.string(), "--out", out.string()});
  CHECK(u.code == 2);
  CHECK(u.err.find("/physics/colour") != std::string::npos);

  const fs::path no_wave =
      write_config("nowave.json", R"({"physics": {"B_MHz": 5, "delta_p_MHz": 0}})");
  CHECK(run({"simulate", "--config", no_wave.string(), "--out", out.string()}).code == 2);
  CHECK(run({"mcwf", "--config", cfg("sinusoidal_cz.json"), "--out", out.string()}).code == 2);
  CHECK(run({"simulate", "--config", "/nonexistent.json"}).code == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("usage errors") {
  CHECK(run({"simulate"}).code == 1);
  CHECK(run({"--config", cfg("sinusoidal_cz.json")}).code == 1);
  CHECK(run({"teleport", "--config", cfg("sinusoidal_cz.json")}).code == 1);
}

TEST_CASE("calibration writes, reuses and flags the lock") {
  const fs::path out = scratch("cal");
  const Result first = run({"calibrate-convention", "--config", cfg("sinusoidal_cz.json"), "--out",
                            out.string()});
  REQUIRE(first.code == 0);
  json lock = json::parse(slurp(out / "convention.lock"));
  CHECK(lock["entries"]["sinusoidal"]["angular"] == true);
  CHECK(lock["entries"]["sinusoidal"]["best_fidelity"].get<double>() >= 0.9999);
  CHECK(lock["consistent"] == true);

  const Result again = run({"calibrate-convention", "--config", cfg("sinusoidal_cz.json"), "--out",
                            out.string()});
  CHECK(again.code == 0);
  CHECK(again.out.find("reusing") != std::string::npos);
  const Result forced = run({"calibrate-convention", "--config", cfg("sinusoidal_cz.json"), "--out",
                             out.string(), "--force"});
  CHECK(forced.out.find("reusing") == std::string::npos);

  REQUIRE(run({"calibrate-convention", "--config", cfg("bernstein_phase.json"), "--out", out.string()})
              .code == 0);
  lock = json::parse(slurp(out / "convention.lock"));
  CHECK(lock["entries"]["bernstein"]["angular"] == true);
  CHECK(lock["consistent"] == true);

  // A lock claiming the other convention for one family is reported.
  lock["entries"]["bernstein"]["angular"] = false;
  std::ofstream(out / "convention.lock") << lock.dump();
  const Result mismatch = run({"calibrate-convention", "--config", cfg("sinusoidal_cz.json"), "--out",
                               out.string(), "--force"});
  CHECK(mismatch.err.find("disagree") != std::string::npos);
  CHECK(json::parse(slurp(out / "convention.lock"))["consistent"] == false);

  // simulate without an explicit convention follows the lock.
  const Result sim = run({"simulate", "--config", cfg("bernstein_phase.json"), "--out", out.string()});
  REQUIRE(sim.code == 0);
  CHECK(json::parse(slurp(out / "gate_report.json"))["config"]["waveform"]["angular"] == false);
}

TEST_CASE("calibration fails when neither convention works") {
  const fs::path weak = write_config("weak.json", R"({
    "physics": {"B_MHz": 500, "delta_p_MHz": -3},
    "waveform": {"family": "bernstein", "params": {"beta": [0.01, 0, 0, 0], "delta0": 0},
                 "Tg_us": 1}})");
  const Result r = run({"calibrate-convention", "--config", weak.string(), "--out",
                        scratch("weak_out").string()});
  CHECK(r.code == 4);
}

TEST_CASE("sweep over blockade gives one row per value") {
  const fs::path out = scratch("sweep");
  REQUIRE(run({"sweep", "--config", cfg("sweep_blockade.json"), "--out", out.string()}).code ==
          0);
  std::istringstream csv(slurp(out / "sweep.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("axis_name", 0) == 0) continue;
    CHECK(line.rfind("B_MHz,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 3);
  const json manifest = json::parse(slurp(out / "sweep_manifest.json"));
  CHECK(manifest["rows"] == 3);
}

TEST_CASE("artifacts are identical across worker counts") {
  const fs::path mc = write_config("mc.json", R"({
    "physics": {"B_MHz": 500, "delta_p_MHz": -3},
    "waveform": {"family": "bernstein", "params": {"beta": [1.419, 0, 5.076, 13.425],
                 "delta0": -3.512}, "Tg_us": 1},
    "simulation": {"target": "controlled_PHASE"},
    "mcwf": {"n_trajectories": 3000, "gammas_per_us": [0.01, 0.02], "base_seed": 4},
    "sweep": {"axis": "epsilon", "perturbation": "power_imbalance", "values": [-0.01, 0, 0.01]},
    "optimize": {"budget": 200, "restarts": 4, "seed": 2}})");
  for (const char* cmd : {"mcwf", "sweep", "optimize"}) {
    CAPTURE(cmd);
    const fs::path a = scratch(std::string(cmd) + "_w1");
    const fs::path b = scratch(std::string(cmd) + "_w8");
    REQUIRE(run({cmd, "--config", mc.string(), "--out", a.string(), "--workers", "1"}).code == 0);
    REQUIRE(run({cmd, "--config", mc.string(), "--out", b.string(), "--workers", "8"}).code == 0);
    int files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files >= 2);
  }
}

TEST_CASE("seed flag overrides the configured seed") {
  const fs::path a = scratch("seed_a");
  const fs::path b = scratch("seed_b");
  const fs::path mc = write_config("mc_seed.json", R"({
    "physics": {"B_MHz": 500, "delta_p_MHz": -3},
    "waveform": {"family": "bernstein", "params": {"beta": [1.419, 0, 5.076, 13.425],
                 "delta0": -3.512}, "Tg_us": 1},
    "mcwf": {"n_trajectories": 2000, "gammas_per_us": [0.05], "base_seed": 4}})");
  REQUIRE(run({"mcwf", "--config", mc.string(), "--out", a.string(), "--seed", "99"}).code == 0);
  REQUIRE(run({"mcwf", "--config", mc.string(), "--out", b.string()}).code == 0);
  const json fa = json::parse(slurp(a / "mcwf_fit.json"));
  CHECK(fa["config"]["mcwf"]["base_seed"] == 99);
  CHECK(slurp(a / "mcwf_stats_B500.csv") != slurp(b / "mcwf_stats_B500.csv"));
}

TEST_CASE("worker count falls back to the environment") {
  const fs::path out = scratch("env");
  ::setenv("RPL_WORKERS", "zero", 1);
  const Result bad = run({"simulate", "--config", cfg("sinusoidal_cz.json"), "--out", out.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("RPL_WORKERS") != std::string::npos);
  ::setenv("RPL_WORKERS", "3", 1);
  CHECK(run({"simulate", "--config", cfg("sinusoidal_cz.json"), "--out", out.string()}).code == 0);
  // The flag wins over the environment.
  ::setenv("RPL_WORKERS", "zero", 1);
  CHECK(run({"simulate", "--config", cfg("sinusoidal_cz.json"), "--out", out.string(), "--workers", "2"})
            .code == 0);
  ::unsetenv("RPL_WORKERS");
}
