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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rydgate/config.hpp"
#include "rydgate/io.hpp"
#include "test_support.hpp"

using namespace rydgate;
using nlohmann::json;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({"physics": {"B_MHz": 500, "delta_p_MHz": -3}})";

}  // namespace

TEST_CASE("bundled configs parse") {
  for (const char* name : {"sinusoidal_cz.json", "bernstein_phase.json", "mcwf_decay.json", "sweep_blockade.json",
                           "sweep_amplitude.json", "optimize_bernstein.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_config(read(testing::source_path(std::string("configs/") + name))));
  }
  const RunConfig c = parse_config(read(testing::source_path("configs/bernstein_phase.json")));
  REQUIRE(c.waveform.has_value());
  CHECK(c.waveform->family() == WaveformFamily::bernstein);
  CHECK_FALSE(c.waveform->angular.has_value());
  CHECK(c.simulation.target == GateTarget::controlled_phase);
  CHECK(c.blockade_mhz == 500.0);
  const Waveform w = c.waveform->build(true);
  CHECK(w(0.4).omega == testing::bernstein_reference()(0.4).omega);
}

TEST_CASE("defaults fill optional fields") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.gamma_per_us == 0.0);
  CHECK(c.pp_diagonal == PpDiagonal::literal);
  CHECK(c.simulation.tol == 1e-9);
  CHECK_FALSE(c.waveform.has_value());
  CHECK_FALSE(c.mcwf.has_value());
}

TEST_CASE("diagnostics name the offending field") {
  CHECK(config_error(R"({"physics": {"B_MHz": 500}})").find("/physics/delta_p_MHz") !=
        std::string::npos);
  CHECK(config_error(R"({"physics": {"B_MHz": 500, "delta_p_MHz": 1, "extra": 0}})")
            .find("/physics/extra: unknown field") != std::string::npos);
  CHECK(config_error(R"({"physics": {"B_MHz": "x", "delta_p_MHz": 1}})").find("expected a number") !=
        std::string::npos);
  CHECK(config_error(R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1}, "simulation": {"tol": 1}})")
            .find("/simulation/tol") != std::string::npos);
  CHECK(config_error(R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1}, "bogus": {}})")
            .find("/bogus") != std::string::npos);
  CHECK(config_error(R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1, "gamma_per_us": -1}})")
            .find("/physics/gamma_per_us") != std::string::npos);
  const std::string wf = R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1},
    "waveform": {"family": "bernstein", "params": {"beta": [1, 2], "delta0": 0}, "Tg_us": 1}})";
  CHECK(config_error(wf).find("/waveform/params/beta") != std::string::npos);
  const std::string neg = R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1},
    "waveform": {"family": "sinusoidal", "params": {"omega0": 0, "omega1": 1, "omega2": 0,
    "delta0": 0, "delta1": 0, "delta2": 0}, "Tg_us": 1}})";
  CHECK(config_error(neg).find("/waveform/params") != std::string::npos);
}

TEST_CASE("malformed JSON reports line and column") {
  const std::string e = config_error("{\n  \"physics\": {\n    \"B_MHz\": ,\n");
  CHECK(e.find("cfg:3:") == 0);
  CHECK(e.find("malformed JSON") != std::string::npos);
}

TEST_CASE("canonical form round trips") {
  for (const char* name : {"sinusoidal_cz.json", "mcwf_decay.json", "sweep_amplitude.json",
                           "optimize_bernstein.json"}) {
    const RunConfig c = parse_config(read(testing::source_path(std::string("configs/") + name)));
    const json j = to_json(c);
    CHECK(to_json(parse_config(j.dump())) == j);
  }
}

TEST_CASE("optimize bounds override defaults") {
  const RunConfig c = parse_config(R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1},
    "optimize": {"family": "bernstein", "bounds": {"delta0": [-5, 0]}}})");
  REQUIRE(c.optimize.has_value());
  CHECK(c.optimize->bounds[4].lo == -5.0);
  CHECK(c.optimize->bounds[4].hi == 0.0);
  CHECK(c.optimize->bounds[0].hi == 20.0);
  CHECK(config_error(R"({"physics": {"B_MHz": 1, "delta_p_MHz": 1},
    "optimize": {"bounds": {"gamma": [0, 1]}}})")
            .find("/optimize/bounds/gamma") != std::string::npos);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("waveform csv export") {
  std::ostringstream os;
  write_waveform_csv(os, testing::bernstein_reference(), 11);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_us,omega_rad_per_us,delta_rad_per_us");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("model dump") {
  const auto m = build_symmetric_blockade(testing::bernstein_reference(),
                                          testing::reference_physics());
  const json j = model_to_json(m);
  CHECK(j["basis_labels"] == json({"00", "R", "rr", "pp"}));
  CHECK(j["excitation_counts"] == json({0, 1, 2, 2}));
  const json& forster = j["terms"].back();
  CHECK(forster["channel"] == "unit");
  CHECK(forster["matrix"][2][3][0].get<double>() == doctest::Approx(kTwoPi * 500));
  CHECK(forster["matrix"][2][3][1].get<double>() == 0.0);
}

TEST_CASE("tabular writers") {
  std::vector<StateSample> samples(2);
  for (int k = 0; k < 2; ++k) {
    samples[k].t = k;
    samples[k].amplitudes = ComplexVector::Zero(2);
    samples[k].amplitudes(0) = 1.0;
    samples[k].populations = {1.0, 0.0};
  }
  std::ostringstream t;
  write_trajectory_csv(t, {"g", "r"}, samples);
  CHECK(t.str().rfind("t_us,pop_g,pop_r,phase_g,phase_r\n0,1,0,0,nan\n", 0) == 0);

  TrajectoryStats st;
  st.gamma = 0.001;
  st.mean_gate_error = 0.5;
  st.n_trajectories = 10;
  st.base_seed = 7;
  std::ostringstream s;
  write_stats_csv(s, {st});
  CHECK(s.str() == "gamma_per_us,mean_error,stderr,n_traj,base_seed\n0.001,0.5,0,10,7\n");

  std::ostringstream tr;
  write_trace_csv(tr, {0.5, 0.25});
  CHECK(tr.str() == "eval,best_error\n1,0.5\n2,0.25\n");

  std::ostringstream sw;
  write_sweep_csv(sw, "B_MHz", {{250, 0.1, std::nullopt}, {500, 0.2, std::nullopt}});
  CHECK(sw.str() == "axis_name,axis_value,gate_error\nB_MHz,250,0.10000000000000001\n"
                    "B_MHz,500,0.20000000000000001\n");
  std::ostringstream sw2;
  write_sweep_csv(sw2, "gamma_per_us", {{0.1, 0.1, 0.01}});
  CHECK(sw2.str().rfind("axis_name,axis_value,gate_error,stderr\n", 0) == 0);

  std::ostringstream prov;
  write_csv_provenance(prov, json{{"a", 1}});
  CHECK(prov.str() == std::string("# rydgate ") + kToolVersion + "\n# config: {\"a\":1}\n");
}

TEST_CASE("gate report layout") {
  const GateOutcome g = assemble_gate(-1.0, 1.0, 1.0);
  const json j = gate_report_json(g, local_phase_correction(g));
  for (const char* key :
       {"amps", "phases_rad", "fidelity", "gate_error", "corrected", "constraint_residual_rad"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["amps"].size() == 4);
  CHECK(j["constraint_residual_rad"].get<double>() < 1e-15);
}
