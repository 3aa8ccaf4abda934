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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydgate/metrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/optimizer.hpp"
#include "rydgate/sweep.hpp"
#include "rydgate/waveform.hpp"

namespace rydgate {

/// Invalid configuration. The message carries a line:column or a JSON
/// pointer to the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Waveform block as written in a config; `angular` may be left open for the
/// convention lock to decide.
struct WaveformSpec {
  Waveform::Shape shape;
  double gate_time_us = 1.0;
  std::optional<bool> angular;

  WaveformFamily family() const;
  Waveform build(bool angular_default) const;
};

struct SimulationBlock {
  double tol = 1e-9;
  int record_points = 201;
  ModelKind model = ModelKind::symmetric;
  GateTarget target = GateTarget::strict_cz;
};

struct McwfBlock {
  long n_trajectories = 20000;
  std::vector<double> gammas_per_us;
  std::vector<double> blockade_values_mhz;  // empty: physics B only
  std::uint64_t base_seed = 0;
};

struct SweepBlock {
  SweepAxis axis = SweepAxis::blockade_mhz;
  std::vector<double> values;
  Perturbation perturbation = Perturbation::none;
  double epsilon = 0.0;
  double doppler_ratio = -1.0;
  std::optional<McwfSettings> mcwf;
};

struct OptimizeBlock {
  WaveformFamily family = WaveformFamily::bernstein;
  std::vector<ParameterBound> bounds;  // empty: family defaults
  long budget = 50000;
  std::uint64_t seed = 0;
  std::optional<double> stop_at_error;
  int restarts = 0;
  int bernstein_degree = 8;
  double gate_time_us = 1.0;
  bool angular = true;
  // Optional second stage started from the best point.
  long polish_budget = 0;
  std::optional<double> polish_stop_at_error;
  double polish_tol = 1e-10;
};

struct RunConfig {
  double blockade_mhz = 500.0;
  double forster_defect_mhz = -3.0;
  double gamma_per_us = 0.0;
  PpDiagonal pp_diagonal = PpDiagonal::literal;
  std::optional<WaveformSpec> waveform;
  SimulationBlock simulation;
  std::optional<McwfBlock> mcwf;
  std::optional<SweepBlock> sweep;
  std::optional<OptimizeBlock> optimize;

  GateSetup setup(const Waveform& w) const;
};

/// Strict parse: unknown fields, wrong types and out-of-range values throw
/// ConfigError. `source` names the input in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
WaveformSpec parse_waveform(const nlohmann::json& j, const std::string& path = "/waveform");

/// Canonical form of a parsed config with every default filled in. Parsing
/// the result again gives an identical config.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const WaveformSpec& spec);

}  // namespace rydgate
