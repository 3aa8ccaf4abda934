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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydgate/mcwf.hpp"
#include "rydgate/metrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"
#include "rydgate/sweep.hpp"
#include "rydgate/waveform.hpp"

namespace rydgate {

inline constexpr const char* kToolName = "rydgate";
inline constexpr const char* kToolVersion = "0.1.0";

/// Round-trip decimal form (%.17g); "nan"/"inf" for non-finite values.
std::string format_double(double v);

/// Leading '#' lines naming the tool version and the resolved config.
void write_csv_provenance(std::ostream& os, const nlohmann::json& config);

/// {"tool", "version", "config"} header shared by JSON artifacts.
nlohmann::json provenance(const nlohmann::json& config);

/// Grid samples of (t, Omega, Delta) in rad/us.
void write_waveform_csv(std::ostream& os, const Waveform& w, int points);

/// Basis labels, excitation counts and each term as a dense row-major
/// matrix of [re, im] pairs.
nlohmann::json model_to_json(const TimeDependentModel& m);

void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels,
                          const std::vector<StateSample>& samples);

nlohmann::json gate_report_json(const GateOutcome& g, const PhaseCorrection& correction);

void write_stats_csv(std::ostream& os, const std::vector<TrajectoryStats>& rows);
void write_trace_csv(std::ostream& os, const std::vector<double>& trace);
void write_sweep_csv(std::ostream& os, std::string_view axis_name,
                     const std::vector<SweepRow>& rows);

}  // namespace rydgate
