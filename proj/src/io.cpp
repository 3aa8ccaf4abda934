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

#include "rydgate/io.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace rydgate {

using nlohmann::json;

namespace {

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json provenance(const json& config) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config", config}};
}

void write_csv_provenance(std::ostream& os, const json& config) {
  os << "# " << kToolName << ' ' << kToolVersion << '\n';
  os << "# config: " << config.dump() << '\n';
}

void write_waveform_csv(std::ostream& os, const Waveform& w, int points) {
  if (points < 2) throw std::invalid_argument("waveform export needs at least 2 points");
  os << "t_us,omega_rad_per_us,delta_rad_per_us\n";
  for (int i = 0; i < points; ++i) {
    const double t = w.gate_time() * i / (points - 1);
    const PulseSample s = w(t);
    os << format_double(t) << ',' << format_double(s.omega) << ',' << format_double(s.delta)
       << '\n';
  }
}

json model_to_json(const TimeDependentModel& m) {
  json terms = json::array();
  for (const Term& term : m.terms()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < term.matrix.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < term.matrix.cols(); ++c) {
        row.push_back(complex_pair(term.matrix(r, c)));
      }
      rows.push_back(row);
    }
    const char* channel = term.channel == Channel::unit    ? "unit"
                          : term.channel == Channel::omega ? "omega"
                                                           : "delta";
    terms.push_back({{"channel", channel}, {"drive", term.drive}, {"matrix", rows}});
  }
  return {{"basis_labels", m.basis_labels()},
          {"excitation_counts", m.excitation_counts()},
          {"duration_us", m.duration()},
          {"hermitian", m.hermitian()},
          {"terms", terms}};
}

void write_trajectory_csv(std::ostream& os, const std::vector<std::string>& labels,
                          const std::vector<StateSample>& samples) {
  os << "t_us";
  for (const auto& l : labels) os << ",pop_" << l;
  for (const auto& l : labels) os << ",phase_" << l;
  os << '\n';
  const PhaseTrace trace = phase_trace(samples);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    os << format_double(samples[k].t);
    for (double p : samples[k].populations) os << ',' << format_double(p);
    for (std::size_t i = 0; i < labels.size(); ++i) os << ',' << format_double(trace.phase[i][k]);
    os << '\n';
  }
}

json gate_report_json(const GateOutcome& g, const PhaseCorrection& correction) {
  auto block = [](const GateOutcome& o) {
    json amps = json::array();
    for (const auto& a : o.amplitudes) amps.push_back(complex_pair(a));
    return json{{"amps", amps},
                {"phases_rad", o.phases},
                {"return_probabilities", o.return_probabilities},
                {"fidelity", o.fidelity},
                {"gate_error", o.gate_error}};
  };
  json j = block(g);
  json c = block(correction.corrected);
  c["theta1_rad"] = correction.theta1;
  c["theta2_rad"] = correction.theta2;
  c["global_phase_rad"] = correction.global_phase;
  j["corrected"] = c;
  j["constraint_residual_rad"] =
      phase_constraint_residual(g.phases[0], g.phases[1], g.phases[2], g.phases[3]);
  return j;
}

void write_stats_csv(std::ostream& os, const std::vector<TrajectoryStats>& rows) {
  os << "gamma_per_us,mean_error,stderr,n_traj,base_seed\n";
  for (const auto& r : rows) {
    os << format_double(r.gamma) << ',' << format_double(r.mean_gate_error) << ','
       << format_double(r.standard_error) << ',' << r.n_trajectories << ',' << r.base_seed
       << '\n';
  }
}

void write_trace_csv(std::ostream& os, const std::vector<double>& trace) {
  os << "eval,best_error\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i + 1 << ',' << format_double(trace[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, std::string_view axis_name,
                     const std::vector<SweepRow>& rows) {
  const bool with_stderr =
      std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.standard_error; });
  os << "axis_name,axis_value,gate_error" << (with_stderr ? ",stderr" : "") << '\n';
  for (const auto& r : rows) {
    os << axis_name << ',' << format_double(r.value) << ',' << format_double(r.gate_error);
    if (with_stderr) os << ',' << format_double(r.standard_error.value_or(0.0));
    os << '\n';
  }
}

}  // namespace rydgate
