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

#include "rydgate/config.hpp"

#include <algorithm>
#include <string>

#include "strict_json.hpp"

namespace rydgate {

using nlohmann::json;
using detail::ObjectReader;

namespace {

// Line and column (1-based) of a byte offset.
std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

void require_positive_values(ObjectReader& r, const std::string& key,
                             const std::vector<double>& v, bool allow_zero) {
  if (v.empty()) ObjectReader::fail(r.field(key), "must not be empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (allow_zero ? v[i] < 0.0 : v[i] <= 0.0) {
      ObjectReader::fail(r.field(key) + "/" + std::to_string(i),
                         allow_zero ? "must be >= 0" : "must be > 0");
    }
  }
}

SimulationBlock parse_simulation(ObjectReader r) {
  SimulationBlock s;
  s.tol = r.number("tol", s.tol);
  if (s.tol < 1e-13 || s.tol > 1e-6) ObjectReader::fail(r.field("tol"), "must be in [1e-13, 1e-6]");
  s.record_points = static_cast<int>(r.integer("record_points", s.record_points, 0, 1000000));
  if (s.record_points == 1) ObjectReader::fail(r.field("record_points"), "must be 0 or >= 2");
  s.model = r.choice("model", model_kind_from_string, s.model);
  s.target = r.choice("target", gate_target_from_string, s.target);
  r.finish();
  return s;
}

McwfBlock parse_mcwf(ObjectReader r) {
  McwfBlock m;
  m.n_trajectories = r.integer("n_trajectories", m.n_trajectories, 1, 100000000);
  m.gammas_per_us = r.numbers("gammas_per_us");
  require_positive_values(r, "gammas_per_us", m.gammas_per_us, true);
  if (r.has("B_MHz_values")) {
    m.blockade_values_mhz = r.numbers("B_MHz_values");
    if (m.blockade_values_mhz.empty()) {
      ObjectReader::fail(r.field("B_MHz_values"), "must not be empty");
    }
  }
  m.base_seed = r.seed("base_seed", m.base_seed);
  r.finish();
  return m;
}

SweepBlock parse_sweep(ObjectReader r) {
  SweepBlock s;
  s.axis = r.choice("axis", sweep_axis_from_string);
  s.values = r.numbers("values");
  if (s.values.empty()) ObjectReader::fail(r.field("values"), "must not be empty");
  if (s.axis == SweepAxis::gamma_per_us) require_positive_values(r, "values", s.values, true);
  s.perturbation = r.choice("perturbation", perturbation_from_string, s.perturbation);
  s.epsilon = r.number("epsilon", s.epsilon);
  s.doppler_ratio = r.number("doppler_ratio", s.doppler_ratio);
  if (r.has("mcwf")) {
    ObjectReader m = r.object("mcwf");
    McwfSettings settings;
    settings.n_trajectories = m.integer("n_trajectories", 1, 100000000);
    settings.base_seed = m.seed("base_seed", 0);
    m.finish();
    s.mcwf = settings;
  }
  r.finish();
  return s;
}

OptimizeBlock parse_optimize(ObjectReader r) {
  OptimizeBlock o;
  o.family = r.choice("family", waveform_family_from_string, o.family);
  if (o.family == WaveformFamily::sampled) {
    ObjectReader::fail(r.field("family"), "sampled waveforms cannot be optimized");
  }
  o.budget = r.integer("budget", o.budget, 1, 1000000000);
  o.seed = r.seed("seed", o.seed);
  o.stop_at_error = r.optional_number("stop_at_error");
  o.restarts = static_cast<int>(r.integer("restarts", o.restarts, 0, 1000000));
  o.bernstein_degree = static_cast<int>(r.integer("bernstein_degree", o.bernstein_degree, 8, 64));
  if (o.bernstein_degree % 2 != 0) {
    ObjectReader::fail(r.field("bernstein_degree"), "must be even");
  }
  o.gate_time_us = r.number("Tg_us", o.gate_time_us);
  if (o.gate_time_us <= 0.0) ObjectReader::fail(r.field("Tg_us"), "must be > 0");
  o.angular = r.boolean("angular", o.angular);
  o.polish_budget = r.integer("polish_budget", o.polish_budget, 0, 1000000000);
  o.polish_stop_at_error = r.optional_number("polish_stop_at_error");
  o.polish_tol = r.number("polish_tol", o.polish_tol);
  if (o.polish_tol < 1e-13 || o.polish_tol > 1e-6) {
    ObjectReader::fail(r.field("polish_tol"), "must be in [1e-13, 1e-6]");
  }

  o.bounds = default_bounds(o.family);
  if (r.has("bounds")) {
    const json& b = r.raw("bounds");
    const std::string path = r.field("bounds");
    if (!b.is_object()) ObjectReader::fail(path, "expected an object of [lo, hi] pairs");
    for (auto it = b.begin(); it != b.end(); ++it) {
      auto match = std::find_if(o.bounds.begin(), o.bounds.end(),
                                [&](const ParameterBound& pb) { return pb.name == it.key(); });
      const std::string field = path + "/" + it.key();
      if (match == o.bounds.end()) ObjectReader::fail(field, "unknown parameter");
      const json& pair = it.value();
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        ObjectReader::fail(field, "expected [lo, hi]");
      }
      match->lo = pair[0].get<double>();
      match->hi = pair[1].get<double>();
      if (!std::isfinite(match->lo) || !std::isfinite(match->hi) || !(match->lo < match->hi)) {
        ObjectReader::fail(field, "needs finite lo < hi");
      }
    }
  }
  r.finish();
  return o;
}

Waveform::Shape parse_shape(WaveformFamily family, ObjectReader p) {
  Waveform::Shape shape;
  switch (family) {
    case WaveformFamily::sinusoidal: {
      SinusoidalParams s;
      s.omega0 = p.number("omega0");
      s.omega1 = p.number("omega1");
      s.omega2 = p.number("omega2");
      s.delta0 = p.number("delta0");
      s.delta1 = p.number("delta1");
      s.delta2 = p.number("delta2");
      shape = s;
      break;
    }
    case WaveformFamily::bernstein: {
      BernsteinParams b;
      const auto beta = p.numbers("beta");
      if (beta.size() != 4) ObjectReader::fail(p.field("beta"), "expected 4 coefficients");
      std::copy(beta.begin(), beta.end(), b.beta.begin());
      b.degree = static_cast<int>(p.integer("n", 8, 8, 64));
      if (b.degree % 2 != 0) ObjectReader::fail(p.field("n"), "must be even");
      b.delta0 = p.number("delta0");
      shape = b;
      break;
    }
    case WaveformFamily::sampled: {
      SampledParams s;
      s.omega = p.numbers("omega");
      s.delta = p.numbers("delta");
      shape = s;
      break;
    }
  }
  p.finish();
  return shape;
}

}  // namespace

WaveformFamily WaveformSpec::family() const {
  if (std::holds_alternative<SinusoidalParams>(shape)) return WaveformFamily::sinusoidal;
  if (std::holds_alternative<BernsteinParams>(shape)) return WaveformFamily::bernstein;
  return WaveformFamily::sampled;
}

Waveform WaveformSpec::build(bool angular_default) const {
  return Waveform(shape, gate_time_us, angular.value_or(angular_default));
}

GateSetup RunConfig::setup(const Waveform& w) const {
  GateSetup s{w};
  s.blockade_mhz = blockade_mhz;
  s.forster_defect_mhz = forster_defect_mhz;
  s.gamma_per_us = gamma_per_us;
  s.pp_diagonal = pp_diagonal;
  s.model = simulation.model;
  s.target = simulation.target;
  s.tol = simulation.tol;
  return s;
}

WaveformSpec parse_waveform(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  WaveformSpec spec;
  const WaveformFamily family = r.choice("family", waveform_family_from_string);
  spec.shape = parse_shape(family, r.object("params"));
  spec.gate_time_us = r.number("Tg_us");
  if (spec.gate_time_us <= 0.0) ObjectReader::fail(r.field("Tg_us"), "must be > 0");
  if (r.has("angular")) spec.angular = r.boolean("angular");
  r.finish();
  try {
    (void)spec.build(true);
  } catch (const std::exception& e) {
    ObjectReader::fail(r.field("params"), e.what());
  }
  return spec;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + location(text, e.byte) + ": malformed JSON (" + e.what() +
                      ")");
  }
  try {
    RunConfig c;
    ObjectReader r(root, "");
    ObjectReader phys = r.object("physics");
    c.blockade_mhz = phys.number("B_MHz");
    c.forster_defect_mhz = phys.number("delta_p_MHz");
    c.gamma_per_us = phys.number("gamma_per_us", 0.0);
    if (c.gamma_per_us < 0.0) ObjectReader::fail(phys.field("gamma_per_us"), "must be >= 0");
    c.pp_diagonal =
        phys.choice("pp_diagonal_convention", pp_diagonal_from_string, PpDiagonal::literal);
    phys.finish();

    if (r.has("waveform")) c.waveform = parse_waveform(r.raw("waveform"), "/waveform");
    if (r.has("simulation")) c.simulation = parse_simulation(r.object("simulation"));
    if (r.has("mcwf")) c.mcwf = parse_mcwf(r.object("mcwf"));
    if (r.has("sweep")) c.sweep = parse_sweep(r.object("sweep"));
    if (r.has("optimize")) c.optimize = parse_optimize(r.object("optimize"));
    r.finish();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

json to_json(const WaveformSpec& spec) {
  json j;
  j["family"] = std::string(to_string(spec.family()));
  json p;
  if (const auto* s = std::get_if<SinusoidalParams>(&spec.shape)) {
    p = {{"omega0", s->omega0}, {"omega1", s->omega1}, {"omega2", s->omega2},
         {"delta0", s->delta0}, {"delta1", s->delta1}, {"delta2", s->delta2}};
  } else if (const auto* b = std::get_if<BernsteinParams>(&spec.shape)) {
    p = {{"beta", b->beta}, {"n", b->degree}, {"delta0", b->delta0}};
  } else {
    const auto& s = std::get<SampledParams>(spec.shape);
    p = {{"omega", s.omega}, {"delta", s.delta}};
  }
  j["params"] = p;
  j["Tg_us"] = spec.gate_time_us;
  if (spec.angular) j["angular"] = *spec.angular;
  return j;
}

json to_json(const RunConfig& c) {
  json j;
  j["physics"] = {{"B_MHz", c.blockade_mhz},
                  {"delta_p_MHz", c.forster_defect_mhz},
                  {"gamma_per_us", c.gamma_per_us},
                  {"pp_diagonal_convention", std::string(to_string(c.pp_diagonal))}};
  if (c.waveform) j["waveform"] = to_json(*c.waveform);
  j["simulation"] = {{"tol", c.simulation.tol},
                     {"record_points", c.simulation.record_points},
                     {"model", std::string(to_string(c.simulation.model))},
                     {"target", std::string(to_string(c.simulation.target))}};
  if (c.mcwf) {
    json m = {{"n_trajectories", c.mcwf->n_trajectories},
              {"gammas_per_us", c.mcwf->gammas_per_us},
              {"base_seed", c.mcwf->base_seed}};
    if (!c.mcwf->blockade_values_mhz.empty()) m["B_MHz_values"] = c.mcwf->blockade_values_mhz;
    j["mcwf"] = m;
  }
  if (c.sweep) {
    json s = {{"axis", std::string(to_string(c.sweep->axis))},
              {"values", c.sweep->values},
              {"perturbation", std::string(to_string(c.sweep->perturbation))},
              {"epsilon", c.sweep->epsilon},
              {"doppler_ratio", c.sweep->doppler_ratio}};
    if (c.sweep->mcwf) {
      s["mcwf"] = {{"n_trajectories", c.sweep->mcwf->n_trajectories},
                   {"base_seed", c.sweep->mcwf->base_seed}};
    }
    j["sweep"] = s;
  }
  if (c.optimize) {
    const auto& o = *c.optimize;
    json bounds = json::object();
    for (const auto& b : o.bounds) bounds[b.name] = {b.lo, b.hi};
    json oj = {{"family", std::string(to_string(o.family))},
               {"bounds", bounds},
               {"budget", o.budget},
               {"seed", o.seed},
               {"stop_at_error", o.stop_at_error ? json(*o.stop_at_error) : json(nullptr)},
               {"restarts", o.restarts},
               {"bernstein_degree", o.bernstein_degree},
               {"Tg_us", o.gate_time_us},
               {"angular", o.angular},
               {"polish_budget", o.polish_budget},
               {"polish_stop_at_error",
                o.polish_stop_at_error ? json(*o.polish_stop_at_error) : json(nullptr)},
               {"polish_tol", o.polish_tol}};
    j["optimize"] = oj;
  }
  return j;
}

}  // namespace rydgate
