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

#include "rydgate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rydgate/mcwf.hpp"
#include "rydgate/parallel.hpp"

namespace rydgate {

PhysicsParams GateSetup::physics() const {
  return PhysicsParams::from_mhz(blockade_mhz, forster_defect_mhz, gamma_per_us, pp_diagonal);
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::blockade_mhz:
      return "B_MHz";
    case SweepAxis::forster_defect_mhz:
      return "delta_p_MHz";
    case SweepAxis::gamma_per_us:
      return "gamma_per_us";
    case SweepAxis::epsilon:
      return "epsilon";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  for (auto a : {SweepAxis::blockade_mhz, SweepAxis::forster_defect_mhz, SweepAxis::gamma_per_us,
                 SweepAxis::epsilon}) {
    if (name == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(Perturbation kind) {
  switch (kind) {
    case Perturbation::none:
      return "none";
    case Perturbation::amplitude_scale:
      return "amplitude_scale";
    case Perturbation::doppler_offset_pair:
      return "doppler_offset_pair";
    case Perturbation::power_imbalance:
      return "power_imbalance";
  }
  return "?";
}

Perturbation perturbation_from_string(std::string_view name) {
  for (auto p : {Perturbation::none, Perturbation::amplitude_scale,
                 Perturbation::doppler_offset_pair, Perturbation::power_imbalance}) {
    if (name == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown perturbation '" + std::string(name) + "'");
}

GateModels perturbed_models(const GateSetup& setup, Perturbation kind, double epsilon,
                            double doppler_ratio) {
  Waveform control = setup.waveform;
  Waveform target = setup.waveform;
  ModelKind model = setup.model;
  switch (kind) {
    case Perturbation::none:
      break;
    case Perturbation::amplitude_scale:
      control = control.with_amplitude_scale(1.0 + epsilon);
      target = target.with_amplitude_scale(1.0 + epsilon);
      break;
    case Perturbation::power_imbalance:
      control = control.with_amplitude_scale(1.0 + epsilon);
      model = ModelKind::full;
      break;
    case Perturbation::doppler_offset_pair:
      control = control.with_detuning_offset(kTwoPi * epsilon);
      target = target.with_detuning_offset(kTwoPi * doppler_ratio * epsilon);
      model = ModelKind::full;
      break;
  }
  return build_gate_models(control, target, setup.physics(), model);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep values must not be empty");
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("sweep values must be finite");
  }

  auto point = [&](double value) {
    GateSetup setup = spec.base;
    double epsilon = spec.epsilon;
    switch (spec.axis) {
      case SweepAxis::blockade_mhz:
        setup.blockade_mhz = value;
        break;
      case SweepAxis::forster_defect_mhz:
        setup.forster_defect_mhz = value;
        break;
      case SweepAxis::gamma_per_us:
        setup.gamma_per_us = value;
        break;
      case SweepAxis::epsilon:
        epsilon = value;
        break;
    }
    if (setup.gamma_per_us < 0.0) throw std::invalid_argument("gamma must be >= 0");
    return std::make_pair(setup, epsilon);
  };

  std::vector<SweepRow> rows(spec.values.size());
  if (spec.mcwf) {
    // Trajectories are parallel inside each point.
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto [setup, epsilon] = point(spec.values[i]);
      const GateModels models =
          perturbed_models(setup, spec.perturbation, epsilon, spec.doppler_ratio);
      rows[i].value = spec.values[i];
      TrajectorySpec ts{models,
                        setup.gamma_per_us,
                        spec.mcwf->n_trajectories,
                        spec.mcwf->base_seed,
                        setup.target,
                        setup.tol,
                        spec.workers};
      const TrajectoryStats stats = estimate_gate_error(ts);
      rows[i].gate_error = stats.mean_gate_error;
      rows[i].standard_error = stats.standard_error;
    }
    return rows;
  }
  parallel_for(rows.size(), spec.workers, [&](std::size_t i) {
    const auto [setup, epsilon] = point(spec.values[i]);
    const GateModels models =
        perturbed_models(setup, spec.perturbation, epsilon, spec.doppler_ratio);
    rows[i].value = spec.values[i];
    rows[i].gate_error =
        deterministic_leakage_error(models, setup.gamma_per_us, setup.target, setup.tol);
  });
  return rows;
}

FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_linear: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_linear: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_linear: abscissae are all equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace rydgate
