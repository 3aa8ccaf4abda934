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
#include <string>
#include <string_view>
#include <vector>

#include "rydgate/metrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/waveform.hpp"

namespace rydgate {

/// Everything needed to evaluate one gate, with physics in lab units.
struct GateSetup {
  Waveform waveform;
  double blockade_mhz = 500.0;
  double forster_defect_mhz = -3.0;
  double gamma_per_us = 0.0;
  PpDiagonal pp_diagonal = PpDiagonal::literal;
  ModelKind model = ModelKind::symmetric;
  GateTarget target = GateTarget::strict_cz;
  double tol = 1e-9;

  PhysicsParams physics() const;
};

enum class SweepAxis { blockade_mhz, forster_defect_mhz, gamma_per_us, epsilon };

/// amplitude_scale: both Omega scaled by 1 + eps. power_imbalance: only the
/// control Omega scaled by 1 + eps. doppler_offset_pair: constant detuning
/// offsets (eps, ratio * eps) MHz added to control and target.
enum class Perturbation { none, amplitude_scale, doppler_offset_pair, power_imbalance };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);
std::string_view to_string(Perturbation kind);
Perturbation perturbation_from_string(std::string_view name);

struct McwfSettings {
  long n_trajectories = 1000;
  std::uint64_t base_seed = 0;
};

struct SweepSpec {
  GateSetup base;
  SweepAxis axis = SweepAxis::blockade_mhz;
  std::vector<double> values;
  Perturbation perturbation = Perturbation::none;
  double epsilon = 0.0;  // perturbation size when the axis is not epsilon
  double doppler_ratio = -1.0;
  std::optional<McwfSettings> mcwf;  // trajectory estimate at gamma > 0
  int workers = 1;
};

struct SweepRow {
  double value = 0.0;
  double gate_error = 0.0;
  std::optional<double> standard_error;
};

/// Gate models for a setup with a perturbation applied. Perturbations that
/// break the control/target symmetry always use the full two-atom model.
GateModels perturbed_models(const GateSetup& setup, Perturbation kind, double epsilon,
                            double doppler_ratio = -1.0);

/// One row per value, in input order. Without MCWF settings (or at
/// gamma = 0) the error is the deterministic non-Hermitian one.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares. Data with zero spread in y fits exactly and
/// reports R^2 = 1. Throws std::invalid_argument for fewer than two distinct
/// abscissae or size mismatch.
FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rydgate
