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

#include <array>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "rydgate/linalg.hpp"
#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"

namespace rydgate {

using GateMatrix = Eigen::Matrix4cd;

/// An amplitude exceeded unit magnitude by more than rounding allows.
class PhysicalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diagonal two-qubit gate in the basis (|00>, |01>, |10>, |11>). |11> is
/// idle, so its amplitude is exactly 1.
struct GateOutcome {
  GateMatrix u = GateMatrix::Identity();
  std::array<Complex, 4> amplitudes{};
  std::array<double, 4> phases{};
  std::array<double, 4> return_probabilities{};
  double fidelity = 0.0;  // against C-Z
  double gate_error = 1.0;
};

/// diag(-1, 1, 1, 1): pi phase on |00>.
GateMatrix cz_gate();

/// (Tr(M M^dag) + |Tr M|^2) / 20 with M = target^dag u.
double fidelity(const GateMatrix& u, const GateMatrix& target);

/// Builds diag(a00, a01, a10, 1) and scores it against C-Z. Throws
/// PhysicalityError when any |a| > 1 + 1e-6.
GateOutcome assemble_gate(Complex a00, Complex a01, Complex a10);

struct PhaseCorrection {
  double theta1 = 0.0;  // Z phase on the control qubit (applied to its |1>)
  double theta2 = 0.0;  // Z phase on the target qubit
  double global_phase = 0.0;
  GateOutcome corrected;
};

/// Best single-qubit Z corrections e^{i g} diag(1, e^{i t2}, e^{i t1},
/// e^{i(t1+t2)}) U against C-Z. Starts from the closed form that zeroes the
/// |01>, |10> phases relative to |11> and refines (t1, t2) by exact
/// alternating maximization; g = -arg Tr(CZ^dag corrected).
PhaseCorrection local_phase_correction(const GateOutcome& g);

/// Distance of (phi00, phi01, phi10, phi11) from the controlled-PHASE
/// condition phi11 = +-pi - phi00 + phi01 + phi10, wrapped to [0, pi].
double phase_constraint_residual(double phi00, double phi01, double phi10, double phi11);

/// Final manifold amplitudes of the computational states.
struct GateAmplitudes {
  Complex a00;
  Complex a01;
  Complex a10;
  double max_norm_drift = 0.0;
  long steps = 0;
};

/// Propagates each manifold from its ground state and collects the
/// computational-state amplitudes.
GateAmplitudes propagate_gate(const GateModels& models, const PropagatorOptions& options = {});

GateOutcome simulate_gate(const GateModels& models, const PropagatorOptions& options = {});

/// How a gate is scored: directly against C-Z, or after the best local Z
/// corrections (controlled-PHASE up to single-qubit phases).
enum class GateTarget { strict_cz, controlled_phase };

std::string_view to_string(GateTarget target);
GateTarget gate_target_from_string(std::string_view name);

/// Gate error under `target`.
double score_gate(const GateOutcome& g, GateTarget target);

/// Applies a previously determined correction (e.g. calibrated on the
/// dissipation-free gate) to another outcome and rescores it against C-Z.
GateOutcome apply_correction(const GateOutcome& g, const PhaseCorrection& correction);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phase);

}  // namespace rydgate
