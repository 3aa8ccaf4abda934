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
#include <string>
#include <string_view>
#include <vector>

#include "rydgate/linalg.hpp"
#include "rydgate/waveform.hpp"

namespace rydgate {

/// Diagonal energy of the |pp'> pair state. `literal` uses the Forster defect
/// alone; `rotating_frame` adds the two-photon detuning 2 Delta(t).
enum class PpDiagonal { literal, rotating_frame };

std::string_view to_string(PpDiagonal convention);
PpDiagonal pp_diagonal_from_string(std::string_view name);

/// Two-atom interaction parameters in internal units (rad/us, 1/us).
struct PhysicsParams {
  double blockade = 0.0;        // Forster coupling B
  double forster_defect = 0.0;  // energy penalty delta_p of |pp'>
  double decay_rate = 0.0;      // uniform Rydberg decay rate gamma
  PpDiagonal pp_diagonal = PpDiagonal::literal;

  /// B and delta_p given as linear frequencies (MHz), converted with 2 pi.
  static PhysicsParams from_mhz(double blockade_mhz, double forster_defect_mhz,
                                double decay_rate_per_us = 0.0,
                                PpDiagonal pp = PpDiagonal::literal);
};

/// Which waveform channel scales a Hamiltonian term.
enum class Channel { unit, omega, delta };

/// H(t) contribution coefficient(t) * matrix, where the coefficient is 1,
/// Omega(t) or Delta(t) of drive `drive`.
struct Term {
  Channel channel = Channel::unit;
  int drive = 0;
  ComplexMatrix matrix;
};

/// H(t) = sum_k c_k(t) A_k over a labelled basis, on [0, duration].
class TimeDependentModel {
 public:
  static constexpr int kMaxDrives = 8;
  static constexpr int kMaxTerms = 2 * kMaxDrives + 1;

  /// Terms sharing (channel, drive) are merged. The duration is the drives'
  /// common gate time; `duration` is only consulted when there are no drives.
  TimeDependentModel(std::vector<std::string> basis_labels,
                     std::vector<int> excitation_counts,
                     std::vector<Waveform> drives, std::vector<Term> terms,
                     double duration = 0.0);

  int dim() const { return static_cast<int>(labels_.size()); }
  double duration() const { return duration_; }
  bool hermitian() const { return hermitian_; }

  const std::vector<std::string>& basis_labels() const { return labels_; }
  const std::vector<int>& excitation_counts() const { return excitations_; }
  const std::vector<Waveform>& drives() const { return drives_; }
  const std::vector<Term>& terms() const { return terms_; }

  ComplexMatrix hamiltonian(double t) const;

  /// out = H(t) psi without heap allocation (out must be sized dim()).
  void apply(double t, const ComplexVector& psi, ComplexVector& out) const;

  /// Upper bound on ||H(t)||_2 over a coarse time grid (max row-sum norm).
  double spectral_bound(int grid_points = 257) const;

  /// Adds `matrix` as a constant term (used by the decay augmentation).
  TimeDependentModel with_constant_term(const ComplexMatrix& matrix) const;

 private:
  struct Entry {
    int term;
    int row;
    int col;
    Complex value;
  };

  void evaluate_coefficients(double t, std::array<double, kMaxTerms>& coeffs) const;

  std::vector<std::string> labels_;
  std::vector<int> excitations_;
  std::vector<Waveform> drives_;
  std::vector<Term> terms_;
  std::vector<Entry> entries_;
  double duration_ = 0.0;
  bool hermitian_ = true;
};

/// Ideal-blockade two-level system {ground, rydberg} with coupling
/// enhancement * Omega(t) / 2 and detuning Delta(t) on the Rydberg level.
TimeDependentModel build_two_level(const Waveform& w, double enhancement = 1.0);

/// |00> manifold under symmetric driving: {|00>, |R>, |rr'>, |pp'>} with the
/// Forster exchange |rr'> <-> |pp'>.
TimeDependentModel build_symmetric_blockade(const Waveform& w, const PhysicsParams& p);

/// |00> manifold with independent control/target drives:
/// {|00>, |r0>, |0r'>, |rr'>, |pp'>}.
TimeDependentModel build_full_two_atom(const Waveform& control, const Waveform& target,
                                       const PhysicsParams& p);

/// Adds -i (gamma/2) * excitation_count to every diagonal entry. Throws
/// std::invalid_argument for gamma < 0.
TimeDependentModel apply_decay(const TimeDependentModel& m, double gamma);

/// Block-diagonal combination of independent models with a common duration.
TimeDependentModel direct_sum(const std::vector<TimeDependentModel>& blocks);

/// A one-state model with H = 0, used for |11>, which no laser couples.
TimeDependentModel build_idle(double duration, std::string label = "11");

enum class ModelKind { symmetric, full };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// The three driven manifolds of the two-qubit gate. |11> is idle and is not
/// modelled. Qubit order is |control target>; the control atom is driven when
/// its qubit is in |0>.
struct GateModels {
  TimeDependentModel m00;
  TimeDependentModel m01;
  TimeDependentModel m10;
};

/// Symmetric kind uses the four-state reduction for |00> driven by `control`
/// (only meaningful when both atoms see the same pulse); full kind uses the
/// five-state two-atom manifold.
GateModels build_gate_models(const Waveform& control, const Waveform& target,
                             const PhysicsParams& p, ModelKind kind);

GateModels apply_decay(const GateModels& models, double gamma);

/// Ground-state initial vector (first basis state) for a model.
ComplexVector ground_state(const TimeDependentModel& m);

}  // namespace rydgate
