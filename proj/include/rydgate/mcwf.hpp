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
#include <cstdint>
#include <optional>
#include <vector>

#include "rydgate/metrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/propagator.hpp"
#include "rydgate/random.hpp"

namespace rydgate {

/// Deterministic pre-jump evolution under the non-Hermitian Hamiltonian.
/// With loss-type jumps into an absorbing reservoir every trajectory follows
/// this path until its first jump, so it is integrated once and shared.
class NoJumpPath {
 public:
  /// `decaying` already includes the -i gamma/2 diagonal.
  NoJumpPath(const TimeDependentModel& decaying, const ComplexVector& psi0, double tol);

  double initial_norm() const { return initial_norm_; }
  double final_norm() const { return running_min_.empty() ? initial_norm_ : running_min_.back(); }
  const ComplexVector& final_state() const { return final_state_; }
  const std::vector<int>& excitation_counts() const { return excitations_; }

  /// First time the squared norm drops below `threshold`, located on the
  /// dense output by bisection to `resolution` us. Empty if it never does.
  std::optional<double> first_crossing(double threshold, double resolution = 1e-4) const;

  ComplexVector state_at(double t) const;

 private:
  std::size_t segment_index(double t) const;

  std::vector<DenseSegment> segments_;
  std::vector<double> running_min_;  // prefix minimum of ||psi||^2 at segment ends
  std::vector<int> excitations_;
  ComplexVector final_state_;
  double initial_norm_ = 0.0;
};

struct TrajectoryResult {
  bool jumped = false;
  double jump_time = 0.0;
  int decayed_state = -1;  // basis index the jump was attributed to
  ComplexVector final_state;  // no-jump: normalized; jumped: all zeros
};

/// One quantum-jump trajectory: a single uniform r decides the first time
/// the no-jump norm falls below it; the decaying basis state is then drawn
/// with weight excitation_count * |psi_i|^2. After a jump the state has left
/// every modelled manifold.
TrajectoryResult run_trajectory(const NoJumpPath& path, SplitMix64& rng);

/// Convenience overload: builds apply_decay(m, gamma) and its path.
TrajectoryResult run_trajectory(const TimeDependentModel& m, const ComplexVector& psi0,
                                double gamma, SplitMix64& rng, double tol = 1e-9);

struct TrajectorySpec {
  GateModels models;  // dissipation-free; decay is added here
  double gamma = 0.0;
  long n_trajectories = 1;
  std::uint64_t base_seed = 0;
  GateTarget target = GateTarget::strict_cz;
  double tol = 1e-9;
  int workers = 1;
};

struct TrajectoryStats {
  double gamma = 0.0;
  double mean_gate_error = 0.0;
  double standard_error = 0.0;
  long n_trajectories = 0;
  long jumps = 0;
  std::array<double, 3> jump_fraction{};  // per manifold |00>, |01>, |10>
  std::uint64_t base_seed = 0;
};

/// Trajectory i starts the four computational inputs entangled with an
/// ancilla (amplitude 1/2 each) and uses the child stream (base_seed, i).
/// A jump leaves no amplitude in the computational space (error 1); a
/// surviving trajectory's gate is 2 psi(T)/||psi(T)|| restricted to the
/// computational states. Averages are taken in index order, so results do
/// not depend on `workers`.
TrajectoryStats estimate_gate_error(const TrajectorySpec& spec);

/// Gate error of the sub-normalized no-jump gate, which equals the exact
/// trajectory average.
double deterministic_leakage_error(const GateModels& models, double gamma,
                                   GateTarget target = GateTarget::strict_cz,
                                   double tol = 1e-11);

}  // namespace rydgate
