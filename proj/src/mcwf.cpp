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

#include "rydgate/mcwf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rydgate/parallel.hpp"

namespace rydgate {

namespace {

constexpr double kJumpTimeResolution = 1e-4;  // us

struct ChoiLayout {
  TimeDependentModel model;
  ComplexVector psi0;
  std::array<int, 4> offsets;  // block start of |00>, |01>, |10>, |11>
};

// Direct sum of the three driven manifolds plus the idle |11> state, each
// starting in its ground state with amplitude 1/2.
ChoiLayout choi_layout(const GateModels& decaying) {
  const TimeDependentModel idle = build_idle(decaying.m00.duration());
  ChoiLayout layout{direct_sum({decaying.m00, decaying.m01, decaying.m10, idle}),
                    ComplexVector(), {}};
  layout.offsets = {0, decaying.m00.dim(), decaying.m00.dim() + decaying.m01.dim(),
                    decaying.m00.dim() + decaying.m01.dim() + decaying.m10.dim()};
  layout.psi0 = ComplexVector::Zero(layout.model.dim());
  for (int off : layout.offsets) layout.psi0(off) = 0.5;
  return layout;
}

std::optional<PhaseCorrection> reference_correction(const GateModels& models,
                                                    GateTarget target, double tol) {
  if (target == GateTarget::strict_cz) return std::nullopt;
  PropagatorOptions opts;
  opts.tol = tol;
  return local_phase_correction(simulate_gate(models, opts));
}

double score(const GateOutcome& g, const std::optional<PhaseCorrection>& correction) {
  return correction ? apply_correction(g, *correction).gate_error : g.gate_error;
}

}  // namespace

NoJumpPath::NoJumpPath(const TimeDependentModel& decaying, const ComplexVector& psi0,
                       double tol)
    : excitations_(decaying.excitation_counts()), initial_norm_(psi0.squaredNorm()) {
  DormandPrince stepper(decaying, psi0, tol);
  double running = initial_norm_;
  while (!stepper.done()) {
    stepper.advance();
    segments_.push_back(stepper.last_segment());
    running = std::min(running, stepper.state().squaredNorm());
    running_min_.push_back(running);
  }
  final_state_ = stepper.state();
}

std::size_t NoJumpPath::segment_index(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double value, const DenseSegment& s) { return value < s.t0; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

ComplexVector NoJumpPath::state_at(double t) const {
  if (segments_.empty()) return final_state_;
  return segments_[segment_index(t)].eval(t);
}

std::optional<double> NoJumpPath::first_crossing(double threshold, double resolution) const {
  if (!(final_norm() < threshold)) return std::nullopt;
  // running_min_ is non-increasing: first segment whose end falls below.
  auto it = std::lower_bound(running_min_.begin(), running_min_.end(), threshold,
                             [](double value, double thr) { return value >= thr; });
  const DenseSegment& seg = segments_[static_cast<std::size_t>(it - running_min_.begin())];
  double lo = seg.t0;
  double hi = seg.t0 + seg.h;
  ComplexVector buffer(final_state_.size());
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    seg.eval(mid, buffer);
    if (buffer.squaredNorm() < threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TrajectoryResult run_trajectory(const NoJumpPath& path, SplitMix64& rng) {
  TrajectoryResult result;
  const double r = rng.uniform();
  const auto crossing = path.first_crossing(r, kJumpTimeResolution);
  if (!crossing) {
    const double norm = std::sqrt(path.final_norm());
    result.final_state = path.final_state() / norm;
    // Keep the stream position independent of the outcome.
    (void)rng.uniform();
    return result;
  }
  result.jumped = true;
  result.jump_time = *crossing;
  const ComplexVector psi = path.state_at(*crossing);
  const auto& counts = path.excitation_counts();
  double total = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) total += counts[i] * std::norm(psi(i));
  double pick = rng.uniform() * total;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double w = counts[i] * std::norm(psi(i));
    if (w <= 0.0) continue;
    result.decayed_state = static_cast<int>(i);
    if (pick < w) break;
    pick -= w;
  }
  result.final_state = ComplexVector::Zero(psi.size());
  return result;
}

TrajectoryResult run_trajectory(const TimeDependentModel& m, const ComplexVector& psi0,
                                double gamma, SplitMix64& rng, double tol) {
  const NoJumpPath path(apply_decay(m, gamma), psi0, tol);
  return run_trajectory(path, rng);
}

TrajectoryStats estimate_gate_error(const TrajectorySpec& spec) {
  if (spec.n_trajectories < 1) throw std::invalid_argument("n_trajectories must be >= 1");
  if (!(spec.gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");

  const auto correction = reference_correction(spec.models, spec.target, spec.tol);
  const ChoiLayout layout = choi_layout(apply_decay(spec.models, spec.gamma));
  const NoJumpPath path(layout.model, layout.psi0, spec.tol);

  const auto n = static_cast<std::size_t>(spec.n_trajectories);
  std::vector<double> errors(n);
  std::vector<int> jumped_block(n, -1);
  parallel_for(n, spec.workers, [&](std::size_t i) {
    SplitMix64 rng(spec.base_seed, static_cast<std::uint64_t>(i));
    const TrajectoryResult tr = run_trajectory(path, rng);
    if (tr.jumped) {
      errors[i] = 1.0;
      int block = 0;
      for (int b = 1; b < 4; ++b) {
        if (tr.decayed_state >= layout.offsets[b]) block = b;
      }
      jumped_block[i] = block;
      return;
    }
    // Entries may exceed unit magnitude after renormalization by the joint
    // norm, so the outcome is built directly instead of via assemble_gate.
    const auto& psi = tr.final_state;
    GateOutcome scaled;
    scaled.u = GateMatrix::Zero();
    for (int b = 0; b < 4; ++b) {
      const Complex a = 2.0 * psi(layout.offsets[b]);
      scaled.u(b, b) = a;
      scaled.amplitudes[b] = a;
      scaled.phases[b] = std::arg(a);
      scaled.return_probabilities[b] = std::norm(a);
    }
    scaled.fidelity = fidelity(scaled.u, cz_gate());
    scaled.gate_error = 1.0 - scaled.fidelity;
    errors[i] = score(scaled, correction);
  });

  TrajectoryStats stats;
  stats.gamma = spec.gamma;
  stats.n_trajectories = spec.n_trajectories;
  stats.base_seed = spec.base_seed;
  // Shifted two-pass sums in index order: exact zero spread when all
  // trajectories agree.
  const double shift = errors.front();
  double sum = 0.0;
  for (double e : errors) sum += e - shift;
  const double mean_shifted = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double e : errors) ss += (e - shift - mean_shifted) * (e - shift - mean_shifted);
  stats.mean_gate_error = shift + mean_shifted;
  stats.standard_error =
      n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  std::array<long, 3> per_block{};
  for (int b : jumped_block) {
    if (b < 0) continue;
    ++stats.jumps;
    if (b < 3) ++per_block[b];
  }
  for (int b = 0; b < 3; ++b) {
    stats.jump_fraction[b] = static_cast<double>(per_block[b]) / static_cast<double>(n);
  }
  return stats;
}

double deterministic_leakage_error(const GateModels& models, double gamma, GateTarget target,
                                   double tol) {
  const auto correction = reference_correction(models, target, tol);
  PropagatorOptions opts;
  opts.tol = tol;
  const GateOutcome g = simulate_gate(apply_decay(models, gamma), opts);
  return score(g, correction);
}

}  // namespace rydgate
