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

#include <cmath>

#include "doctest.h"
#include "rydgate/mcwf.hpp"
#include "test_support.hpp"

using namespace rydgate;

namespace {

GateModels reference_models() {
  const Waveform w = testing::bernstein_reference();
  return build_gate_models(w, w, testing::reference_physics(), ModelKind::symmetric);
}

// One Rydberg state with nothing driving it.
TimeDependentModel parked(double duration) {
  return TimeDependentModel({"R"}, {1}, {}, {}, duration);
}

}  // namespace

TEST_CASE("without decay trajectories never jump") {
  const GateModels models = reference_models();
  SplitMix64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto tr = run_trajectory(models.m00, ground_state(models.m00), 0.0, rng);
    CHECK_FALSE(tr.jumped);
  }
  const auto tr = run_trajectory(models.m00, ground_state(models.m00), 0.0, rng, 1e-11);
  const auto det = propagate(models.m00, ground_state(models.m00));
  CHECK((tr.final_state - det.final_state).norm() < 1e-9);

  TrajectorySpec spec{models, 0.0, 500, 42, GateTarget::strict_cz, 1e-9, 2};
  const TrajectoryStats st = estimate_gate_error(spec);
  CHECK(st.jumps == 0);
  CHECK(st.standard_error == 0.0);
  PropagatorOptions opts;
  opts.tol = 1e-9;
  CHECK(st.mean_gate_error == doctest::Approx(simulate_gate(models, opts).gate_error).epsilon(1e-9));
}

TEST_CASE("parked Rydberg state decays exponentially") {
  const double gamma = 0.5, duration = 1.0;
  const int n = 10000;
  const NoJumpPath path(apply_decay(parked(duration), gamma), ComplexVector::Ones(1), 1e-10);
  CHECK(path.final_norm() == doctest::Approx(std::exp(-gamma * duration)).epsilon(1e-8));
  int jumps = 0;
  double mean_time = 0.0;
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng(2024, static_cast<std::uint64_t>(i));
    const auto tr = run_trajectory(path, rng);
    if (tr.jumped) {
      ++jumps;
      mean_time += tr.jump_time;
      CHECK(tr.decayed_state == 0);
      CHECK(tr.final_state.norm() == 0.0);
    }
  }
  const double p = 1.0 - std::exp(-gamma * duration);
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(static_cast<double>(jumps) / n - p) < 3 * sigma);
  // Truncated exponential mean jump time.
  const double expected_time =
      (1.0 / gamma - duration * std::exp(-gamma * duration) / p);
  CHECK(mean_time / jumps == doctest::Approx(expected_time).epsilon(0.03));
}

TEST_CASE("first crossing is located to the requested resolution") {
  const NoJumpPath path(apply_decay(parked(1.0), 2.0), ComplexVector::Ones(1), 1e-10);
  for (double r : {0.9, 0.5, 0.2}) {
    const auto t = path.first_crossing(r, 1e-4);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(-std::log(r) / 2.0).epsilon(2e-4));
    CHECK(path.state_at(*t).squaredNorm() < r);
    CHECK(path.state_at(*t - 1e-4).squaredNorm() >= r);
  }
  CHECK_FALSE(path.first_crossing(0.1).has_value());
}

TEST_CASE("parked toy gate matches the analytic loss") {
  const double gamma = 0.2, duration = 1.0;
  const GateModels m{parked(duration), build_idle(duration, "01"), build_idle(duration, "10")};
  const double a = std::exp(-gamma * duration / 2);
  // U = diag(a, 1, 1, 1) against C-Z: M = diag(-a, 1, 1, 1).
  const double expected = 1.0 - (a * a + 3.0 + (3.0 - a) * (3.0 - a)) / 20.0;
  CHECK(deterministic_leakage_error(m, gamma) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("deterministic leakage is linear at small decay") {
  const GateModels models = reference_models();
  CHECK(deterministic_leakage_error(models, 0.0, GateTarget::strict_cz) ==
        doctest::Approx(simulate_gate(models).gate_error).epsilon(1e-12));
  const double base = deterministic_leakage_error(models, 0.0, GateTarget::controlled_phase);
  const double e1 = deterministic_leakage_error(models, 1e-3, GateTarget::controlled_phase);
  const double e2 = deterministic_leakage_error(models, 2e-3, GateTarget::controlled_phase);
  CHECK((e2 - base) / (e1 - base) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e2 / e1 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("trajectory mean agrees with the oracle") {
  const GateModels models = reference_models();
  for (double gamma : {0.02, 0.05}) {
    TrajectorySpec spec{models, gamma, 20000, 7, GateTarget::controlled_phase, 1e-9, 4};
    const TrajectoryStats st = estimate_gate_error(spec);
    const double oracle = deterministic_leakage_error(models, gamma, GateTarget::controlled_phase, 1e-9);
    CHECK(st.standard_error > 0.0);
    CHECK(std::abs(st.mean_gate_error - oracle) < 3 * st.standard_error);
    CHECK(st.jumps > 0);
    double frac = 0.0;
    for (double f : st.jump_fraction) frac += f;
    CHECK(frac <= static_cast<double>(st.jumps) / st.n_trajectories + 1e-15);
  }
}

TEST_CASE("standard error shrinks as one over root n") {
  const GateModels models = reference_models();
  TrajectorySpec small{models, 0.1, 4000, 11, GateTarget::strict_cz, 1e-9, 2};
  TrajectorySpec large = small;
  large.n_trajectories = 16000;
  const double ratio =
      estimate_gate_error(small).standard_error / estimate_gate_error(large).standard_error;
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("results do not depend on the worker count") {
  const GateModels models = reference_models();
  TrajectorySpec one{models, 0.03, 3000, 5, GateTarget::controlled_phase, 1e-9, 1};
  TrajectorySpec eight = one;
  eight.workers = 8;
  const TrajectoryStats a = estimate_gate_error(one);
  const TrajectoryStats b = estimate_gate_error(eight);
  CHECK(a.mean_gate_error == b.mean_gate_error);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.jumps == b.jumps);
}

TEST_CASE("invalid specs are rejected") {
  const GateModels models = reference_models();
  TrajectorySpec spec{models, -0.1, 10, 0, GateTarget::strict_cz, 1e-9, 1};
  CHECK_THROWS_AS(estimate_gate_error(spec), std::invalid_argument);
  spec.gamma = 0.1;
  spec.n_trajectories = 0;
  CHECK_THROWS_AS(estimate_gate_error(spec), std::invalid_argument);
}

TEST_CASE("child streams are distinct and reproducible") {
  SplitMix64 a(1, 0), b(1, 1), c(1, 0);
  const auto x = a.next();
  CHECK(x != b.next());
  CHECK(x == c.next());
  SplitMix64 u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
