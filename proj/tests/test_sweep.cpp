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
#include <random>

#include "doctest.h"
#include "rydgate/mcwf.hpp"
#include "rydgate/sweep.hpp"
#include "test_support.hpp"

using namespace rydgate;

namespace {

GateSetup reference_setup() {
  GateSetup s{testing::bernstein_reference()};
  s.target = GateTarget::controlled_phase;
  s.tol = 1e-10;
  return s;
}

}  // namespace

TEST_CASE("fit_linear on exact and constant data") {
  const FitResult f = fit_linear({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const FitResult c = fit_linear({1.0, 2.0, 4.0}, {3.0, 3.0, 3.0});
  CHECK(c.slope == 0.0);
  CHECK(c.intercept == 3.0);
  CHECK(c.r_squared == 1.0);
  CHECK_THROWS_AS(fit_linear({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_linear({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_linear({1.0, 2.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("fit_linear R squared stays in range") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 5; ++i) {
      x.push_back(i);
      y.push_back(g(rng));
    }
    const FitResult f = fit_linear(x, y);
    CHECK(f.r_squared >= 0.0);
    CHECK(f.r_squared <= 1.0);
    // Residuals of an OLS fit sum to zero.
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) sum += y[i] - (f.intercept + f.slope * x[i]);
    CHECK(std::abs(sum) < 1e-12);
  }
}

TEST_CASE("zero perturbation reproduces the baseline") {
  const GateSetup s = reference_setup();
  auto baseline = [&](ModelKind kind) {
    const GateModels m = build_gate_models(s.waveform, s.waveform, s.physics(), kind);
    return deterministic_leakage_error(m, 0.0, s.target, s.tol);
  };
  for (auto kind : {Perturbation::none, Perturbation::amplitude_scale,
                    Perturbation::power_imbalance, Perturbation::doppler_offset_pair}) {
    const bool symmetric = kind == Perturbation::none || kind == Perturbation::amplitude_scale;
    const double expected = baseline(symmetric ? ModelKind::symmetric : ModelKind::full);
    SweepSpec spec{s};
    spec.axis = SweepAxis::epsilon;
    spec.values = {0.0};
    spec.perturbation = kind;
    CHECK(std::abs(run_sweep(spec)[0].gate_error - expected) < 1e-12);
  }
}

TEST_CASE("rows follow the values") {
  SweepSpec spec{reference_setup()};
  spec.axis = SweepAxis::blockade_mhz;
  spec.values = {1000.0, 250.0, 500.0};
  spec.workers = 3;
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].value == spec.values[i]);
    CHECK_FALSE(rows[i].standard_error.has_value());
    CHECK(rows[i].gate_error < 1e-3);
  }
  spec.workers = 1;
  const auto serial = run_sweep(spec);
  for (std::size_t i = 0; i < 3; ++i) CHECK(serial[i].gate_error == rows[i].gate_error);
  spec.values.clear();
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec.values = {std::nan("")};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

TEST_CASE("amplitude miscalibration costs fidelity on both sides") {
  SweepSpec spec{reference_setup()};
  spec.axis = SweepAxis::epsilon;
  spec.perturbation = Perturbation::amplitude_scale;
  spec.values = {-0.02, -0.01, 0.0, 0.01, 0.02};
  const auto rows = run_sweep(spec);
  CHECK(rows[2].gate_error < rows[1].gate_error);
  CHECK(rows[2].gate_error < rows[3].gate_error);
  CHECK(rows[1].gate_error < rows[0].gate_error);
  CHECK(rows[3].gate_error < rows[4].gate_error);
}

TEST_CASE("asymmetric perturbations use the full model") {
  const GateSetup s = reference_setup();
  const GateModels m = perturbed_models(s, Perturbation::doppler_offset_pair, 0.05, -1.0);
  CHECK(m.m00.dim() == 5);
  const double d_control = m.m01.hamiltonian(0.5)(1, 1).real();
  const double d_target = m.m10.hamiltonian(0.5)(1, 1).real();
  const double base = s.waveform(0.5).delta;
  CHECK(d_control - base == doctest::Approx(kTwoPi * 0.05));
  CHECK(d_target - base == doctest::Approx(-kTwoPi * 0.05));

  const GateModels p = perturbed_models(s, Perturbation::power_imbalance, 0.1);
  CHECK(p.m01.hamiltonian(0.5)(0, 1).real() ==
        doctest::Approx(1.1 * p.m10.hamiltonian(0.5)(0, 1).real()));
}

TEST_CASE("Doppler offsets of either sign are both evaluated") {
  SweepSpec spec{reference_setup()};
  spec.axis = SweepAxis::epsilon;
  spec.perturbation = Perturbation::doppler_offset_pair;
  spec.values = {-0.05, 0.05};
  const auto rows = run_sweep(spec);
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.gate_error));
    CHECK(r.gate_error > 0.0);
  }
}

TEST_CASE("decay sweep with trajectories reports standard errors") {
  SweepSpec spec{reference_setup()};
  spec.axis = SweepAxis::gamma_per_us;
  spec.values = {0.0, 0.05};
  spec.mcwf = McwfSettings{2000, 3};
  spec.workers = 2;
  const auto rows = run_sweep(spec);
  REQUIRE(rows[0].standard_error.has_value());
  CHECK(*rows[0].standard_error == 0.0);
  CHECK(*rows[1].standard_error > 0.0);
  CHECK(rows[1].gate_error > rows[0].gate_error);
}

TEST_CASE("names round trip") {
  for (auto a : {SweepAxis::blockade_mhz, SweepAxis::forster_defect_mhz, SweepAxis::gamma_per_us,
                 SweepAxis::epsilon}) {
    CHECK(sweep_axis_from_string(to_string(a)) == a);
  }
  for (auto p : {Perturbation::none, Perturbation::amplitude_scale,
                 Perturbation::doppler_offset_pair, Perturbation::power_imbalance}) {
    CHECK(perturbation_from_string(to_string(p)) == p);
  }
  CHECK_THROWS_AS(sweep_axis_from_string("tau"), std::invalid_argument);
}
