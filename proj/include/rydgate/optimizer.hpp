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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydgate/metrics.hpp"
#include "rydgate/model.hpp"
#include "rydgate/waveform.hpp"

namespace rydgate {

struct ParameterBound {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

struct NelderMeadOptions {
  long max_evals = 1000;
  double initial_step = 0.1;  // fraction of each box width
  double x_tol = 1e-9;        // simplex diameter, relative to box width
  double f_tol = 1e-15;       // spread of simplex values
  std::optional<double> stop_at;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  long evals = 0;
  bool converged = false;
  std::vector<double> trace;  // best value after each evaluation
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Box-constrained Nelder-Mead with dimension-adaptive coefficients. Trial
/// points are projected onto the box before evaluation.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const std::vector<ParameterBound>& bounds,
                             const NelderMeadOptions& options);

struct OptimizationProblem {
  WaveformFamily family = WaveformFamily::bernstein;
  std::vector<ParameterBound> bounds;  // MHz, in family parameter order
  PhysicsParams physics;
  GateTarget target = GateTarget::controlled_phase;
  long budget = 1000;
  std::uint64_t seed = 0;
  double gate_time = 1.0;
  bool angular = true;
  int bernstein_degree = 8;
  double tol = 1e-9;
  std::optional<double> stop_at_error;
  int restarts = 0;  // independent restart slots; 0 picks from the budget
  std::vector<double> initial_guess;  // optional start of slot 0
  int workers = 1;
};

struct OptimizationReport {
  std::vector<std::string> names;
  std::vector<double> best_parameters;
  double best_error = 1.0;
  long evaluations = 0;
  int restarts_used = 0;
  bool budget_exhausted = false;
  bool reached_target = false;
  std::vector<double> trace;  // best-so-far error per evaluation
};

/// Parameter names in vector order: omega0..2, delta0..2 or beta1..4, delta0.
std::vector<std::string> parameter_names(WaveformFamily family);

/// Bounds used when a problem does not specify them.
std::vector<ParameterBound> default_bounds(WaveformFamily family);

Waveform waveform_from_parameters(WaveformFamily family, const std::vector<double>& params,
                                  double gate_time, bool angular, int bernstein_degree = 8);

/// Gate error of the symmetric gate driven by the parameterized waveform
/// (gamma = 0). Any construction or propagation failure scores 1.
double objective(const std::vector<double>& params, const OptimizationProblem& problem);

/// Restart slots are independent (seeded by (seed, slot)); each spends
/// budget/restarts evaluations, re-seeding inside the slot whenever the
/// simplex collapses. Slots are merged in index order, and with
/// `stop_at_error` the report ends at the first slot that reaches it, so the
/// report does not depend on `workers`.
OptimizationReport optimize(const OptimizationProblem& problem);

}  // namespace rydgate
