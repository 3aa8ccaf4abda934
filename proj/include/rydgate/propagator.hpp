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
#include <vector>

#include "rydgate/linalg.hpp"
#include "rydgate/model.hpp"

namespace rydgate {

/// Adaptive stepping could not continue (step size fell below rounding
/// resolution at `time()`), typically a stiffness failure.
class StepUnderflow : public NumericError {
 public:
  StepUnderflow(double time, const std::string& what);
  double time() const { return time_; }

 private:
  double time_;
};

struct PropagatorOptions {
  double tol = 1e-11;     // relative and absolute local error tolerance
  int record_points = 0;  // uniform samples over [0, T]; 0 disables, else >= 2
};

struct StateSample {
  double t = 0.0;
  ComplexVector amplitudes;
  std::vector<double> populations;
};

struct PropagationResult {
  ComplexVector final_state;
  std::vector<StateSample> samples;
  long step_count = 0;
  long rejected_steps = 0;
  double max_norm_drift = 0.0;  // max | ||psi(t)||^2 - ||psi0||^2 | at step ends
};

/// Continuous extension of one accepted step: a quartic in the normalized
/// step coordinate.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<ComplexVector, 5> coeffs;

  void eval(double t, ComplexVector& out) const;
  ComplexVector eval(double t) const;
};

/// Dormand-Prince 5(4) integrator for i dpsi/dt = H(t) psi on [0, T] with
/// dense output. One `advance()` performs exactly one accepted step.
class DormandPrince {
 public:
  DormandPrince(const TimeDependentModel& model, const ComplexVector& psi0, double tol);

  bool done() const { return t_ >= end_; }
  void advance();

  double time() const { return t_; }
  const ComplexVector& state() const { return y_; }
  const DenseSegment& last_segment() const { return segment_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }

 private:
  void rhs(double t, const ComplexVector& y, ComplexVector& out) const;
  double error_norm(const ComplexVector& err, const ComplexVector& y0,
                    const ComplexVector& y1) const;

  const TimeDependentModel& model_;
  double tol_;
  double end_;
  double t_ = 0.0;
  double h_;
  double h_max_;
  double fac_old_ = 1e-4;
  bool last_rejected_ = false;
  long accepted_ = 0;
  long rejected_ = 0;
  ComplexVector y_, y_new_, tmp_, err_;
  std::array<ComplexVector, 7> k_;
  DenseSegment segment_;
};

/// Integrates from t = 0 to model.duration(). Throws std::invalid_argument on
/// dimension or tolerance errors and StepUnderflow on stiffness failure.
PropagationResult propagate(const TimeDependentModel& model, const ComplexVector& psi0,
                            const PropagatorOptions& options = {});

/// Per-state unwrapped phase series. Entries are NaN where the population is
/// below 1e-12 and the phase is undefined; unwrapping continues from the last
/// defined value.
struct PhaseTrace {
  std::vector<double> t;
  std::vector<std::vector<double>> phase;  // [state][sample]
};

PhaseTrace phase_trace(const std::vector<StateSample>& samples);

}  // namespace rydgate
