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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rydgate {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a numerical routine produces non-finite output or cannot
/// make progress (e.g. adaptive step underflow).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeDependentModel;

/// True iff max|m_ij - conj(m_ji)| < tol. Throws std::invalid_argument for
/// non-square input.
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// exp(-i m dt). Hermitian m goes through an eigendecomposition (result
/// unitary to rounding); anything else uses scaling-and-squaring Pade.
ComplexMatrix evolution_operator(const ComplexMatrix& m, double dt);

/// Reference propagation: n_steps sequential exponentials of H sampled at
/// interval midpoints over [0, model.duration()]. Second order in the step.
ComplexVector evolve_piecewise_constant(const TimeDependentModel& model,
                                        const ComplexVector& psi0,
                                        long n_steps);

}  // namespace rydgate
