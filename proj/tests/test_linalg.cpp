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
#include "rydgate/linalg.hpp"
#include "rydgate/model.hpp"
#include "test_support.hpp"

using namespace rydgate;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, int n, bool hermitian) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  if (hermitian) m = 0.5 * (m + m.adjoint()).eval();
  return m;
}

// Truncated Taylor series of exp(-i m dt), an independent reference for
// small norms.
ComplexMatrix taylor_exp(const ComplexMatrix& m, double dt) {
  const ComplexMatrix a = -kI * dt * m;
  ComplexMatrix term = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("is_hermitian classifies matrices") {
  CHECK(is_hermitian(pauli_x()));
  ComplexMatrix y(2, 2);
  y << 0, -kI, kI, 0;
  CHECK(is_hermitian(y));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(1, 1) = Complex(0.0, -0.5);
  CHECK_FALSE(is_hermitian(d));
  CHECK_THROWS_AS(is_hermitian(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("exponential of a Pauli matrix is a rotation") {
  for (double theta : {0.0, 0.3, kPi / 2, 2.0, 7.5}) {
    const ComplexMatrix u = evolution_operator(pauli_x(), theta);
    const ComplexMatrix expected =
        std::cos(theta) * ComplexMatrix::Identity(2, 2) - kI * std::sin(theta) * pauli_x();
    CHECK((u - expected).norm() < 1e-14);
  }
}

TEST_CASE("Hermitian exponentials are unitary and match the series") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const ComplexMatrix h = random_matrix(rng, n, true);
    const ComplexMatrix u = evolution_operator(h, 0.37);
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm() < 1e-13);
    CHECK((u - taylor_exp(h, 0.37)).norm() < 1e-12);
  }
}

TEST_CASE("non-Hermitian exponentials match the series") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_matrix(rng, 3, false);
    CHECK((evolution_operator(m, 0.21) - taylor_exp(m, 0.21)).norm() < 1e-12);
  }
  ComplexMatrix decay = ComplexMatrix::Zero(2, 2);
  decay(1, 1) = Complex(0.0, -0.5 * 0.8);
  const ComplexMatrix u = evolution_operator(decay, 2.0);
  CHECK(std::abs(u(1, 1) - std::exp(-0.8)) < 1e-15);
  CHECK(std::abs(u(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("piecewise-constant evolution is exact for a static Hamiltonian") {
  const TimeDependentModel m = build_two_level(testing::constant_pulse(0.7, 0.3));
  ComplexVector psi0 = ComplexVector::Zero(2);
  psi0(0) = 1.0;
  const ComplexVector exact = evolution_operator(m.hamiltonian(0.5), 1.0) * psi0;
  CHECK((evolve_piecewise_constant(m, psi0, 7) - exact).norm() < 1e-13);
}

TEST_CASE("piecewise-constant evolution converges at second order") {
  const TimeDependentModel m = build_two_level(testing::sinusoidal_reference());
  ComplexVector psi0 = ComplexVector::Zero(2);
  psi0(0) = 1.0;
  const ComplexVector ref = evolve_piecewise_constant(m, psi0, 20000);
  const double e1 = (evolve_piecewise_constant(m, psi0, 100) - ref).norm();
  const double e2 = (evolve_piecewise_constant(m, psi0, 200) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}
