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

#include "rydgate/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "rydgate/model.hpp"

namespace rydgate {

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("is_hermitian: matrix is " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", not square");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) >= tol) return false;
    }
  }
  return true;
}

ComplexMatrix evolution_operator(const ComplexMatrix& m, double dt) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("evolution_operator: non-square matrix");
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("evolution_operator: dt must be finite and >= 0");
  }
  if (!m.allFinite()) throw NumericError("evolution_operator: non-finite input");

  ComplexMatrix u;
  if (is_hermitian(m)) {
    // Symmetrize so the solver sees an exactly Hermitian matrix.
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
      throw NumericError("evolution_operator: eigendecomposition failed");
    }
    const Eigen::VectorXd& energies = solver.eigenvalues();
    ComplexVector phases(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
      phases(k) = std::exp(-kI * energies(k) * dt);
    }
    const ComplexMatrix& v = solver.eigenvectors();
    u = v * phases.asDiagonal() * v.adjoint();
  } else {
    const ComplexMatrix a = (-kI * dt) * m;
    u = a.exp();
  }
  if (!u.allFinite()) throw NumericError("evolution_operator: overflow");
  return u;
}

ComplexVector evolve_piecewise_constant(const TimeDependentModel& model,
                                        const ComplexVector& psi0,
                                        long n_steps) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (psi0.size() != model.dim()) {
    throw std::invalid_argument("evolve_piecewise_constant: dimension mismatch");
  }
  const double dt = model.duration() / static_cast<double>(n_steps);
  ComplexVector psi = psi0;
  ComplexVector next(psi.size());
  for (long k = 0; k < n_steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    next.noalias() = evolution_operator(model.hamiltonian(t_mid), dt) * psi;
    psi.swap(next);
  }
  return psi;
}

}  // namespace rydgate
