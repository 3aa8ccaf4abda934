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

#include "rydgate/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rydgate {

namespace {

ComplexMatrix zeros(int n) { return ComplexMatrix::Zero(n, n); }

// Symmetric off-diagonal pair.
void couple(ComplexMatrix& m, int a, int b, double value) {
  m(a, b) += value;
  m(b, a) += value;
}

}  // namespace

std::string_view to_string(PpDiagonal convention) {
  return convention == PpDiagonal::literal ? "literal" : "rotating_frame";
}

PpDiagonal pp_diagonal_from_string(std::string_view name) {
  if (name == "literal") return PpDiagonal::literal;
  if (name == "rotating_frame") return PpDiagonal::rotating_frame;
  throw std::invalid_argument("unknown pp_diagonal_convention '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::symmetric ? "symmetric" : "full";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "symmetric") return ModelKind::symmetric;
  if (name == "full") return ModelKind::full;
  throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

PhysicsParams PhysicsParams::from_mhz(double blockade_mhz, double forster_defect_mhz,
                                      double decay_rate_per_us, PpDiagonal pp) {
  PhysicsParams p;
  p.blockade = kTwoPi * blockade_mhz;
  p.forster_defect = kTwoPi * forster_defect_mhz;
  p.decay_rate = decay_rate_per_us;
  p.pp_diagonal = pp;
  return p;
}

TimeDependentModel::TimeDependentModel(std::vector<std::string> basis_labels,
                                       std::vector<int> excitation_counts,
                                       std::vector<Waveform> drives,
                                       std::vector<Term> terms, double duration)
    : labels_(std::move(basis_labels)),
      excitations_(std::move(excitation_counts)),
      drives_(std::move(drives)) {
  const int n = dim();
  if (n == 0) throw std::invalid_argument("model has an empty basis");
  if (static_cast<int>(excitations_.size()) != n) {
    throw std::invalid_argument("excitation counts do not match basis size");
  }
  for (int c : excitations_) {
    if (c < 0 || c > 2) throw std::invalid_argument("excitation count outside {0,1,2}");
  }
  if (static_cast<int>(drives_.size()) > kMaxDrives) {
    throw std::invalid_argument("too many drives in one model");
  }
  if (drives_.empty()) {
    if (!(duration > 0.0)) throw std::invalid_argument("model without drives needs a duration");
    duration_ = duration;
  } else {
    duration_ = drives_.front().gate_time();
    for (const auto& d : drives_) {
      if (std::abs(d.gate_time() - duration_) > 1e-15 * duration_) {
        throw std::invalid_argument("drives disagree on gate time");
      }
    }
  }

  for (auto& term : terms) {
    if (term.matrix.rows() != n || term.matrix.cols() != n) {
      throw std::invalid_argument("term matrix dimension mismatch");
    }
    if (term.channel == Channel::unit) {
      term.drive = 0;
    } else if (term.drive < 0 || term.drive >= static_cast<int>(drives_.size())) {
      throw std::invalid_argument("term references a missing drive");
    }
    auto same = [&](const Term& t) {
      return t.channel == term.channel && t.drive == term.drive;
    };
    if (auto it = std::find_if(terms_.begin(), terms_.end(), same); it != terms_.end()) {
      it->matrix += term.matrix;
    } else {
      terms_.push_back(std::move(term));
    }
  }

  for (int k = 0; k < static_cast<int>(terms_.size()); ++k) {
    const ComplexMatrix& m = terms_[k].matrix;
    // Drive coefficients are real, so each term must be Hermitian on its own
    // for H(t) to be Hermitian.
    if (!is_hermitian(m)) hermitian_ = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (m(i, j) != Complex(0.0, 0.0)) entries_.push_back({k, i, j, m(i, j)});
      }
    }
  }
}

void TimeDependentModel::evaluate_coefficients(double t,
                                               std::array<double, kMaxTerms>& coeffs) const {
  std::array<PulseSample, kMaxDrives> samples;
  for (std::size_t d = 0; d < drives_.size(); ++d) samples[d] = drives_[d](t);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const Term& term = terms_[k];
    switch (term.channel) {
      case Channel::unit: coeffs[k] = 1.0; break;
      case Channel::omega: coeffs[k] = samples[term.drive].omega; break;
      case Channel::delta: coeffs[k] = samples[term.drive].delta; break;
    }
  }
}

ComplexMatrix TimeDependentModel::hamiltonian(double t) const {
  std::array<double, kMaxTerms> coeffs{};
  evaluate_coefficients(t, coeffs);
  ComplexMatrix h = zeros(dim());
  for (std::size_t k = 0; k < terms_.size(); ++k) h += coeffs[k] * terms_[k].matrix;
  return h;
}

void TimeDependentModel::apply(double t, const ComplexVector& psi, ComplexVector& out) const {
  std::array<double, kMaxTerms> coeffs{};
  evaluate_coefficients(t, coeffs);
  out.setZero();
  for (const Entry& e : entries_) {
    out(e.row) += (coeffs[e.term] * e.value) * psi(e.col);
  }
}

double TimeDependentModel::spectral_bound(int grid_points) const {
  double bound = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double t = duration_ * static_cast<double>(k) / std::max(1, grid_points - 1);
    const ComplexMatrix h = hamiltonian(t);
    bound = std::max(bound, h.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return bound;
}

TimeDependentModel TimeDependentModel::with_constant_term(const ComplexMatrix& matrix) const {
  std::vector<Term> terms = terms_;
  terms.push_back({Channel::unit, 0, matrix});
  return TimeDependentModel(labels_, excitations_, drives_, std::move(terms), duration_);
}

TimeDependentModel build_two_level(const Waveform& w, double enhancement) {
  ComplexMatrix coupling = zeros(2);
  couple(coupling, 0, 1, 0.5 * enhancement);
  ComplexMatrix detuning = zeros(2);
  detuning(1, 1) = 1.0;
  return TimeDependentModel({"g", "r"}, {0, 1}, {w},
                            {{Channel::omega, 0, coupling}, {Channel::delta, 0, detuning}});
}

TimeDependentModel build_symmetric_blockade(const Waveform& w, const PhysicsParams& p) {
  enum { k00, kR, kRR, kPP };
  const double c = std::numbers::sqrt2 / 2.0;
  ComplexMatrix coupling = zeros(4);
  couple(coupling, k00, kR, c);
  couple(coupling, kR, kRR, c);

  ComplexMatrix detuning = zeros(4);
  detuning(kR, kR) = 1.0;
  detuning(kRR, kRR) = 2.0;
  if (p.pp_diagonal == PpDiagonal::rotating_frame) detuning(kPP, kPP) = 2.0;

  ComplexMatrix forster = zeros(4);
  couple(forster, kRR, kPP, p.blockade);
  forster(kPP, kPP) = p.forster_defect;

  return TimeDependentModel({"00", "R", "rr", "pp"}, {0, 1, 2, 2}, {w},
                            {{Channel::omega, 0, coupling},
                             {Channel::delta, 0, detuning},
                             {Channel::unit, 0, forster}});
}

TimeDependentModel build_full_two_atom(const Waveform& control, const Waveform& target,
                                       const PhysicsParams& p) {
  enum { k00, kR0, k0R, kRR, kPP };
  ComplexMatrix control_coupling = zeros(5);
  couple(control_coupling, k00, kR0, 0.5);
  couple(control_coupling, k0R, kRR, 0.5);
  ComplexMatrix target_coupling = zeros(5);
  couple(target_coupling, k00, k0R, 0.5);
  couple(target_coupling, kR0, kRR, 0.5);

  ComplexMatrix control_detuning = zeros(5);
  control_detuning(kR0, kR0) = 1.0;
  control_detuning(kRR, kRR) = 1.0;
  ComplexMatrix target_detuning = zeros(5);
  target_detuning(k0R, k0R) = 1.0;
  target_detuning(kRR, kRR) = 1.0;
  if (p.pp_diagonal == PpDiagonal::rotating_frame) {
    control_detuning(kPP, kPP) = 1.0;
    target_detuning(kPP, kPP) = 1.0;
  }

  ComplexMatrix forster = zeros(5);
  couple(forster, kRR, kPP, p.blockade);
  forster(kPP, kPP) = p.forster_defect;

  return TimeDependentModel({"00", "r0", "0r", "rr", "pp"}, {0, 1, 1, 2, 2},
                            {control, target},
                            {{Channel::omega, 0, control_coupling},
                             {Channel::omega, 1, target_coupling},
                             {Channel::delta, 0, control_detuning},
                             {Channel::delta, 1, target_detuning},
                             {Channel::unit, 0, forster}});
}

TimeDependentModel apply_decay(const TimeDependentModel& m, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("decay rate must be finite and >= 0");
  }
  if (gamma == 0.0) return m;
  ComplexMatrix loss = zeros(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    loss(i, i) = Complex(0.0, -0.5 * gamma * m.excitation_counts()[i]);
  }
  return m.with_constant_term(loss);
}

TimeDependentModel direct_sum(const std::vector<TimeDependentModel>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("direct_sum of nothing");
  const double duration = blocks.front().duration();
  int n = 0;
  for (const auto& b : blocks) {
    if (std::abs(b.duration() - duration) > 1e-15 * duration) {
      throw std::invalid_argument("direct_sum: blocks disagree on duration");
    }
    n += b.dim();
  }
  std::vector<std::string> labels;
  std::vector<int> counts;
  std::vector<Waveform> drives;
  std::vector<Term> terms;
  int offset = 0;
  for (const auto& b : blocks) {
    const int drive_offset = static_cast<int>(drives.size());
    labels.insert(labels.end(), b.basis_labels().begin(), b.basis_labels().end());
    counts.insert(counts.end(), b.excitation_counts().begin(), b.excitation_counts().end());
    drives.insert(drives.end(), b.drives().begin(), b.drives().end());
    for (const Term& t : b.terms()) {
      ComplexMatrix m = zeros(n);
      m.block(offset, offset, b.dim(), b.dim()) = t.matrix;
      terms.push_back({t.channel, t.channel == Channel::unit ? 0 : t.drive + drive_offset,
                       std::move(m)});
    }
    offset += b.dim();
  }
  return TimeDependentModel(std::move(labels), std::move(counts), std::move(drives),
                            std::move(terms), duration);
}

TimeDependentModel build_idle(double duration, std::string label) {
  return TimeDependentModel({std::move(label)}, {0}, {}, {}, duration);
}

GateModels build_gate_models(const Waveform& control, const Waveform& target,
                             const PhysicsParams& p, ModelKind kind) {
  TimeDependentModel m00 = kind == ModelKind::symmetric
                               ? build_symmetric_blockade(control, p)
                               : build_full_two_atom(control, target, p);
  return GateModels{std::move(m00), build_two_level(control), build_two_level(target)};
}

GateModels apply_decay(const GateModels& models, double gamma) {
  return GateModels{apply_decay(models.m00, gamma), apply_decay(models.m01, gamma),
                    apply_decay(models.m10, gamma)};
}

ComplexVector ground_state(const TimeDependentModel& m) {
  ComplexVector psi = ComplexVector::Zero(m.dim());
  psi(0) = 1.0;
  return psi;
}

}  // namespace rydgate
