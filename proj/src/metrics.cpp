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

#include "rydgate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydgate {

namespace {

constexpr double kPhysicalitySlack = 1e-6;
constexpr int kMaxRefinementSweeps = 200;

double trace_overlap_abs2(const std::array<Complex, 4>& a, double theta1, double theta2) {
  const Complex s = -a[0] + a[1] * std::polar(1.0, theta2) + a[2] * std::polar(1.0, theta1) +
                    a[3] * std::polar(1.0, theta1 + theta2);
  return std::norm(s);
}

}  // namespace

double wrap_phase(double phase) {
  double w = std::remainder(phase, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

GateMatrix cz_gate() {
  GateMatrix cz = GateMatrix::Identity();
  cz(0, 0) = -1.0;
  return cz;
}

double fidelity(const GateMatrix& u, const GateMatrix& target) {
  const GateMatrix m = target.adjoint() * u;
  const double tr_mm = (m * m.adjoint()).trace().real();
  return (tr_mm + std::norm(m.trace())) / 20.0;
}

GateOutcome assemble_gate(Complex a00, Complex a01, Complex a10) {
  GateOutcome g;
  g.amplitudes = {a00, a01, a10, Complex(1.0, 0.0)};
  for (std::size_t i = 0; i < 4; ++i) {
    const double mag = std::abs(g.amplitudes[i]);
    if (!std::isfinite(mag) || mag > 1.0 + kPhysicalitySlack) {
      throw PhysicalityError("gate amplitude " + std::to_string(i) + " has magnitude " +
                             std::to_string(mag) + " > 1");
    }
    g.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = g.amplitudes[i];
    g.phases[i] = std::arg(g.amplitudes[i]);
    g.return_probabilities[i] = std::norm(g.amplitudes[i]);
  }
  g.fidelity = fidelity(g.u, cz_gate());
  g.gate_error = 1.0 - g.fidelity;
  return g;
}

PhaseCorrection local_phase_correction(const GateOutcome& g) {
  std::array<Complex, 4> a;
  for (int i = 0; i < 4; ++i) a[i] = g.u(i, i);

  // Closed form: equalize the |01>, |10>, |11> phases.
  double t1 = std::arg(a[1]) - std::arg(a[3]);
  double t2 = std::arg(a[2]) - std::arg(a[3]);
  double best = trace_overlap_abs2(a, t1, t2);
  if (trace_overlap_abs2(a, 0.0, 0.0) > best) {
    t1 = t2 = 0.0;
    best = trace_overlap_abs2(a, 0.0, 0.0);
  }

  // Each angle has an exact maximizer with the other held fixed, so the
  // sweep is monotone in |Tr M|.
  for (int sweep = 0; sweep < kMaxRefinementSweeps; ++sweep) {
    const double before = best;
    {
      const Complex fixed = -a[0] + a[2] * std::polar(1.0, t1);
      const Complex rotating = a[1] + a[3] * std::polar(1.0, t1);
      if (std::abs(fixed) > 0.0 && std::abs(rotating) > 0.0) {
        const double cand = std::arg(fixed) - std::arg(rotating);
        const double val = trace_overlap_abs2(a, t1, cand);
        if (val > best) {
          best = val;
          t2 = cand;
        }
      }
    }
    {
      const Complex fixed = -a[0] + a[1] * std::polar(1.0, t2);
      const Complex rotating = a[2] + a[3] * std::polar(1.0, t2);
      if (std::abs(fixed) > 0.0 && std::abs(rotating) > 0.0) {
        const double cand = std::arg(fixed) - std::arg(rotating);
        const double val = trace_overlap_abs2(a, cand, t2);
        if (val > best) {
          best = val;
          t1 = cand;
        }
      }
    }
    if (best - before <= 1e-16 * std::max(1.0, best)) break;
  }

  PhaseCorrection pc;
  pc.theta1 = wrap_phase(t1);
  pc.theta2 = wrap_phase(t2);
  GateMatrix local = GateMatrix::Zero();
  local(0, 0) = 1.0;
  local(1, 1) = std::polar(1.0, pc.theta2);
  local(2, 2) = std::polar(1.0, pc.theta1);
  local(3, 3) = std::polar(1.0, pc.theta1 + pc.theta2);
  GateMatrix v = local * g.u;
  const Complex overlap = (cz_gate().adjoint() * v).trace();
  pc.global_phase = std::abs(overlap) > 0.0 ? -std::arg(overlap) : 0.0;
  v *= std::polar(1.0, pc.global_phase);

  GateOutcome& c = pc.corrected;
  c.u = v;
  for (int i = 0; i < 4; ++i) {
    c.amplitudes[i] = v(i, i);
    c.phases[i] = std::arg(v(i, i));
    c.return_probabilities[i] = std::norm(v(i, i));
  }
  c.fidelity = fidelity(v, cz_gate());
  c.gate_error = 1.0 - c.fidelity;
  return pc;
}

double phase_constraint_residual(double phi00, double phi01, double phi10, double phi11) {
  // The +pi and -pi branches coincide modulo 2 pi.
  return std::abs(wrap_phase(phi11 - (kPi - phi00 + phi01 + phi10)));
}

std::string_view to_string(GateTarget target) {
  return target == GateTarget::strict_cz ? "strict_CZ" : "controlled_PHASE";
}

GateTarget gate_target_from_string(std::string_view name) {
  if (name == "strict_CZ") return GateTarget::strict_cz;
  if (name == "controlled_PHASE") return GateTarget::controlled_phase;
  throw std::invalid_argument("unknown gate target '" + std::string(name) + "'");
}

double score_gate(const GateOutcome& g, GateTarget target) {
  if (target == GateTarget::strict_cz) return g.gate_error;
  return local_phase_correction(g).corrected.gate_error;
}

GateOutcome apply_correction(const GateOutcome& g, const PhaseCorrection& correction) {
  GateOutcome c;
  const std::array<double, 4> local = {0.0, correction.theta2, correction.theta1,
                                       correction.theta1 + correction.theta2};
  c.u = GateMatrix::Zero();
  for (int i = 0; i < 4; ++i) {
    const Complex v = g.u(i, i) * std::polar(1.0, local[i] + correction.global_phase);
    c.u(i, i) = v;
    c.amplitudes[i] = v;
    c.phases[i] = std::arg(v);
    c.return_probabilities[i] = std::norm(v);
  }
  c.fidelity = fidelity(c.u, cz_gate());
  c.gate_error = 1.0 - c.fidelity;
  return c;
}

GateAmplitudes propagate_gate(const GateModels& models, const PropagatorOptions& options) {
  PropagatorOptions opts = options;
  opts.record_points = 0;
  GateAmplitudes out;
  const auto r00 = propagate(models.m00, ground_state(models.m00), opts);
  const auto r01 = propagate(models.m01, ground_state(models.m01), opts);
  const auto r10 = propagate(models.m10, ground_state(models.m10), opts);
  out.a00 = r00.final_state(0);
  out.a01 = r01.final_state(0);
  out.a10 = r10.final_state(0);
  out.max_norm_drift = std::max({r00.max_norm_drift, r01.max_norm_drift, r10.max_norm_drift});
  out.steps = r00.step_count + r01.step_count + r10.step_count;
  return out;
}

GateOutcome simulate_gate(const GateModels& models, const PropagatorOptions& options) {
  const GateAmplitudes a = propagate_gate(models, options);
  return assemble_gate(a.a00, a.a01, a.a10);
}

}  // namespace rydgate
