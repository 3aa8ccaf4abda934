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

#include "rydgate/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rydgate {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Step-size controller (PI variant).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinShrink = 0.2;
constexpr double kMaxGrow = 10.0;

constexpr double kUndefinedPopulation = 1e-12;

}  // namespace

StepUnderflow::StepUnderflow(double time, const std::string& what)
    : NumericError(what), time_(time) {}

void DenseSegment::eval(double t, ComplexVector& out) const {
  const double s = h > 0.0 ? (t - t0) / h : 0.0;
  const double s1 = 1.0 - s;
  out = coeffs[0] + s * (coeffs[1] + s1 * (coeffs[2] + s * (coeffs[3] + s1 * coeffs[4])));
}

ComplexVector DenseSegment::eval(double t) const {
  ComplexVector out(coeffs[0].size());
  eval(t, out);
  return out;
}

DormandPrince::DormandPrince(const TimeDependentModel& model, const ComplexVector& psi0,
                             double tol)
    : model_(model), tol_(tol), end_(model.duration()), y_(psi0) {
  if (psi0.size() != model.dim()) {
    throw std::invalid_argument("initial state dimension " + std::to_string(psi0.size()) +
                                " does not match model dimension " +
                                std::to_string(model.dim()));
  }
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw std::invalid_argument("tolerance must lie in [1e-13, 1e-6]");
  }
  const Eigen::Index n = psi0.size();
  y_new_.resize(n);
  tmp_.resize(n);
  err_.resize(n);
  for (auto& k : k_) k.resize(n);
  for (auto& c : segment_.coeffs) c = ComplexVector::Zero(n);

  // The fastest scale (the Forster coupling B in the |00> manifold) sets
  // the first step; the controller takes over from there.
  const double bound = model.spectral_bound();
  h_max_ = end_ / 8.0;
  h_ = bound > 0.0 ? std::min(0.02 / bound, end_ / 100.0) : end_ / 100.0;
  rhs(0.0, y_, k_[0]);
}

void DormandPrince::rhs(double t, const ComplexVector& y, ComplexVector& out) const {
  model_.apply(std::min(t, end_), y, out);
  out *= -kI;
}

double DormandPrince::error_norm(const ComplexVector& err, const ComplexVector& y0,
                                 const ComplexVector& y1) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = tol_ + tol_ * std::max(std::abs(y0(i)), std::abs(y1(i)));
    sum += std::norm(err(i)) / (scale * scale);
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

void DormandPrince::advance() {
  if (done()) return;
  auto& [k1, k2, k3, k4, k5, k6, k7] = k_;
  for (;;) {
    double h = std::min(h_, h_max_);
    bool last = false;
    if (t_ + h >= end_ || t_ + 1.0001 * h >= end_) {
      h = end_ - t_;
      last = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))) {
      throw StepUnderflow(t_, "step size underflow at t=" + std::to_string(t_) + " us");
    }

    tmp_ = y_ + h * a21 * k1;
    rhs(t_ + c2 * h, tmp_, k2);
    tmp_ = y_ + h * (a31 * k1 + a32 * k2);
    rhs(t_ + c3 * h, tmp_, k3);
    tmp_ = y_ + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t_ + c4 * h, tmp_, k4);
    tmp_ = y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t_ + c5 * h, tmp_, k5);
    tmp_ = y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t_ + h, tmp_, k6);
    y_new_ = y_ + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double t_new = last ? end_ : t_ + h;
    rhs(t_new, y_new_, k7);
    err_ = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = error_norm(err_, y_, y_new_);
    if (!std::isfinite(err) || !y_new_.allFinite()) {
      throw NumericError("non-finite state during propagation at t=" + std::to_string(t_));
    }
    const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(fac_old_, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxGrow, 1.0 / kMinShrink);
      double h_next = h / fac;
      if (last_rejected_) h_next = std::min(h_next, h);
      fac_old_ = std::max(err, 1e-4);

      segment_.t0 = t_;
      segment_.h = h;
      segment_.coeffs[0] = y_;
      segment_.coeffs[1] = y_new_ - y_;
      segment_.coeffs[2] = h * k1 - segment_.coeffs[1];
      segment_.coeffs[3] = segment_.coeffs[1] - h * k7 - segment_.coeffs[2];
      segment_.coeffs[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      y_.swap(y_new_);
      k1.swap(k7);
      t_ = t_new;
      if (!last) h_ = h_next;
      last_rejected_ = false;
      ++accepted_;
      return;
    }
    h_ = h / std::min(1.0 / kMinShrink, fac11 / kSafety);
    last_rejected_ = true;
    ++rejected_;
  }
}

PropagationResult propagate(const TimeDependentModel& model, const ComplexVector& psi0,
                            const PropagatorOptions& options) {
  if (options.record_points == 1 || options.record_points < 0) {
    throw std::invalid_argument("record_points must be 0 or >= 2");
  }
  DormandPrince stepper(model, psi0, options.tol);
  PropagationResult result;
  const double initial_norm = psi0.squaredNorm();
  const double end = model.duration();
  const int n_rec = options.record_points;

  auto record = [&](double t, const ComplexVector& psi) {
    StateSample s;
    s.t = t;
    s.amplitudes = psi;
    s.populations.resize(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) s.populations[i] = std::norm(psi(i));
    result.samples.push_back(std::move(s));
  };
  auto grid_time = [&](int k) {
    return k == n_rec - 1 ? end : end * static_cast<double>(k) / (n_rec - 1);
  };

  int next_sample = 0;
  if (n_rec > 0) {
    result.samples.reserve(n_rec);
    record(0.0, psi0);
    next_sample = 1;
  }
  ComplexVector buffer(psi0.size());
  while (!stepper.done()) {
    stepper.advance();
    const double drift = std::abs(stepper.state().squaredNorm() - initial_norm);
    result.max_norm_drift = std::max(result.max_norm_drift, drift);
    while (n_rec > 0 && next_sample < n_rec && grid_time(next_sample) <= stepper.time()) {
      const double t = grid_time(next_sample);
      if (t == stepper.time()) {
        record(t, stepper.state());
      } else {
        stepper.last_segment().eval(t, buffer);
        record(t, buffer);
      }
      ++next_sample;
    }
  }
  result.final_state = stepper.state();
  result.step_count = stepper.accepted_steps();
  result.rejected_steps = stepper.rejected_steps();
  return result;
}

PhaseTrace phase_trace(const std::vector<StateSample>& samples) {
  PhaseTrace trace;
  if (samples.empty()) return trace;
  const std::size_t n_states = samples.front().populations.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  trace.t.reserve(samples.size());
  trace.phase.assign(n_states, std::vector<double>(samples.size(), nan));
  for (const auto& s : samples) trace.t.push_back(s.t);
  for (std::size_t i = 0; i < n_states; ++i) {
    bool have_previous = false;
    double previous = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (samples[k].populations[i] < kUndefinedPopulation) continue;
      double p = std::arg(samples[k].amplitudes(static_cast<Eigen::Index>(i)));
      if (have_previous) p += kTwoPi * std::round((previous - p) / kTwoPi);
      trace.phase[i][k] = p;
      previous = p;
      have_previous = true;
    }
  }
  return trace;
}

}  // namespace rydgate
