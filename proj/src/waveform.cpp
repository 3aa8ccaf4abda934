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

#include "rydgate/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rydgate/linalg.hpp"

namespace rydgate {

namespace {

constexpr int kMinSamples = 16;
constexpr int kPositivityGrid = 10000;
constexpr int kMaxDegree = 64;

// Second derivatives of the natural cubic spline through equally spaced
// values (Thomas algorithm on the standard tridiagonal system).
std::vector<double> natural_spline_moments(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  const std::size_t k = n - 2;
  std::vector<double> c(k, 0.0), d(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double rhs = 6.0 * (y[i + 2] - 2.0 * y[i + 1] + y[i]) / (h * h);
    const double denom = 4.0 - (i > 0 ? c[i - 1] : 0.0);
    c[i] = 1.0 / denom;
    d[i] = (rhs - (i > 0 ? d[i - 1] : 0.0)) / denom;
  }
  m[k] = d[k - 1];
  for (std::size_t i = k - 1; i-- > 0;) m[i + 1] = d[i] - c[i] * m[i + 2];
  return m;
}

double spline_eval(const std::vector<double>& y, const std::vector<double>& m,
                   double h, double t) {
  const std::size_t last = y.size() - 1;
  std::size_t i = static_cast<std::size_t>(std::floor(t / h));
  i = std::min(i, last - 1);
  const double a = (static_cast<double>(i + 1) * h - t) / h;
  const double b = 1.0 - a;
  return a * y[i] + b * y[i + 1] +
         ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
}

}  // namespace

struct Waveform::Spline {
  double h = 0.0;
  std::vector<double> omega_moments;
  std::vector<double> delta_moments;
};

std::string_view to_string(WaveformFamily family) {
  switch (family) {
    case WaveformFamily::sinusoidal: return "sinusoidal";
    case WaveformFamily::bernstein: return "bernstein";
    case WaveformFamily::sampled: return "sampled";
  }
  return "unknown";
}

WaveformFamily waveform_family_from_string(std::string_view name) {
  if (name == "sinusoidal") return WaveformFamily::sinusoidal;
  if (name == "bernstein") return WaveformFamily::bernstein;
  if (name == "sampled") return WaveformFamily::sampled;
  throw std::invalid_argument("unknown waveform family '" + std::string(name) + "'");
}

double bernstein_basis(int v, int n, double x) {
  if (n < 0 || v < 0 || v > n) {
    throw std::out_of_range("bernstein_basis: index " + std::to_string(v) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::out_of_range("bernstein_basis: x outside [0, 1]");
  }
  double binom = 1.0;
  for (int k = 1; k <= v; ++k) {
    binom = binom * static_cast<double>(n - v + k) / static_cast<double>(k);
  }
  return binom * std::pow(x, v) * std::pow(1.0 - x, n - v);
}

Waveform::Waveform(Shape shape, double gate_time_us, bool angular)
    : shape_(std::move(shape)), gate_time_(gate_time_us), angular_(angular) {
  if (!(gate_time_ > 0.0) || !std::isfinite(gate_time_)) {
    throw std::invalid_argument("waveform gate time must be positive");
  }
  if (const auto* p = std::get_if<BernsteinParams>(&shape_)) {
    if (p->degree < 8 || p->degree % 2 != 0 || p->degree > kMaxDegree) {
      throw std::invalid_argument("bernstein degree must be even and in [8, 64]");
    }
  } else if (const auto* s = std::get_if<SampledParams>(&shape_)) {
    if (s->omega.size() != s->delta.size()) {
      throw std::invalid_argument("sampled waveform: omega/delta length mismatch");
    }
    if (s->omega.size() < static_cast<std::size_t>(kMinSamples)) {
      throw std::invalid_argument("sampled waveform needs at least 16 samples");
    }
    for (std::size_t i = 0; i < s->omega.size(); ++i) {
      if (!std::isfinite(s->omega[i]) || !std::isfinite(s->delta[i])) {
        throw std::invalid_argument("sampled waveform contains non-finite values");
      }
    }
    auto spline = std::make_shared<Spline>();
    spline->h = gate_time_ / static_cast<double>(s->omega.size() - 1);
    spline->omega_moments = natural_spline_moments(s->omega, spline->h);
    spline->delta_moments = natural_spline_moments(s->delta, spline->h);
    spline_ = std::move(spline);
  } else if (std::holds_alternative<SinusoidalParams>(shape_)) {
    for (int k = 0; k <= kPositivityGrid; ++k) {
      const double t = gate_time_ * static_cast<double>(k) / kPositivityGrid;
      if (raw(t).omega < 0.0) {
        throw std::invalid_argument("sinusoidal waveform has negative amplitude at t=" +
                                    std::to_string(t));
      }
    }
  }
}

WaveformFamily Waveform::family() const {
  return static_cast<WaveformFamily>(shape_.index());
}

PulseSample Waveform::raw(double t) const {
  const double x = t / gate_time_;
  PulseSample out;
  if (const auto* p = std::get_if<SinusoidalParams>(&shape_)) {
    const double c = std::cos(kTwoPi * x);
    const double s = std::sin(kPi * x);
    out.omega = p->omega0 + p->omega1 * c + p->omega2 * s;
    out.delta = p->delta0 + p->delta1 * c + p->delta2 * s;
  } else if (const auto* p = std::get_if<BernsteinParams>(&shape_)) {
    const int n = p->degree;
    const double xc = std::clamp(x, 0.0, 1.0);
    std::array<double, kMaxDegree + 1> up{}, down{};
    up[0] = down[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
      up[k] = up[k - 1] * xc;
      down[k] = down[k - 1] * (1.0 - xc);
    }
    // Literal pairing: for n = 8 the v = 4 term contributes b_{4,8} twice.
    double binom = 1.0;
    for (int v = 1; v <= 4; ++v) {
      binom = binom * static_cast<double>(n - v + 1) / static_cast<double>(v);
      const double pair = binom * (up[v] * down[n - v] + up[n - v] * down[v]);
      out.omega += p->beta[v - 1] * pair;
    }
    out.delta = p->delta0;
  } else {
    const auto& s = std::get<SampledParams>(shape_);
    const double tc = std::clamp(t, 0.0, gate_time_);
    out.omega = spline_eval(s.omega, spline_->omega_moments, spline_->h, tc);
    out.delta = spline_eval(s.delta, spline_->delta_moments, spline_->h, tc);
  }
  return out;
}

PulseSample Waveform::operator()(double t) const {
  const double slack = 1e-12 * gate_time_;
  if (!(t >= -slack && t <= gate_time_ + slack)) {
    throw std::out_of_range("waveform evaluated at t=" + std::to_string(t) +
                            " outside [0, " + std::to_string(gate_time_) + "]");
  }
  PulseSample s = raw(t);
  if (angular_) {
    s.omega *= kTwoPi;
    s.delta *= kTwoPi;
  }
  s.omega *= amplitude_scale_;
  s.delta += detuning_offset_;
  return s;
}

Waveform Waveform::with_amplitude_scale(double factor) const {
  Waveform w = *this;
  w.amplitude_scale_ *= factor;
  return w;
}

Waveform Waveform::with_detuning_offset(double offset_rad_per_us) const {
  Waveform w = *this;
  w.detuning_offset_ += offset_rad_per_us;
  return w;
}

Waveform Waveform::with_angular(bool angular) const {
  Waveform w = *this;
  w.angular_ = angular;
  return w;
}

WaveformReport validate(const Waveform& w, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("validate: need >= 2 grid points");
  const double tg = w.gate_time();
  WaveformReport r;
  const PulseSample first = w(0.0);
  const PulseSample last = w(tg);
  r.omega_start = first.omega;
  r.omega_end = last.omega;
  r.delta_start = first.delta;
  r.delta_end = last.delta;
  r.omega_min = std::numeric_limits<double>::infinity();
  r.omega_max = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double t = tg * static_cast<double>(k) / (grid_points - 1);
    const PulseSample a = w(t);
    const PulseSample b = w(tg - t);
    r.symmetry_omega = std::max(r.symmetry_omega, std::abs(a.omega - b.omega));
    r.symmetry_delta = std::max(r.symmetry_delta, std::abs(a.delta - b.delta));
    r.omega_min = std::min(r.omega_min, a.omega);
    r.omega_max = std::max(r.omega_max, a.omega);
  }
  return r;
}

}  // namespace rydgate
