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
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rydgate {

/// Rabi frequency and detuning at one instant, both in rad/us.
struct PulseSample {
  double omega = 0.0;
  double delta = 0.0;
};

/// Omega(t) = omega0 + omega1 cos(2 pi t/Tg) + omega2 sin(pi t/Tg), and the
/// same form for Delta(t). Coefficients in MHz.
struct SinusoidalParams {
  double omega0 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

/// Amplitude-only pulse built from mirrored Bernstein basis pairs,
/// Omega(t) = sum_{v=1..4} beta_v (b_{v,n}(t/Tg) + b_{n-v,n}(t/Tg)), with a
/// constant detuning. Coefficients in MHz.
struct BernsteinParams {
  std::array<double, 4> beta{};
  int degree = 8;
  double delta0 = 0.0;
};

/// Uniformly spaced samples covering [0, Tg] inclusive, interpolated with a
/// natural cubic spline. Values in MHz (same convention as the other
/// families).
struct SampledParams {
  std::vector<double> omega;
  std::vector<double> delta;
};

enum class WaveformFamily { sinusoidal, bernstein, sampled };

std::string_view to_string(WaveformFamily family);
WaveformFamily waveform_family_from_string(std::string_view name);

/// C(n, v) x^v (1-x)^(n-v). Throws std::out_of_range for v outside [0, n]
/// or x outside [0, 1].
double bernstein_basis(int v, int n, double x);

/// A pulse shape over [0, Tg]. When `angular` is set the stored MHz
/// coefficients are multiplied by 2 pi on evaluation, otherwise they are
/// used as rad/us directly. Immutable.
class Waveform {
 public:
  using Shape = std::variant<SinusoidalParams, BernsteinParams, SampledParams>;

  Waveform(Shape shape, double gate_time_us, bool angular = true);

  /// Throws std::out_of_range for t outside [0, Tg] (with a 1e-12 relative
  /// slack for accumulated rounding in time grids).
  PulseSample operator()(double t) const;
  PulseSample eval(double t) const { return (*this)(t); }

  double gate_time() const { return gate_time_; }
  bool angular() const { return angular_; }
  WaveformFamily family() const;
  const Shape& shape() const { return shape_; }

  /// Perturbed copies used for robustness sweeps. Scale multiplies Omega(t);
  /// offset (rad/us) is added to Delta(t). Both compose.
  Waveform with_amplitude_scale(double factor) const;
  Waveform with_detuning_offset(double offset_rad_per_us) const;
  Waveform with_angular(bool angular) const;
  double amplitude_scale() const { return amplitude_scale_; }
  double detuning_offset() const { return detuning_offset_; }

 private:
  struct Spline;

  PulseSample raw(double t) const;

  Shape shape_;
  double gate_time_;
  bool angular_;
  double amplitude_scale_ = 1.0;
  double detuning_offset_ = 0.0;
  std::shared_ptr<const Spline> spline_;
};

struct WaveformReport {
  double symmetry_omega = 0.0;  // max |Omega(t) - Omega(Tg - t)|
  double symmetry_delta = 0.0;
  double omega_start = 0.0;
  double omega_end = 0.0;
  double delta_start = 0.0;
  double delta_end = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

/// Grid scan of time symmetry, endpoints and amplitude range, in rad/us.
WaveformReport validate(const Waveform& w, int grid_points = 10001);

}  // namespace rydgate
