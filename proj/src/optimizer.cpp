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

#include "rydgate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rydgate/parallel.hpp"
#include "rydgate/random.hpp"

namespace rydgate {

namespace {

constexpr long kEvalsPerDimensionPerSlot = 1000;

void check_bounds(const std::vector<ParameterBound>& bounds) {
  for (const auto& b : bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
      throw std::invalid_argument("bound for '" + b.name + "' must be finite with lo < hi");
    }
  }
}

void project(std::vector<double>& x, const std::vector<ParameterBound>& bounds) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
}

struct SlotResult {
  NelderMeadResult best;
  long evals = 0;
  std::vector<double> trace;
  bool reached = false;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const std::vector<ParameterBound>& bounds,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || bounds.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");
  check_bounds(bounds);
  if (options.max_evals < 1) throw std::invalid_argument("nelder_mead: max_evals must be >= 1");

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  NelderMeadResult result;
  result.f = std::numeric_limits<double>::infinity();
  bool out_of_budget = false;
  auto eval = [&](std::vector<double>& x) {
    project(x, bounds);
    double v = f(x);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    ++result.evals;
    if (v < result.f) {
      result.f = v;
      result.x = x;
    }
    result.trace.push_back(result.f);
    if (result.evals >= options.max_evals) out_of_budget = true;
    return v;
  };
  auto target_hit = [&] { return options.stop_at && result.f <= *options.stop_at; };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  project(simplex[0], bounds);
  values[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < n && !out_of_budget && !target_hit(); ++i) {
    const double width = bounds[i].hi - bounds[i].lo;
    double step = options.initial_step * width;
    if (simplex[0][i] + step > bounds[i].hi) step = -step;
    simplex[i + 1][i] = simplex[0][i] + step;
    values[i + 1] = eval(simplex[i + 1]);
  }
  if (out_of_budget || target_hit()) return result;

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (!out_of_budget && !target_hit()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double width = bounds[i].hi - bounds[i].lo;
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[best][i]) / width);
      }
    }
    if (diameter < options.x_tol || values[worst] - values[best] < options.f_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / dn;
    }
    for (std::size_t i = 0; i < n; ++i) {
      xr[i] = centroid[i] + alpha * (centroid[i] - simplex[worst][i]);
    }
    const double fr = eval(xr);
    if (out_of_budget) break;

    if (fr < values[best]) {
      for (std::size_t i = 0; i < n; ++i) xe[i] = centroid[i] + beta * (xr[i] - centroid[i]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    for (std::size_t i = 0; i < n; ++i) {
      xc[i] = outside ? centroid[i] + gamma * (xr[i] - centroid[i])
                      : centroid[i] + gamma * (simplex[worst][i] - centroid[i]);
    }
    const double fc = eval(xc);
    if (outside ? fc <= fr : fc < values[worst]) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    if (out_of_budget) break;
    for (std::size_t k = 0; k <= n && !out_of_budget; ++k) {
      if (k == best) continue;
      for (std::size_t i = 0; i < n; ++i) {
        simplex[k][i] = simplex[best][i] + delta * (simplex[k][i] - simplex[best][i]);
      }
      values[k] = eval(simplex[k]);
    }
  }
  return result;
}

std::vector<std::string> parameter_names(WaveformFamily family) {
  switch (family) {
    case WaveformFamily::sinusoidal:
      return {"omega0", "omega1", "omega2", "delta0", "delta1", "delta2"};
    case WaveformFamily::bernstein:
      return {"beta1", "beta2", "beta3", "beta4", "delta0"};
    case WaveformFamily::sampled:
      break;
  }
  throw std::invalid_argument("sampled waveforms are not an optimization family");
}

std::vector<ParameterBound> default_bounds(WaveformFamily family) {
  if (family == WaveformFamily::bernstein) {
    return {{"beta1", 0.0, 20.0}, {"beta2", 0.0, 20.0}, {"beta3", 0.0, 20.0},
            {"beta4", 0.0, 20.0}, {"delta0", -10.0, 10.0}};
  }
  if (family == WaveformFamily::sinusoidal) {
    return {{"omega0", 0.0, 5.0},  {"omega1", -2.5, 2.5}, {"omega2", -2.5, 2.5},
            {"delta0", -5.0, 5.0}, {"delta1", -5.0, 5.0}, {"delta2", -5.0, 5.0}};
  }
  throw std::invalid_argument("sampled waveforms are not an optimization family");
}

Waveform waveform_from_parameters(WaveformFamily family, const std::vector<double>& p,
                                  double gate_time, bool angular, int bernstein_degree) {
  const std::size_t expected = parameter_names(family).size();
  if (p.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " parameters");
  }
  if (family == WaveformFamily::sinusoidal) {
    return Waveform(SinusoidalParams{p[0], p[1], p[2], p[3], p[4], p[5]}, gate_time, angular);
  }
  return Waveform(BernsteinParams{{p[0], p[1], p[2], p[3]}, bernstein_degree, p[4]}, gate_time,
                  angular);
}

double objective(const std::vector<double>& params, const OptimizationProblem& problem) {
  try {
    const Waveform w = waveform_from_parameters(problem.family, params, problem.gate_time,
                                                problem.angular, problem.bernstein_degree);
    const GateModels models = build_gate_models(w, w, problem.physics, ModelKind::symmetric);
    PropagatorOptions opts;
    opts.tol = problem.tol;
    const GateOutcome g = simulate_gate(models, opts);
    const double e = score_gate(g, problem.target);
    return std::isfinite(e) ? std::clamp(e, 0.0, 1.0) : 1.0;
  } catch (const std::exception&) {
    return 1.0;
  }
}

OptimizationReport optimize(const OptimizationProblem& problem) {
  const auto names = parameter_names(problem.family);
  std::vector<ParameterBound> bounds =
      problem.bounds.empty() ? default_bounds(problem.family) : problem.bounds;
  if (bounds.size() != names.size()) {
    throw std::invalid_argument("optimization bounds must cover every parameter");
  }
  check_bounds(bounds);
  if (problem.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (!problem.initial_guess.empty() && problem.initial_guess.size() != names.size()) {
    throw std::invalid_argument("initial guess has the wrong number of parameters");
  }

  const long dim = static_cast<long>(names.size());
  const long slots = problem.restarts > 0
                         ? problem.restarts
                         : std::max<long>(1, problem.budget / (kEvalsPerDimensionPerSlot * dim));
  const Objective f = [&](const std::vector<double>& x) { return objective(x, problem); };

  auto run_slot = [&](long slot) {
    const long slot_budget =
        problem.budget / slots + (slot < problem.budget % slots ? 1 : 0);
    SlotResult out;
    out.best.f = std::numeric_limits<double>::infinity();
    SplitMix64 rng(problem.seed, static_cast<std::uint64_t>(slot));
    bool first = true;
    while (out.evals < slot_budget) {
      std::vector<double> x0(names.size());
      for (std::size_t i = 0; i < x0.size(); ++i) {
        x0[i] = bounds[i].lo + rng.uniform() * (bounds[i].hi - bounds[i].lo);
      }
      if (first && slot == 0 && !problem.initial_guess.empty()) x0 = problem.initial_guess;
      first = false;
      NelderMeadOptions opts;
      opts.max_evals = slot_budget - out.evals;
      opts.stop_at = problem.stop_at_error;
      NelderMeadResult r = nelder_mead(f, x0, bounds, opts);
      for (double v : r.trace) out.trace.push_back(std::min(v, out.best.f));
      out.evals += r.evals;
      if (r.f < out.best.f) out.best = std::move(r);
      if (problem.stop_at_error && out.best.f <= *problem.stop_at_error) {
        out.reached = true;
        break;
      }
    }
    return out;
  };

  OptimizationReport report;
  report.names = names;
  report.best_error = std::numeric_limits<double>::infinity();
  const long wave = std::max(1, problem.workers);
  for (long start = 0; start < slots; start += wave) {
    const long count = std::min(wave, slots - start);
    std::vector<SlotResult> results(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), problem.workers,
                 [&](std::size_t k) { results[k] = run_slot(start + static_cast<long>(k)); });
    bool stop = false;
    for (auto& r : results) {
      const double before = report.best_error;
      for (double v : r.trace) report.trace.push_back(std::min(v, before));
      report.evaluations += r.evals;
      ++report.restarts_used;
      if (r.best.f < report.best_error) {
        report.best_error = r.best.f;
        report.best_parameters = r.best.x;
      }
      if (r.reached) {
        stop = true;
        break;
      }
    }
    if (stop) break;
  }
  for (std::size_t i = 1; i < report.trace.size(); ++i) {
    report.trace[i] = std::min(report.trace[i], report.trace[i - 1]);
  }
  report.reached_target =
      problem.stop_at_error.has_value() && report.best_error <= *problem.stop_at_error;
  report.budget_exhausted = !report.reached_target && report.evaluations >= problem.budget;
  return report;
}

}  // namespace rydgate
