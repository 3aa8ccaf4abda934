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

#include "rydgate/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "rydgate/config.hpp"
#include "rydgate/io.hpp"
#include "rydgate/mcwf.hpp"
#include "rydgate/metrics.hpp"
#include "rydgate/optimizer.hpp"
#include "rydgate/propagator.hpp"
#include "rydgate/sweep.hpp"

namespace rydgate::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kLockName = "convention.lock";
constexpr double kCalibrationFloor = 0.99;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

// Files are collected first and written together once a command succeeds.
using Artifacts = std::map<std::string, std::string>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifacts(const fs::path& dir, const Artifacts& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot write " + tmp.string());
      os << content;
    }
    fs::rename(tmp, dir / name);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int resolve_workers(const Options& opt) {
  if (opt.workers) {
    if (*opt.workers < 1) throw ConfigError("--workers must be >= 1");
    return *opt.workers;
  }
  if (const char* env = std::getenv("RPL_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw ConfigError("RPL_WORKERS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<json> read_lock(const fs::path& dir) {
  const fs::path p = dir / kLockName;
  if (!fs::exists(p)) return std::nullopt;
  try {
    return json::parse(read_file(p.string()));
  } catch (const json::exception& e) {
    throw ConfigError(p.string() + ": unreadable lock file (" + e.what() + ")");
  }
}

// Explicit config value, then the lock entry for the family, then 2 pi.
Waveform resolve_waveform(RunConfig& cfg, const fs::path& out_dir) {
  if (!cfg.waveform) throw ConfigError("/waveform: required field is missing");
  WaveformSpec& spec = *cfg.waveform;
  if (!spec.angular) {
    bool angular = true;
    if (auto lock = read_lock(out_dir)) {
      const std::string family(to_string(spec.family()));
      const json& entries = (*lock)["entries"];
      if (entries.is_object() && entries.contains(family)) {
        angular = entries[family].value("angular", true);
      }
    }
    spec.angular = angular;
  }
  return spec.build(true);
}

GateModels gate_models(const GateSetup& s) {
  return build_gate_models(s.waveform, s.waveform, s.physics(), s.model);
}

double target_fidelity(const GateOutcome& g, GateTarget target) {
  return target == GateTarget::strict_cz ? g.fidelity
                                         : local_phase_correction(g).corrected.fidelity;
}

int cmd_simulate(RunConfig& cfg, const Options& opt, std::ostream& out) {
  const Waveform w = resolve_waveform(cfg, opt.out_dir);
  const GateSetup setup = cfg.setup(w);
  GateModels models = gate_models(setup);
  if (setup.gamma_per_us > 0.0) models = apply_decay(models, setup.gamma_per_us);

  PropagatorOptions popts;
  popts.tol = setup.tol;
  popts.record_points = cfg.simulation.record_points;
  const std::array<const TimeDependentModel*, 3> manifolds = {&models.m00, &models.m01,
                                                              &models.m10};
  const std::array<const char*, 3> names = {"00", "01", "10"};
  std::array<PropagationResult, 3> results;
  double drift = 0.0;
  long steps = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    results[k] = propagate(*manifolds[k], ground_state(*manifolds[k]), popts);
    drift = std::max(drift, results[k].max_norm_drift);
    steps += results[k].step_count;
  }
  const GateOutcome g = assemble_gate(results[0].final_state(0), results[1].final_state(0),
                                      results[2].final_state(0));
  const PhaseCorrection pc = local_phase_correction(g);
  const double error =
      setup.target == GateTarget::strict_cz ? g.gate_error : pc.corrected.gate_error;

  const json config = to_json(cfg);
  Artifacts files;
  json report = provenance(config);
  report["gate"] = gate_report_json(g, pc);
  report["target"] = std::string(to_string(setup.target));
  report["target_gate_error"] = error;
  report["max_norm_drift"] = drift;
  report["accepted_steps"] = steps;
  files["gate_report.json"] = dump(report);
  if (popts.record_points > 0) {
    for (std::size_t k = 0; k < 3; ++k) {
      std::ostringstream os;
      write_csv_provenance(os, config);
      write_trajectory_csv(os, manifolds[k]->basis_labels(), results[k].samples);
      files[std::string("trajectory_") + names[k] + ".csv"] = os.str();
    }
  }
  write_artifacts(opt.out_dir, files);
  out << "fidelity " << format_double(g.fidelity) << "\n"
      << "corrected_fidelity " << format_double(pc.corrected.fidelity) << "\n"
      << "target " << to_string(setup.target) << " gate_error " << format_double(error) << "\n";
  return kOk;
}

int cmd_calibrate(RunConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  if (!cfg.waveform) throw ConfigError("/waveform: required field is missing");
  const WaveformFamily family = cfg.waveform->family();
  if (family == WaveformFamily::sampled) {
    throw ConfigError("/waveform/family: calibration needs a sinusoidal or bernstein waveform");
  }
  const std::string key(to_string(family));
  json lock = read_lock(opt.out_dir).value_or(json::object());
  if (!lock.contains("entries") || !lock["entries"].is_object()) lock["entries"] = json::object();

  if (lock["entries"].contains(key) && !opt.force) {
    const json& e = lock["entries"][key];
    const double best = e.value("best_fidelity", 0.0);
    out << "reusing " << kLockName << ": " << key << " angular=" << std::boolalpha
        << e.value("angular", true) << " fidelity " << format_double(best) << "\n";
    return best > kCalibrationFloor ? kOk : kCalibrationFailed;
  }

  WaveformSpec spec = *cfg.waveform;
  spec.angular.reset();
  const GateSetup base = cfg.setup(spec.build(true));
  std::array<double, 2> fid{};
  for (int angular = 0; angular < 2; ++angular) {
    GateSetup s = base;
    s.waveform = base.waveform.with_angular(angular == 1);
    PropagatorOptions popts;
    popts.tol = s.tol;
    fid[angular] = target_fidelity(simulate_gate(gate_models(s), popts), s.target);
  }
  const bool angular = fid[1] >= fid[0];
  const double best = std::max(fid[0], fid[1]);

  json config = to_json(cfg);
  config["waveform"] = to_json(spec);
  lock["tool"] = kToolName;
  lock["version"] = kToolVersion;
  lock["entries"][key] = {{"angular", angular},
                          {"fidelity_angular", fid[1]},
                          {"fidelity_linear", fid[0]},
                          {"best_fidelity", best},
                          {"target", std::string(to_string(base.target))},
                          {"config", config}};
  bool consistent = true;
  for (const auto& [name, entry] : lock["entries"].items()) {
    if (entry.value("angular", true) != angular) consistent = false;
  }
  lock["consistent"] = consistent;
  write_artifacts(opt.out_dir, {{kLockName, dump(lock)}});

  out << key << " fidelity with 2pi " << format_double(fid[1]) << ", without "
      << format_double(fid[0]) << "; selected angular=" << std::boolalpha << angular << "\n";
  if (!consistent) err << "warning: waveform families disagree on the 2pi convention\n";
  if (!(best > kCalibrationFloor)) {
    err << "error: neither convention reaches fidelity " << kCalibrationFloor
        << "; the model does not reproduce this waveform\n";
    return kCalibrationFailed;
  }
  return kOk;
}

std::string mhz_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

int cmd_mcwf(RunConfig& cfg, const Options& opt, int workers, std::ostream& out) {
  if (!cfg.mcwf) throw ConfigError("/mcwf: required field is missing");
  if (opt.seed) cfg.mcwf->base_seed = *opt.seed;
  const Waveform w = resolve_waveform(cfg, opt.out_dir);
  const McwfBlock& m = *cfg.mcwf;
  std::vector<double> blockades = m.blockade_values_mhz;
  if (blockades.empty()) blockades.push_back(cfg.blockade_mhz);

  const json config = to_json(cfg);
  Artifacts files;
  json lines = json::array();
  for (double b : blockades) {
    GateSetup setup = cfg.setup(w);
    setup.blockade_mhz = b;
    const GateModels models = gate_models(setup);
    std::vector<TrajectoryStats> rows;
    json points = json::array();
    std::vector<double> xs, ys;
    for (double gamma : m.gammas_per_us) {
      TrajectorySpec ts{models, gamma, m.n_trajectories, m.base_seed, setup.target, setup.tol,
                        workers};
      const TrajectoryStats st = estimate_gate_error(ts);
      const double oracle = deterministic_leakage_error(models, gamma, setup.target, setup.tol);
      rows.push_back(st);
      xs.push_back(gamma);
      ys.push_back(st.mean_gate_error);
      const double z = st.standard_error > 0.0
                           ? (st.mean_gate_error - oracle) / st.standard_error
                           : 0.0;
      points.push_back({{"gamma_per_us", gamma},
                        {"mean_error", st.mean_gate_error},
                        {"stderr", st.standard_error},
                        {"oracle_error", oracle},
                        {"deviation_stderrs", z},
                        {"jumps", st.jumps},
                        {"jump_fraction", st.jump_fraction}});
      out << "B " << mhz_tag(b) << " MHz gamma " << format_double(gamma) << " mean "
          << format_double(st.mean_gate_error) << " +- " << format_double(st.standard_error)
          << " oracle " << format_double(oracle) << "\n";
    }
    std::ostringstream os;
    write_csv_provenance(os, config);
    write_stats_csv(os, rows);
    files["mcwf_stats_B" + mhz_tag(b) + ".csv"] = os.str();

    json line = {{"B_MHz", b}, {"points", points}, {"fit", nullptr}};
    try {
      const FitResult fit = fit_linear(xs, ys);
      line["fit"] = {{"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"r_squared", fit.r_squared}};
      out << "B " << mhz_tag(b) << " MHz fit slope " << format_double(fit.slope) << " R2 "
          << format_double(fit.r_squared) << "\n";
    } catch (const std::invalid_argument&) {
      // Fewer than two distinct decay rates: no fit.
    }
    lines.push_back(line);
  }
  json fit = provenance(config);
  fit["lines"] = lines;
  files["mcwf_fit.json"] = dump(fit);
  write_artifacts(opt.out_dir, files);
  return kOk;
}

int cmd_sweep(RunConfig& cfg, const Options& opt, int workers, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("/sweep: required field is missing");
  if (opt.seed && cfg.sweep->mcwf) cfg.sweep->mcwf->base_seed = *opt.seed;
  const Waveform w = resolve_waveform(cfg, opt.out_dir);
  const SweepBlock& sb = *cfg.sweep;
  const SweepSpec spec{cfg.setup(w), sb.axis,         sb.values, sb.perturbation,
                       sb.epsilon,    sb.doppler_ratio, sb.mcwf,   workers};
  const auto rows = run_sweep(spec);

  const json config = to_json(cfg);
  Artifacts files;
  std::ostringstream os;
  write_csv_provenance(os, config);
  write_sweep_csv(os, to_string(sb.axis), rows);
  files["sweep.csv"] = os.str();

  json manifest = provenance(config);
  manifest["axis"] = std::string(to_string(sb.axis));
  manifest["perturbation"] = std::string(to_string(sb.perturbation));
  manifest["rows"] = rows.size();
  manifest["csv"] = "sweep.csv";
  manifest["fit"] = nullptr;
  if (sb.axis == SweepAxis::gamma_per_us) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
      xs.push_back(r.value);
      ys.push_back(r.gate_error);
    }
    try {
      const FitResult fit = fit_linear(xs, ys);
      manifest["fit"] = {
          {"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    } catch (const std::invalid_argument&) {
    }
  }
  files["sweep_manifest.json"] = dump(manifest);
  write_artifacts(opt.out_dir, files);
  for (const auto& r : rows) {
    out << to_string(sb.axis) << ' ' << format_double(r.value) << " gate_error "
        << format_double(r.gate_error) << "\n";
  }
  return kOk;
}

int cmd_optimize(RunConfig& cfg, const Options& opt, int workers, std::ostream& out) {
  if (!cfg.optimize) throw ConfigError("/optimize: required field is missing");
  if (opt.seed) cfg.optimize->seed = *opt.seed;
  const OptimizeBlock& o = *cfg.optimize;

  OptimizationProblem problem;
  problem.family = o.family;
  problem.bounds = o.bounds;
  problem.physics = PhysicsParams::from_mhz(cfg.blockade_mhz, cfg.forster_defect_mhz, 0.0,
                                            cfg.pp_diagonal);
  problem.target = cfg.simulation.target;
  problem.budget = o.budget;
  problem.seed = o.seed;
  problem.gate_time = o.gate_time_us;
  problem.angular = o.angular;
  problem.bernstein_degree = o.bernstein_degree;
  problem.tol = cfg.simulation.tol;
  problem.stop_at_error = o.stop_at_error;
  problem.restarts = o.restarts;
  problem.workers = workers;
  OptimizationReport report = optimize(problem);

  json polish = nullptr;
  if (o.polish_budget > 0 && !report.best_parameters.empty()) {
    OptimizationProblem second = problem;
    second.initial_guess = report.best_parameters;
    second.budget = o.polish_budget;
    second.stop_at_error = o.polish_stop_at_error;
    second.restarts = 1;
    second.tol = o.polish_tol;
    const OptimizationReport r2 = optimize(second);
    polish = {{"evaluations", r2.evaluations},
              {"best_error", r2.best_error},
              {"reached_target", r2.reached_target}};
    const double last = report.trace.empty() ? 1.0 : report.trace.back();
    for (double v : r2.trace) report.trace.push_back(std::min(v, last));
    report.evaluations += r2.evaluations;
    // The second stage starts at the first stage's best point and is
    // scored at its own tolerance, so its result supersedes.
    report.best_error = r2.best_error;
    report.best_parameters = r2.best_parameters;
  }

  WaveformSpec best;
  best.gate_time_us = o.gate_time_us;
  best.angular = o.angular;
  best.shape = waveform_from_parameters(o.family, report.best_parameters, o.gate_time_us,
                                        o.angular, o.bernstein_degree)
                   .shape();
  const Waveform bw = best.build(o.angular);
  PropagatorOptions popts;
  popts.tol = o.polish_budget > 0 ? o.polish_tol : cfg.simulation.tol;
  const GateOutcome g = simulate_gate(
      build_gate_models(bw, bw, problem.physics, ModelKind::symmetric), popts);

  const json config = to_json(cfg);
  Artifacts files;
  json rep = provenance(config);
  json params = json::object();
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    params[report.names[i]] = report.best_parameters[i];
  }
  rep["best_parameters"] = params;
  rep["best_error"] = report.best_error;
  rep["evaluations"] = report.evaluations;
  rep["restarts_used"] = report.restarts_used;
  rep["reached_target"] = report.reached_target;
  rep["budget_exhausted"] = report.budget_exhausted;
  rep["polish"] = polish;
  rep["waveform"] = to_json(best);
  rep["gate"] = gate_report_json(g, local_phase_correction(g));
  files["optimize_report.json"] = dump(rep);
  std::ostringstream os;
  write_csv_provenance(os, config);
  write_trace_csv(os, report.trace);
  files["optimize_trace.csv"] = os.str();
  write_artifacts(opt.out_dir, files);

  out << "best_error " << format_double(report.best_error) << " after " << report.evaluations
      << " evaluations\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-level simulator and optimizer for Rydberg blockade gates", "rydgate"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Options opt;
  int workers_flag = 0;
  std::uint64_t seed_flag = 0;
  app.add_option("--config", opt.config_path, "JSON run configuration")->required();
  app.add_option("--out", opt.out_dir, "Output directory");
  auto* workers_opt = app.add_option("--workers", workers_flag, "Parallel workers");
  auto* seed_opt = app.add_option("--seed", seed_flag, "Override the configured seed");
  app.add_flag("--force", opt.force, "Recompute the convention lock");
  auto* simulate = app.add_subcommand("simulate", "Gate simulation with trajectories");
  auto* calibrate = app.add_subcommand("calibrate-convention", "Pick the 2pi convention");
  auto* mcwf = app.add_subcommand("mcwf", "Trajectory estimate of decay-limited error");
  auto* sweep = app.add_subcommand("sweep", "Parameter or perturbation sweep");
  auto* optimize_cmd = app.add_subcommand("optimize", "Waveform parameter optimization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (workers_opt->count() > 0) opt.workers = workers_flag;
  if (seed_opt->count() > 0) opt.seed = seed_flag;

  try {
    RunConfig cfg = parse_config(read_file(opt.config_path), opt.config_path);
    const int workers = resolve_workers(opt);
    if (simulate->parsed()) return cmd_simulate(cfg, opt, out);
    if (calibrate->parsed()) return cmd_calibrate(cfg, opt, out, err);
    if (mcwf->parsed()) return cmd_mcwf(cfg, opt, workers, out);
    if (sweep->parsed()) return cmd_sweep(cfg, opt, workers, out);
    if (optimize_cmd->parsed()) return cmd_optimize(cfg, opt, workers, out);
    return kUsage;
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace rydgate::cli
