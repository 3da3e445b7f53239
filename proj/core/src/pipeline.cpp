#include "surrocae/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include "parallel.hpp"
#include "surrocae/burgers.hpp"
#include "surrocae/checkpoint.hpp"
#include "surrocae/errors.hpp"
#include "surrocae/ground_motion.hpp"
#include "surrocae/statistics.hpp"

namespace surrocae {
namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

/// Rethrows the in-flight exception with the stage name prefixed, keeping
/// the category so CLI exit codes stay meaningful.
[[noreturn]] void rethrow_stage(const std::string& stage) {
  const std::string tag = "stage '" + stage + "': ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(tag + e.what());
  } catch (const IoError& e) {
    throw IoError(tag + e.what());
  } catch (const StateError& e) {
    throw StateError(tag + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + e.what());
  } catch (const std::exception& e) {
    throw Error(tag + e.what());
  }
}

template <typename Fn>
auto run_stage(CostLedger& ledger, const std::string& name, std::size_t items,
               Fn&& fn) {
  Timer timer;
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      ledger.stages.push_back({name, timer.elapsed(), items});
    } else {
      auto result = fn();
      ledger.stages.push_back({name, timer.elapsed(), items});
      return result;
    }
  } catch (...) {
    rethrow_stage(name);
  }
}

/// MC draws and study evaluations use independent draws even when training
/// used a stratified design; stratification is a training-set concern.
SamplingKind plain_kind(SamplingKind k) {
  if (k == SamplingKind::lhs_uniform) return SamplingKind::uniform;
  if (k == SamplingKind::lhs_lognormal) return SamplingKind::lognormal;
  return k;
}

std::vector<double> theta_row(const Tensor<double>& thetas, std::size_t i) {
  std::vector<double> out(thetas.extent(1));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = thetas(i, j);
  return out;
}

void check_compatible(const PipelineConfig& config, const CaeModel& cae,
                      const FfnnModel& ffnn) {
  const auto [d, t] = solution_shape(config);
  if (cae.arch.input_rows != d || cae.arch.input_cols != t) {
    throw ConfigError("autoencoder checkpoint was trained on " +
                      std::to_string(cae.arch.input_rows) + " x " +
                      std::to_string(cae.arch.input_cols) +
                      " snapshots but the config produces " +
                      std::to_string(d) + " x " + std::to_string(t));
  }
  if (ffnn.arch.input_dim != config.sampling.dim()) {
    throw ConfigError("parameter network takes " +
                      std::to_string(ffnn.arch.input_dim) +
                      " inputs but the config samples " +
                      std::to_string(config.sampling.dim()) + " parameters");
  }
  if (ffnn.arch.output_dim != cae.arch.latent_dim) {
    throw ConfigError("checkpoints disagree on the latent width: " +
                      std::to_string(ffnn.arch.output_dim) + " vs " +
                      std::to_string(cae.arch.latent_dim));
  }
}

TrainConfig clamped_to(std::size_t n, TrainConfig cfg) {
  cfg.batch_size = std::min(cfg.batch_size, n);
  return cfg;
}

std::string resolve(const std::string& out_dir, const std::string& leaf) {
  namespace fs = std::filesystem;
  fs::path p = fs::path(leaf);
  if (!p.is_absolute()) p = fs::path(out_dir) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

}  // namespace

double CostLedger::stage_sum() const {
  double s = 0.0;
  for (const auto& st : stages) s += st.seconds;
  return s;
}

const StageCost* CostLedger::find(const std::string& name) const {
  for (const auto& st : stages) {
    if (st.name == name) return &st;
  }
  return nullptr;
}

Tensor<double> draw_samples(const SamplingConfig& s) {
  if (s.n == 0) throw ConfigError("sampling needs n >= 1");
  if (s.dim() == 0) throw ConfigError("sampling needs at least one parameter");
  Rng rng(s.seed);
  switch (s.kind) {
    case SamplingKind::uniform:
      return sample_uniform(s.n, s.uniform, rng);
    case SamplingKind::lhs_uniform:
      return lhs_sample(s.n, s.uniform, rng);
    case SamplingKind::lhs_lognormal:
      return lhs_sample_lognormal(s.n, s.lognormal, rng);
    case SamplingKind::lognormal: {
      Tensor<double> out({s.n, s.lognormal.size()});
      for (std::size_t j = 0; j < s.lognormal.size(); ++j) {
        const auto col =
            sample_lognormal(s.lognormal[j].mean, s.lognormal[j].sd, s.n, rng);
        for (std::size_t i = 0; i < s.n; ++i) out(i, j) = col[i];
      }
      return out;
    }
  }
  throw ConfigError("unknown sampling kind");
}

ElasticityContext build_elasticity_context(
    const ElasticityPipelineConfig& e) {
  ElasticityContext ctx;
  ctx.mesh = build_wall_mesh(e.geometry);
  ctx.motion = e.motion_file.empty()
                   ? synthetic_ground_motion(e.motion_steps, e.motion_dt,
                                             e.motion_seed, e.motion_peak)
                   : load_ground_motion_csv(e.motion_file);
  return ctx;
}

SolutionMatrix solve_wall(const ElasticityContext& ctx,
                          const ElasticityPipelineConfig& e,
                          const std::vector<double>& moduli) {
  if (moduli.size() != ctx.mesh.monitored_nodes.size()) {
    throw ShapeError("expected " +
                     std::to_string(ctx.mesh.monitored_nodes.size()) +
                     " story moduli, got " + std::to_string(moduli.size()));
  }
  ElasticityParams params;
  params.youngs_modulus = moduli;
  params.poisson = e.poisson;
  params.density = e.density;
  params.thickness = e.thickness;
  const AssembledSystem system = assemble_system(ctx.mesh, params);
  NewmarkConfig newmark;
  newmark.damping = {e.damping_alpha_m, e.damping_beta_k};
  return newmark_integrate(system, ctx.motion, newmark);
}

SolutionMatrix solve_for_theta(const PipelineConfig& config,
                               const std::vector<double>& theta) {
  if (theta.size() != config.sampling.dim()) {
    throw ShapeError("theta has " + std::to_string(theta.size()) +
                     " values, the problem takes " +
                     std::to_string(config.sampling.dim()));
  }
  if (config.problem == Problem::burgers) {
    BurgersConfig b;
    b.nu = theta[0];
    b.n_x = config.burgers.n_x;
    b.n_t = config.burgers.n_t;
    b.x_min = config.burgers.x_min;
    b.x_max = config.burgers.x_max;
    b.t_max = config.burgers.t_max;
    return solve_burgers(b).solution;
  }
  const ElasticityContext ctx = build_elasticity_context(config.elasticity);
  return solve_wall(ctx, config.elasticity, theta);
}

SnapshotDataset solve_snapshots(const PipelineConfig& config,
                                const Tensor<double>& thetas) {
  if (thetas.rank() != 2 || thetas.extent(1) != config.sampling.dim()) {
    throw ShapeError("thetas must be (n, " +
                     std::to_string(config.sampling.dim()) + ")");
  }
  const std::size_t n = thetas.extent(0);
  const auto [d, t] = solution_shape(config);

  SnapshotDataset ds;
  ds.param_names = config.sampling.names();
  ds.solver = solver_fingerprint(config);
  ds.params = Tensor<Scalar>({n, thetas.extent(1)});
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    ds.params[i] = static_cast<Scalar>(thetas[i]);
  }
  ds.solutions = Tensor<Scalar>({n, d, t});

  const bool wall = config.problem == Problem::elasticity;
  ElasticityContext ctx;
  if (wall) {
    ctx = build_elasticity_context(config.elasticity);
    ds.time_axis.resize(t);
    for (std::size_t j = 0; j < t; ++j) {
      ds.time_axis[j] = static_cast<double>(j) * ctx.motion.dt;
    }
  } else {
    const double dt =
        config.burgers.t_max / static_cast<double>(config.burgers.n_t - 1);
    ds.time_axis.resize(t);
    for (std::size_t j = 0; j < t; ++j) {
      ds.time_axis[j] = static_cast<double>(j) * dt;
    }
  }

  detail::run_blocks(
      n, config.threads,
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const SolutionMatrix sol =
              wall ? solve_wall(ctx, config.elasticity, theta_row(thetas, i))
                   : solve_for_theta(config, theta_row(thetas, i));
          if (sol.values.extent(0) != d || sol.values.extent(1) != t) {
            throw ShapeError("solver returned an unexpected matrix shape");
          }
          Scalar* dst = ds.solutions.data() + i * d * t;
          for (std::size_t k = 0; k < d * t; ++k) {
            dst[k] = static_cast<Scalar>(sol.values[k]);
          }
        }
      });
  return ds;
}

OfflineResult offline_run(const PipelineConfig& config,
                          const std::string& out_dir) {
  validate_config(config);
  OfflineResult r;
  r.ledger.threads = config.threads;
  Timer total;
  double persist_seconds = 0.0;
  const auto persist = [&](auto&& fn) {
    Timer timer;
    fn();
    persist_seconds += timer.elapsed();
  };

  const Tensor<double> thetas = run_stage(
      r.ledger, "sample", config.sampling.n,
      [&] { return draw_samples(config.sampling); });

  r.dataset = run_stage(r.ledger, "solve", config.sampling.n,
                        [&] { return solve_snapshots(config, thetas); });
  persist([&] {
    r.dataset_path = resolve(out_dir, config.outputs.dataset);
    save_dataset(r.dataset, r.dataset_path);
  });

  r.cae = run_stage(r.ledger, "train-cae", config.cae_train.epochs, [&] {
    return train_cae(r.dataset.solutions, build_cae_arch(config),
                     config.cae_train, &r.cae_history);
  });
  persist([&] {
    r.cae_path = resolve(out_dir, config.outputs.cae_checkpoint);
    save_cae(r.cae, r.cae_path);
  });

  r.ffnn = run_stage(r.ledger, "train-ffnn", config.ffnn_train.epochs, [&] {
    const Tensor<Scalar> latents = encode_dataset(r.dataset.solutions, r.cae);
    return train_ffnn(r.dataset.params, latents, build_ffnn_arch(config),
                      config.ffnn_train, &r.ffnn_history);
  });
  persist([&] {
    r.ffnn_path = resolve(out_dir, config.outputs.ffnn_checkpoint);
    save_ffnn(r.ffnn, r.ffnn_path);
  });

  r.ledger.stages.push_back({"persist", persist_seconds, 3});
  r.ledger.total_seconds = total.elapsed();
  return r;
}

McReport online_mc_run(const PipelineConfig& config, const CaeModel& cae,
                       const FfnnModel& ffnn) {
  check_compatible(config, cae, ffnn);
  if (config.mc.n_mc == 0) {
    throw ConfigError("online run needs mc.n_mc >= 1");
  }
  const std::size_t n = config.mc.n_mc;

  McReport report;
  report.n_mc = n;
  report.seed = config.mc.seed;
  report.ledger.threads = config.threads;
  Timer total;

  SamplingConfig draws = config.sampling;
  draws.kind = plain_kind(draws.kind);
  draws.n = n;
  draws.seed = config.mc.seed;
  const Tensor<double> thetas = run_stage(
      report.ledger, "sample", n, [&] { return draw_samples(draws); });

  const std::vector<ProbeSpec> probes =
      config.mc.probes.empty() ? default_probes(config) : config.mc.probes;
  report.probes.resize(probes.size());
  for (std::size_t p = 0; p < probes.size(); ++p) {
    report.probes[p].name = probes[p].name;
    report.probes[p].row = probes[p].row;
    report.probes[p].col = probes[p].col;
    report.probes[p].values.assign(n, 0.0);
  }

  const std::size_t workers = std::max(
      std::size_t{1},
      std::min(static_cast<std::size_t>(std::max(config.threads, 1)), n));
  std::vector<MatrixStats> parts(workers);
  std::vector<std::size_t> oor(workers, 0);

  run_stage(report.ledger, "predict", n, [&] {
    detail::run_blocks(
        n, static_cast<int>(workers),
        [&](std::size_t w, std::size_t begin, std::size_t end) {
          for (std::size_t i = begin; i < end; ++i) {
            const PredictResult pr = predict(theta_row(thetas, i), ffnn, cae);
            parts[w].push(pr.solution.values);
            if (pr.theta_out_of_range) ++oor[w];
            for (std::size_t p = 0; p < probes.size(); ++p) {
              report.probes[p].values[i] =
                  pr.solution.values(probes[p].row, probes[p].col);
            }
          }
        });
  });
  const double predict_seconds = report.ledger.find("predict")->seconds;

  MatrixStats stats = std::move(parts[0]);
  for (std::size_t w = 1; w < workers; ++w) stats.merge(parts[w]);
  for (const std::size_t c : oor) report.out_of_range += c;

  report.mean = stats.mean();
  report.variance = stats.variance();
  const auto [d, t] = solution_shape(config);
  report.time_axis.resize(t);
  if (config.problem == Problem::burgers) {
    const double dt =
        config.burgers.t_max / static_cast<double>(config.burgers.n_t - 1);
    for (std::size_t j = 0; j < t; ++j) {
      report.time_axis[j] = static_cast<double>(j) * dt;
    }
  } else {
    const double dt = build_elasticity_context(config.elasticity).motion.dt;
    for (std::size_t j = 0; j < t; ++j) {
      report.time_axis[j] = static_cast<double>(j) * dt;
    }
  }

  for (auto& probe : report.probes) {
    for (const double v : probe.values) probe.stats.push(v);
    probe.mean_history.resize(t);
    probe.variance_history.resize(t);
    for (std::size_t j = 0; j < t; ++j) {
      probe.mean_history[j] = report.mean(probe.row, j);
      probe.variance_history[j] = report.variance(probe.row, j);
    }
    if (n >= 100) {
      probe.has_pdf = true;
      const double bw = silverman_bandwidth(probe.values);
      if (bw == 0.0) {
        probe.pdf.point_mass = true;
        probe.pdf.location = probe.values[0];
      } else {
        probe.pdf_grid = kde_grid(probe.values, bw);
        probe.pdf = pdf_estimate(probe.values, probe.pdf_grid);
      }
    }
  }

  report.per_sim_seconds = predict_seconds / static_cast<double>(n);
  report.ledger.total_seconds = total.elapsed();
  return report;
}

ValidationTable validate_run(const PipelineConfig& config, const CaeModel& cae,
                             const FfnnModel& ffnn,
                             const std::vector<std::vector<double>>& thetas) {
  check_compatible(config, cae, ffnn);
  ValidationTable table;
  table.ledger.threads = config.threads;
  if (thetas.empty()) return table;

  Timer total;
  const auto [d, t] = solution_shape(config);
  std::vector<std::size_t> cols = {t / 4, t / 2, (3 * t) / 4};
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  const bool wall = config.problem == Problem::elasticity;
  ElasticityContext ctx;
  if (wall) ctx = build_elasticity_context(config.elasticity);
  run_stage(table.ledger, "validate", thetas.size(), [&] {
    for (const auto& theta : thetas) {
      ValidationRow row;
      row.theta = theta;
      try {
        const SolutionMatrix exact =
            wall ? solve_wall(ctx, config.elasticity, theta)
                 : solve_for_theta(config, theta);
        const PredictResult pr = predict(theta, ffnn, cae);
        row.error = normalized_error(exact.values, pr.solution.values);
        row.out_of_range = pr.theta_out_of_range;
        row.profile_cols = cols;
        row.exact_profiles = Tensor<double>({d, cols.size()});
        row.predicted_profiles = Tensor<double>({d, cols.size()});
        for (std::size_t k = 0; k < cols.size(); ++k) {
          row.profile_times.push_back(exact.time_axis[cols[k]]);
          for (std::size_t i = 0; i < d; ++i) {
            row.exact_profiles(i, k) = exact.values(i, cols[k]);
            row.predicted_profiles(i, k) = pr.solution.values(i, cols[k]);
          }
        }
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
      }
      table.rows.push_back(std::move(row));
    }
  });
  table.ledger.total_seconds = total.elapsed();
  return table;
}

ConvergenceTable convergence_study(const PipelineConfig& config,
                                   const std::vector<int>& latent_dims,
                                   const std::vector<int>& dataset_sizes) {
  validate_config(config);
  if (latent_dims.empty() || dataset_sizes.empty()) {
    throw ConfigError("convergence study needs latent dims and dataset sizes");
  }

  ConvergenceTable table;
  table.latent_dims = latent_dims;
  table.dataset_sizes = dataset_sizes;
  table.ledger.threads = config.threads;
  Timer total;

  // Shared evaluation set: independent draws, solved exactly once.
  SamplingConfig ev = config.sampling;
  ev.kind = plain_kind(ev.kind);
  ev.n = config.convergence.n_eval;
  ev.seed = config.convergence.eval_seed;
  const Tensor<double> eval_thetas = run_stage(
      table.ledger, "sample", ev.n, [&] { return draw_samples(ev); });

  std::vector<Tensor<double>> exact;
  run_stage(table.ledger, "evaluate-solves", ev.n, [&] {
    const bool wall = config.problem == Problem::elasticity;
    ElasticityContext ctx;
    if (wall) ctx = build_elasticity_context(config.elasticity);
    for (std::size_t i = 0; i < ev.n; ++i) {
      const auto theta = theta_row(eval_thetas, i);
      exact.push_back((wall ? solve_wall(ctx, config.elasticity, theta)
                            : solve_for_theta(config, theta))
                          .values);
    }
  });

  double solve_seconds = 0.0, train_seconds = 0.0, score_seconds = 0.0;
  std::size_t n_solves = 0, n_trainings = 0;

  for (std::size_t si = 0; si < dataset_sizes.size(); ++si) {
    const int size = dataset_sizes[si];
    PipelineConfig cell_config = config;
    cell_config.sampling.n = static_cast<std::size_t>(size);
    cell_config.sampling.seed = config.sampling.seed + 1 + si;

    SnapshotDataset ds;
    std::string solve_failure;
    try {
      Timer timer;
      const Tensor<double> thetas = draw_samples(cell_config.sampling);
      ds = solve_snapshots(cell_config, thetas);
      solve_seconds += timer.elapsed();
      n_solves += cell_config.sampling.n;
    } catch (const std::exception& e) {
      solve_failure = e.what();
    }

    for (const int latent : latent_dims) {
      ConvergenceCell cell;
      cell.latent = latent;
      cell.dataset_size = size;
      if (!solve_failure.empty()) {
        cell.message = solve_failure;
        table.cells.push_back(cell);
        continue;
      }
      try {
        Timer timer;
        const CaeArchitecture cae_arch = build_cae_arch(cell_config, latent);
        const CaeModel cae =
            train_cae(ds.solutions, cae_arch,
                      clamped_to(ds.n_samples(), cell_config.cae_train));
        const Tensor<Scalar> latents = encode_dataset(ds.solutions, cae);
        const FfnnModel ffnn =
            train_ffnn(ds.params, latents, build_ffnn_arch(cell_config, latent),
                       clamped_to(ds.n_samples(), cell_config.ffnn_train));
        train_seconds += timer.elapsed();
        ++n_trainings;

        Timer scorer;
        double acc = 0.0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
          const PredictResult pr =
              predict(theta_row(eval_thetas, i), ffnn, cae);
          acc += normalized_error(exact[i], pr.solution.values);
        }
        cell.mean_error = acc / static_cast<double>(exact.size());
        score_seconds += scorer.elapsed();
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.message = e.what();
      }
      table.cells.push_back(cell);
    }
  }

  table.ledger.stages.push_back({"solve", solve_seconds, n_solves});
  table.ledger.stages.push_back({"train", train_seconds, n_trainings});
  table.ledger.stages.push_back(
      {"score", score_seconds, n_trainings * exact.size()});
  table.ledger.total_seconds = total.elapsed();
  return table;
}

}  // namespace surrocae
