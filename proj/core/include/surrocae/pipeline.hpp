#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "surrocae/config.hpp"
#include "surrocae/dataset.hpp"
#include "surrocae/elasticity.hpp"
#include "surrocae/kde.hpp"
#include "surrocae/model.hpp"
#include "surrocae/solution.hpp"
#include "surrocae/statistics.hpp"
#include "surrocae/train.hpp"

namespace surrocae {

struct StageCost {
  std::string name;
  double seconds = 0.0;
  std::size_t items = 0;  // work units: solves, epochs, predictions
};

struct CostLedger {
  std::vector<StageCost> stages;
  double total_seconds = 0.0;  // outer wall clock around all stages
  int threads = 1;

  double stage_sum() const;
  const StageCost* find(const std::string& name) const;
};

/// Draws n parameter rows (one column per parameter) for the configured
/// distribution.
Tensor<double> draw_samples(const SamplingConfig& sampling);

/// One exact solver run at the given parameter values, in config order.
SolutionMatrix solve_for_theta(const PipelineConfig& config,
                               const std::vector<double>& theta);

/// Mesh and ground motion are invariant across parameter draws, so repeated
/// wall solves share one context.
struct ElasticityContext {
  WallMesh mesh;
  GroundMotion motion;
};
ElasticityContext build_elasticity_context(const ElasticityPipelineConfig&);
SolutionMatrix solve_wall(const ElasticityContext& context,
                          const ElasticityPipelineConfig& config,
                          const std::vector<double>& moduli);

/// Solves every row of `thetas` (fanning out over config.threads) and packs
/// the snapshots with the solver fingerprint.
SnapshotDataset solve_snapshots(const PipelineConfig& config,
                                const Tensor<double>& thetas);

/// Everything the offline phase produces. Files are written as each stage
/// finishes, so a failure later in the run leaves the earlier artifacts on
/// disk; stage failures are rethrown with the stage name prefixed.
struct OfflineResult {
  SnapshotDataset dataset;
  CaeModel cae;
  FfnnModel ffnn;
  LossHistory cae_history;
  LossHistory ffnn_history;
  CostLedger ledger;
  std::string dataset_path;
  std::string cae_path;
  std::string ffnn_path;
};

/// sample -> solve -> train autoencoder -> train parameter network.
/// Artifact paths come from config.outputs resolved against out_dir.
OfflineResult offline_run(const PipelineConfig& config,
                          const std::string& out_dir = ".");

struct McProbeResult {
  std::string name;
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<double> values;  // one scalar per simulation, in draw order
  RunningStats stats;
  bool has_pdf = false;  // needs at least 100 simulations
  std::vector<double> pdf_grid;
  KdeResult pdf;
  std::vector<double> mean_history;      // probe row of the mean matrix
  std::vector<double> variance_history;  // probe row of the variance matrix
};

struct McReport {
  std::size_t n_mc = 0;
  std::uint64_t seed = 0;
  std::vector<double> time_axis;
  Tensor<double> mean;      // (n_dofs, n_time)
  Tensor<double> variance;  // same shape, entrywise sample variance
  std::vector<McProbeResult> probes;
  std::size_t out_of_range = 0;  // draws outside the training box
  double per_sim_seconds = 0.0;  // prediction wall time / n_mc
  CostLedger ledger;
};

/// Streams config.mc.n_mc surrogate predictions through entrywise running
/// statistics and the probe accumulators. Peak memory stays at a few
/// solution matrices per worker; the ensemble itself is never stored.
McReport online_mc_run(const PipelineConfig& config, const CaeModel& cae,
                       const FfnnModel& ffnn);

struct ValidationRow {
  std::vector<double> theta;
  bool ok = false;
  std::string message;  // failure reason when !ok
  double error = 0.0;   // normalized Frobenius error, exact vs surrogate
  bool out_of_range = false;
  std::vector<std::size_t> profile_cols;  // sampled time instants
  std::vector<double> profile_times;
  Tensor<double> exact_profiles;      // (n_dofs, n_profile_cols)
  Tensor<double> predicted_profiles;
};

struct ValidationTable {
  std::vector<ValidationRow> rows;
  CostLedger ledger;
};

/// Solves exactly at each probe theta and scores the surrogate against it,
/// extracting solution profiles at quarter/half/three-quarter record time
/// for plotting. Per-theta solver failures mark the row and the run
/// continues; an empty list yields an empty table.
ValidationTable validate_run(const PipelineConfig& config, const CaeModel& cae,
                             const FfnnModel& ffnn,
                             const std::vector<std::vector<double>>& thetas);

struct ConvergenceCell {
  int latent = 0;
  int dataset_size = 0;
  bool ok = false;
  std::string message;
  double mean_error = 0.0;  // normalized error averaged over the eval set
};

struct ConvergenceTable {
  std::vector<int> latent_dims;
  std::vector<int> dataset_sizes;
  std::vector<ConvergenceCell> cells;  // dataset size outer, latent inner
  CostLedger ledger;
};

/// Trains one surrogate per (latent, dataset size) cell and scores each on a
/// shared evaluation set of exact solves drawn with convergence.eval_seed.
/// The cell for size index k samples with seed sampling.seed + 1 + k, so
/// every cell is reproducible in isolation. Cell failures are recorded and
/// the sweep continues.
ConvergenceTable convergence_study(const PipelineConfig& config,
                                   const std::vector<int>& latent_dims,
                                   const std::vector<int>& dataset_sizes);

}  // namespace surrocae
