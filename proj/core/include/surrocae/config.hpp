#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "surrocae/architecture.hpp"
#include "surrocae/mesh.hpp"
#include "surrocae/sampling.hpp"

namespace surrocae {

enum class Problem { burgers, elasticity };

enum class SamplingKind { uniform, lhs_uniform, lognormal, lhs_lognormal };

struct SamplingConfig {
  SamplingKind kind = SamplingKind::uniform;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Exactly one of the two lists is populated, matching the kind.
  std::vector<ParamRange> uniform;
  std::vector<LognormalSpec> lognormal;

  bool is_lognormal() const {
    return kind == SamplingKind::lognormal ||
           kind == SamplingKind::lhs_lognormal;
  }
  std::size_t dim() const {
    return is_lognormal() ? lognormal.size() : uniform.size();
  }
  std::vector<std::string> names() const;
};

struct BurgersPipelineConfig {
  std::size_t n_x = 200;
  std::size_t n_t = 100;
  double x_min = -1.0;
  double x_max = 1.0;
  double t_max = 5.0;
};

struct ElasticityPipelineConfig {
  WallGeometry geometry = WallGeometry::reduced();
  double poisson = 0.2;
  double density = 2500.0;
  double thickness = 1.0;
  double damping_alpha_m = 0.0;
  double damping_beta_k = 0.0;
  /// Nonempty path wins; otherwise a deterministic synthetic record.
  std::string motion_file;
  std::size_t motion_steps = 150;
  double motion_dt = 0.04;
  std::uint64_t motion_seed = 42;
  double motion_peak = 3.0;
};

/// Compact knobs expanded by build_cae_arch into a two-conv encoder with a
/// mirrored decoder. pool == 0 picks the largest window in 5..2 that divides
/// the post-convolution length.
struct CaeConfig {
  int latent = 8;
  int filters1 = 64;
  int filters2 = 32;
  int kernel = 5;
  int stride = 2;
  int padding = 2;
  int pool = 0;
};

struct ProbeSpec {
  std::string name;
  std::size_t row = 0;
  std::size_t col = 0;
};

struct McConfig {
  std::size_t n_mc = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeSpec> probes;
};

struct ConvergenceConfig {
  std::vector<int> latent_dims = {2, 4, 8};
  std::vector<int> dataset_sizes = {25, 50, 100};
  std::size_t n_eval = 20;
  std::uint64_t eval_seed = 0;
};

struct OutputPaths {
  std::string dataset = "dataset.bin";
  std::string cae_checkpoint = "cae.ckpt";
  std::string ffnn_checkpoint = "ffnn.ckpt";
  std::string report_dir = "report";
};

struct PipelineConfig {
  Problem problem = Problem::burgers;
  int threads = 1;
  SamplingConfig sampling;
  BurgersPipelineConfig burgers;
  ElasticityPipelineConfig elasticity;
  CaeConfig cae;
  std::vector<int> ffnn_hidden = {32, 32, 32, 32};
  TrainConfig cae_train;
  TrainConfig ffnn_train;
  McConfig mc;
  ConvergenceConfig convergence;
  OutputPaths outputs;
};

/// The schema the text form is checked against before parsing; the same
/// document ships as configs/schema.json.
const std::string& config_schema_text();

/// Schema check, parse, default resolution (MC seed, probe locations),
/// cross-field validation. Throws ConfigError with a JSON-pointer-style path
/// for schema violations.
PipelineConfig parse_config_text(const std::string& json_text);
PipelineConfig load_config(const std::string& path);

/// Cross-field checks for configs built in code: parameter lists match the
/// distribution and the problem, architectures trace, batch sizes fit the
/// dataset, probes land inside the solution matrix.
void validate_config(const PipelineConfig& config);

/// Re-seeds every stage from one value: sampling uses `seed`, training uses
/// `seed`, MC draws use `seed + 1`, study evaluation uses a fixed xor.
void reseed_config(PipelineConfig& config, std::uint64_t seed);

/// (n_dofs, n_time) of one solver run. Builds the mesh or inspects the
/// motion record when the problem needs it.
std::pair<std::size_t, std::size_t> solution_shape(const PipelineConfig&);

CaeArchitecture build_cae_arch(const PipelineConfig&);
CaeArchitecture build_cae_arch(const PipelineConfig&, int latent);
FfnnArchitecture build_ffnn_arch(const PipelineConfig&);
FfnnArchitecture build_ffnn_arch(const PipelineConfig&, int latent);

/// Stable description of everything that shapes the solver output. Stored in
/// datasets so training refuses snapshots from a different setup. Motion
/// files contribute a content hash, not a path.
std::string solver_fingerprint(const PipelineConfig&);

/// Probes used when the config lists none: the two off-center grid points at
/// mid-record for the viscous problem, the monitored story nodes at
/// mid-record for the wall.
std::vector<ProbeSpec> default_probes(const PipelineConfig&);

}  // namespace surrocae
