#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "surrocae/architecture.hpp"
#include "surrocae/layers.hpp"
#include "surrocae/pooling.hpp"
#include "surrocae/rng.hpp"
#include "surrocae/solution.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae {

/// All network arithmetic runs in float32; that precision is part of the
/// checkpoint contract.
using Scalar = float;
using LatentVector = std::vector<Scalar>;

/// A materialized LayerSpec: weights for the parametric kinds, the spec alone
/// for the shape-only ones.
struct StackLayer {
  LayerSpec spec;
  std::variant<std::monostate, nn::DenseLayer<Scalar>, nn::Conv1dLayer<Scalar>,
               nn::Deconv1dLayer<Scalar>>
      weights;
};

/// Per-layer forward caches for one backward pass. Indices align with the
/// owning stack's layers.
struct StackTape {
  struct Entry {
    nn::DenseCache<Scalar> dense;
    nn::ConvCache<Scalar> conv;
    nn::DeconvCache<Scalar> deconv;
    nn::PoolCache<Scalar> pool;
    std::vector<std::size_t> in_shape;  // flatten / reshape bookkeeping
  };
  std::vector<Entry> entries;
};

/// Sequential network. Layers are built from specs with seeded uniform
/// fan-in/fan-out initialization (biases zero), so a (spec, seed) pair always
/// produces the same weights.
class LayerStack {
 public:
  LayerStack() = default;
  LayerStack(const std::vector<LayerSpec>& specs, TraceShape input, Rng rng);

  /// x is one sample or a batch (leading batch axis). Pass a tape to record
  /// the caches backward() needs.
  Tensor<Scalar> forward(const Tensor<Scalar>& x, StackTape* tape = nullptr) const;

  /// Returns the input gradient; parameter gradients are written to grads,
  /// aligned with parameters().
  Tensor<Scalar> backward(const Tensor<Scalar>& grad_out, const StackTape& tape,
                          std::vector<Tensor<Scalar>>& grads) const;

  /// Weight/bias tensors in declaration order (stable addresses as long as
  /// the stack itself is not moved).
  std::vector<Tensor<Scalar>*> parameters();
  std::vector<const Tensor<Scalar>*> parameters() const;

  const std::vector<StackLayer>& layers() const { return layers_; }
  std::vector<StackLayer>& layers() { return layers_; }

 private:
  std::vector<StackLayer> layers_;
};

/// Affine data normalization u_n = (u - offset) * scale applied before the
/// encoder, inverted after the decoder. Stored with the model.
struct Normalization {
  Scalar offset = 0.0f;
  Scalar scale = 1.0f;
};

struct TrainMeta {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double final_loss = 0.0;
};

struct CaeModel {
  CaeArchitecture arch;
  LayerStack encoder;
  LayerStack decoder;
  Normalization norm;
  TrainMeta meta;
};

struct FfnnModel {
  FfnnArchitecture arch;
  LayerStack net;
  // Per-dimension affine map of raw parameters to [0, 1], frozen at training.
  std::vector<Scalar> param_lo;
  std::vector<Scalar> param_hi;
  TrainMeta meta;
};

/// Freshly initialized (untrained) models.
CaeModel init_cae(const CaeArchitecture& arch, std::uint64_t seed);
FfnnModel init_ffnn(const FfnnArchitecture& arch, std::uint64_t seed);

/// Dense layer stack for the parameter-to-latent network.
std::vector<LayerSpec> ffnn_specs(const FfnnArchitecture& arch);

LatentVector cae_encode(const Tensor<Scalar>& u, const CaeModel& model);
Tensor<Scalar> cae_decode(const LatentVector& z, const CaeModel& model);

LatentVector ffnn_apply(const std::vector<double>& theta,
                        const FfnnModel& model);

struct PredictResult {
  SolutionMatrix solution;
  bool theta_out_of_range = false;
};

/// decode(ffnn(scale(theta))). Out-of-range parameters are flagged, not
/// rejected. Latent widths of the two models must agree.
PredictResult predict(const std::vector<double>& theta, const FfnnModel& ffnn,
                      const CaeModel& cae);

/// Float32 view of a solution matrix, the precision the networks train on.
Tensor<Scalar> to_float(const Tensor<double>& values);

}  // namespace surrocae
