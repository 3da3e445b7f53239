#pragma once

#include <vector>

#include "surrocae/model.hpp"

namespace surrocae {

/// Per-epoch mean training loss (sum of squared Frobenius distances over the
/// batch count, averaged across batches weighted by batch size).
using LossHistory = std::vector<double>;

/// Mini-batch Adam on the reconstruction loss. solutions is (N, rows, cols).
/// Normalization constants (global min-max of the ensemble to [-1, 1]) are
/// computed here and frozen into the model. Deterministic for a fixed
/// (solutions, arch, cfg) triple.
CaeModel train_cae(const Tensor<Scalar>& solutions, const CaeArchitecture& arch,
                   const TrainConfig& cfg, LossHistory* history = nullptr);

/// Adam on the latent regression MSE. params is (N, n), latents (N, l).
/// Per-dimension parameter min/max are frozen into the model; training runs
/// on parameters scaled to [0, 1].
FfnnModel train_ffnn(const Tensor<Scalar>& params, const Tensor<Scalar>& latents,
                     const FfnnArchitecture& arch, const TrainConfig& cfg,
                     LossHistory* history = nullptr);

/// Encodes every sample of (N, rows, cols) into a row of (N, latent).
Tensor<Scalar> encode_dataset(const Tensor<Scalar>& solutions,
                              const CaeModel& model);

}  // namespace surrocae
