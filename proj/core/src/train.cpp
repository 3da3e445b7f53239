#include "surrocae/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "surrocae/adam.hpp"
#include "surrocae/errors.hpp"
#include "surrocae/loss.hpp"

namespace surrocae {
namespace {

void check_cfg(const TrainConfig& cfg, std::size_t n_samples) {
  if (cfg.epochs < 1) throw ConfigError("training needs at least one epoch");
  if (cfg.batch_size < 1 || cfg.batch_size > n_samples) {
    throw ConfigError("batch size must lie in [1, N], got " +
                      std::to_string(cfg.batch_size) + " for N = " +
                      std::to_string(n_samples));
  }
  if (!(cfg.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
}

std::string norms_of(const std::vector<Tensor<Scalar>*>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < params[i]->size(); ++j) {
      const double v = (*params[i])[j];
      s += v * v;
    }
    if (i) out += " ";
    out += std::to_string(std::sqrt(s));
  }
  return out;
}

/// Runs the shared epoch loop: batches are cut from a seeded shuffle, the
/// step callback does forward/backward/Adam and returns the batch loss.
template <typename Step>
LossHistory run_epochs(std::size_t n_samples, const TrainConfig& cfg,
                       Rng shuffle_rng, Step step) {
  std::vector<std::size_t> order(n_samples);
  std::iota(order.begin(), order.end(), 0);

  LossHistory history;
  history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n_samples; start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, n_samples - start);
      const double loss =
          step(std::span<const std::size_t>(order).subspan(start, count),
               epoch, start / cfg.batch_size);
      if (!std::isfinite(loss)) {
        throw TrainingError("training loss is not finite", epoch,
                            start / cfg.batch_size);
      }
      // The loss is a batch mean; weight it back to a per-sample total.
      epoch_loss += loss * static_cast<double>(count);
    }
    history.push_back(epoch_loss / static_cast<double>(n_samples));
  }
  return history;
}

}  // namespace

CaeModel train_cae(const Tensor<Scalar>& solutions, const CaeArchitecture& arch,
                   const TrainConfig& cfg, LossHistory* history) {
  if (solutions.rank() != 3) {
    throw ShapeError("train_cae: dataset must be (N, rows, cols), got " +
                     shape_string(solutions));
  }
  const std::size_t n = solutions.extent(0);
  const std::size_t rows = solutions.extent(1);
  const std::size_t cols = solutions.extent(2);
  if (rows != arch.input_rows || cols != arch.input_cols) {
    throw ShapeError("train_cae: samples are (" + std::to_string(rows) + ", " +
                     std::to_string(cols) + "), architecture wants (" +
                     std::to_string(arch.input_rows) + ", " +
                     std::to_string(arch.input_cols) + ")");
  }
  check_cfg(cfg, n);
  if (!solutions.all_finite()) {
    throw NumericError("train_cae: dataset contains non-finite values");
  }

  CaeModel model = init_cae(arch, cfg.seed);

  // Global min-max of the ensemble mapped to [-1, 1]. A constant dataset gets
  // scale 1 so the transform stays invertible.
  Scalar lo = solutions[0], hi = solutions[0];
  for (std::size_t i = 1; i < solutions.size(); ++i) {
    lo = std::min(lo, solutions[i]);
    hi = std::max(hi, solutions[i]);
  }
  model.norm.offset = (hi + lo) / 2.0f;
  model.norm.scale = hi > lo ? 2.0f / (hi - lo) : 1.0f;

  Tensor<Scalar> normalized(solutions.shape());
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    normalized[i] = (solutions[i] - model.norm.offset) * model.norm.scale;
  }

  std::vector<Tensor<Scalar>*> enc_params = model.encoder.parameters();
  std::vector<Tensor<Scalar>*> dec_params = model.decoder.parameters();
  std::vector<Tensor<Scalar>*> params = enc_params;
  params.insert(params.end(), dec_params.begin(), dec_params.end());

  nn::AdamState<Scalar> adam;
  adam.lr = static_cast<Scalar>(cfg.learning_rate);

  const std::size_t sample = rows * cols;
  auto step = [&](std::span<const std::size_t> batch, std::size_t epoch,
                  std::size_t batch_idx) {
    Tensor<Scalar> x({batch.size(), rows, cols});
    for (std::size_t s = 0; s < batch.size(); ++s) {
      std::copy_n(normalized.data() + batch[s] * sample, sample,
                  x.data() + s * sample);
    }
    StackTape enc_tape, dec_tape;
    Tensor<Scalar> z = model.encoder.forward(x, &enc_tape);
    Tensor<Scalar> y = model.decoder.forward(z, &dec_tape);
    nn::MseResult<Scalar> loss = nn::mse_loss(y, x);

    std::vector<Tensor<Scalar>> dec_grads, enc_grads;
    Tensor<Scalar> dz = model.decoder.backward(loss.grad, dec_tape, dec_grads);
    model.encoder.backward(dz, enc_tape, enc_grads);

    std::vector<const Tensor<Scalar>*> grads;
    for (const Tensor<Scalar>& g : enc_grads) grads.push_back(&g);
    for (const Tensor<Scalar>& g : dec_grads) grads.push_back(&g);
    try {
      nn::adam_step(std::span<Tensor<Scalar>* const>(params),
                    std::span<const Tensor<Scalar>* const>(grads), adam);
    } catch (const NumericError& e) {
      throw TrainingError(std::string(e.what()) + "; parameter norms: " +
                              norms_of(params),
                          epoch, batch_idx);
    }
    return static_cast<double>(loss.value);
  };

  LossHistory h = run_epochs(n, cfg, Rng(cfg.seed).substream(100), step);
  model.meta.epochs = cfg.epochs;
  model.meta.final_loss = h.back();
  if (history) *history = std::move(h);
  return model;
}

FfnnModel train_ffnn(const Tensor<Scalar>& params_raw,
                     const Tensor<Scalar>& latents,
                     const FfnnArchitecture& arch, const TrainConfig& cfg,
                     LossHistory* history) {
  if (params_raw.rank() != 2 || latents.rank() != 2) {
    throw ShapeError("train_ffnn: params and latents must be rank 2");
  }
  const std::size_t n = params_raw.extent(0);
  if (latents.extent(0) != n) {
    throw ShapeError("train_ffnn: " + std::to_string(n) + " parameter rows vs " +
                     std::to_string(latents.extent(0)) + " latent rows");
  }
  if (params_raw.extent(1) != arch.input_dim ||
      latents.extent(1) != arch.output_dim) {
    throw ShapeError("train_ffnn: data widths do not match the architecture");
  }
  check_cfg(cfg, n);
  if (!params_raw.all_finite() || !latents.all_finite()) {
    throw NumericError("train_ffnn: data contains non-finite values");
  }

  FfnnModel model = init_ffnn(arch, cfg.seed);

  const std::size_t dim = arch.input_dim;
  for (std::size_t j = 0; j < dim; ++j) {
    Scalar lo = params_raw(0, j), hi = params_raw(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, params_raw(i, j));
      hi = std::max(hi, params_raw(i, j));
    }
    model.param_lo[j] = lo;
    model.param_hi[j] = hi;
  }

  Tensor<Scalar> scaled(params_raw.shape());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const Scalar span = model.param_hi[j] - model.param_lo[j];
      scaled(i, j) =
          span > 0.0f ? (params_raw(i, j) - model.param_lo[j]) / span : 0.0f;
    }
  }

  std::vector<Tensor<Scalar>*> params = model.net.parameters();
  nn::AdamState<Scalar> adam;
  adam.lr = static_cast<Scalar>(cfg.learning_rate);

  const std::size_t l = arch.output_dim;
  auto step = [&](std::span<const std::size_t> batch, std::size_t epoch,
                  std::size_t batch_idx) {
    Tensor<Scalar> x({batch.size(), dim});
    Tensor<Scalar> t({batch.size(), l});
    for (std::size_t s = 0; s < batch.size(); ++s) {
      std::copy_n(scaled.data() + batch[s] * dim, dim, x.data() + s * dim);
      std::copy_n(latents.data() + batch[s] * l, l, t.data() + s * l);
    }
    StackTape tape;
    Tensor<Scalar> y = model.net.forward(x, &tape);
    nn::MseResult<Scalar> loss = nn::mse_loss(y, t);

    std::vector<Tensor<Scalar>> grads;
    model.net.backward(loss.grad, tape, grads);
    std::vector<const Tensor<Scalar>*> gptrs;
    for (const Tensor<Scalar>& g : grads) gptrs.push_back(&g);
    try {
      nn::adam_step(std::span<Tensor<Scalar>* const>(params),
                    std::span<const Tensor<Scalar>* const>(gptrs), adam);
    } catch (const NumericError& e) {
      throw TrainingError(std::string(e.what()) + "; parameter norms: " +
                              norms_of(params),
                          epoch, batch_idx);
    }
    return static_cast<double>(loss.value);
  };

  LossHistory h = run_epochs(n, cfg, Rng(cfg.seed).substream(101), step);
  model.meta.epochs = cfg.epochs;
  model.meta.final_loss = h.back();
  if (history) *history = std::move(h);
  return model;
}

Tensor<Scalar> encode_dataset(const Tensor<Scalar>& solutions,
                              const CaeModel& model) {
  if (solutions.rank() != 3) {
    throw ShapeError("encode_dataset: expected (N, rows, cols)");
  }
  const std::size_t n = solutions.extent(0);
  const std::size_t rows = solutions.extent(1);
  const std::size_t cols = solutions.extent(2);
  Tensor<Scalar> out({n, model.arch.latent_dim});
  for (std::size_t i = 0; i < n; ++i) {
    Tensor<Scalar> u({rows, cols});
    std::copy_n(solutions.data() + i * rows * cols, rows * cols, u.data());
    LatentVector z = cae_encode(u, model);
    std::copy(z.begin(), z.end(), out.data() + i * model.arch.latent_dim);
  }
  return out;
}

}  // namespace surrocae
