#pragma once

#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae::nn {

template <typename T>
struct MseResult {
  T value;
  Tensor<T> grad;  // d(value)/d(pred), same shape as pred
};

/// Batch-mean of squared L2 distances: sum over all entries of (pred-target)^2
/// divided by the batch count. The first axis is the batch axis for rank 2 and
/// rank 3 tensors; a rank-1 tensor is a single sample.
template <typename T>
MseResult<T> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  if (!pred.same_shape(target))
    throw ShapeError("mse_loss: pred " + shape_string(pred) + " vs target " +
                     shape_string(target));
  const T n = static_cast<T>(pred.rank() >= 2 ? pred.extent(0) : 1);
  MseResult<T> r{T{0}, Tensor<T>(pred.shape())};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const T d = pred[i] - target[i];
    r.value += d * d;
    r.grad[i] = T{2} * d / n;
  }
  r.value /= n;
  return r;
}

}  // namespace surrocae::nn
