#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae::nn {

/// First/second moment estimates for one parameter set, plus hyperparameters.
/// Moments start at zero and the step counter at 0; updates use the standard
/// bias-corrected estimates.
template <typename T>
struct AdamState {
  T lr = T{1e-3};
  T beta1 = T{0.9};
  T beta2 = T{0.999};
  T eps = T{1e-8};
  std::int64_t step = 0;
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;

  void reset(std::span<Tensor<T>* const> params) {
    step = 0;
    m.clear();
    v.clear();
    for (const Tensor<T>* p : params) {
      m.emplace_back(p->shape());
      v.emplace_back(p->shape());
    }
  }
};

template <typename T>
void adam_step(std::span<Tensor<T>* const> params,
               std::span<const Tensor<T>* const> grads, AdamState<T>& state) {
  if (params.size() != grads.size())
    throw ShapeError("adam_step: params/grads count mismatch");
  if (state.m.empty() && state.step == 0) state.reset(params);
  if (state.m.size() != params.size())
    throw StateError("adam_step: state initialized for a different parameter set");

  ++state.step;
  const T c1 = T{1} - std::pow(state.beta1, static_cast<T>(state.step));
  const T c2 = T{1} - std::pow(state.beta2, static_cast<T>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<T>& p = *params[i];
    const Tensor<T>& g = *grads[i];
    if (!p.same_shape(state.m[i]) || !p.same_shape(g))
      throw ShapeError("adam_step: parameter " + std::to_string(i) + " shape mismatch");
    if (!g.all_finite())
      throw NumericError("adam_step: non-finite gradient in parameter " +
                         std::to_string(i));
    Tensor<T>& m = state.m[i];
    Tensor<T>& v = state.v[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = state.beta1 * m[j] + (T{1} - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (T{1} - state.beta2) * g[j] * g[j];
      const T mhat = m[j] / c1;
      const T vhat = v[j] / c2;
      p[j] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace surrocae::nn
