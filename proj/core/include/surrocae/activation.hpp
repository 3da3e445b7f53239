#pragma once

#include <cmath>

#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae::nn {

enum class Activation { linear, relu, tanh };

template <typename T>
inline T activate(Activation a, T pre) {
  switch (a) {
    case Activation::linear: return pre;
    case Activation::relu: return pre > T{0} ? pre : T{0};
    case Activation::tanh: return std::tanh(pre);
  }
  throw ConfigError("unknown activation");
}

/// Derivative as a function of the pre-activation value. ReLU at exactly 0
/// uses the subgradient 0.
template <typename T>
inline T activate_grad(Activation a, T pre) {
  switch (a) {
    case Activation::linear: return T{1};
    case Activation::relu: return pre > T{0} ? T{1} : T{0};
    case Activation::tanh: {
      const T t = std::tanh(pre);
      return T{1} - t * t;
    }
  }
  throw ConfigError("unknown activation");
}

template <typename T>
inline Tensor<T> activate(Activation a, const Tensor<T>& pre) {
  if (a == Activation::linear) return pre;
  Tensor<T> out = pre;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = activate(a, out[i]);
  return out;
}

}  // namespace surrocae::nn
