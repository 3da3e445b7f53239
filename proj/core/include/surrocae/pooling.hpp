#pragma once

#include <cstddef>
#include <vector>

#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae::nn {

// 1-d pooling over the last axis of a (channels,len) or (batch,channels,len)
// tensor. out_len = floor(len/window); a trailing remainder shorter than the
// window is dropped, so unpool(pool(x)) has length out_len*window, not len.

inline std::size_t pool1d_output_len(std::size_t in_len, std::size_t window) {
  if (window == 0) throw ConfigError("pool1d: window must be >= 1");
  if (in_len < window) throw ShapeError("pool1d: input shorter than window");
  return in_len / window;
}

template <typename T>
struct PoolCache {
  bool valid = false;
  std::size_t window = 0;
  std::vector<std::size_t> in_shape;
  std::vector<std::size_t> argmax;  // absolute last-axis index, max pooling only
};

namespace detail {
template <typename T>
struct PoolDims {
  std::size_t batch, channels, in_len, out_len, rows;
};

template <typename T>
PoolDims<T> pool_dims(const Tensor<T>& x, std::size_t window) {
  if (x.rank() != 2 && x.rank() != 3)
    throw ShapeError("pool1d: input rank must be 2 or 3");
  const bool batched = x.rank() == 3;
  PoolDims<T> d;
  d.batch = batched ? x.extent(0) : 1;
  d.channels = batched ? x.extent(1) : x.extent(0);
  d.in_len = batched ? x.extent(2) : x.extent(1);
  d.out_len = pool1d_output_len(d.in_len, window);
  d.rows = d.batch * d.channels;
  return d;
}

template <typename T>
std::vector<std::size_t> pooled_shape(const Tensor<T>& x, std::size_t len) {
  auto s = x.shape();
  s.back() = len;
  return s;
}
}  // namespace detail

template <typename T>
Tensor<T> avg_pool1d(const Tensor<T>& x, std::size_t window,
                     PoolCache<T>* cache = nullptr) {
  const auto d = detail::pool_dims(x, window);
  Tensor<T> y(detail::pooled_shape(x, d.out_len));
  for (std::size_t r = 0; r < d.rows; ++r) {
    const T* in = x.data() + r * d.in_len;
    T* out = y.data() + r * d.out_len;
    for (std::size_t j = 0; j < d.out_len; ++j) {
      T acc{0};
      for (std::size_t u = 0; u < window; ++u) acc += in[j * window + u];
      out[j] = acc / static_cast<T>(window);
    }
  }
  if (cache) {
    cache->valid = true;
    cache->window = window;
    cache->in_shape = x.shape();
    cache->argmax.clear();
  }
  return y;
}

template <typename T>
Tensor<T> avg_pool1d_backward(const Tensor<T>& grad_out, const PoolCache<T>& cache) {
  if (!cache.valid) throw StateError("avg_pool1d_backward: no forward cache");
  Tensor<T> gx(cache.in_shape);
  const std::size_t in_len = cache.in_shape.back();
  const std::size_t out_len = grad_out.shape().back();
  const std::size_t rows = gx.size() / in_len;
  if (grad_out.size() != rows * out_len)
    throw ShapeError("avg_pool1d_backward: grad_out has " + shape_string(grad_out));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < out_len; ++j) {
      const T share = grad_out[r * out_len + j] / static_cast<T>(cache.window);
      for (std::size_t u = 0; u < cache.window; ++u)
        gx[r * in_len + j * cache.window + u] = share;
    }
  return gx;
}

/// Replicates each value window times along the last axis.
template <typename T>
Tensor<T> avg_unpool1d(const Tensor<T>& x, std::size_t window) {
  if (window == 0) throw ConfigError("unpool1d: window must be >= 1");
  if (x.rank() != 2 && x.rank() != 3)
    throw ShapeError("unpool1d: input rank must be 2 or 3");
  const std::size_t in_len = x.shape().back();
  Tensor<T> y(detail::pooled_shape(x, in_len * window));
  const std::size_t rows = x.size() / in_len;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < in_len; ++j) {
      const T v = x[r * in_len + j];
      for (std::size_t u = 0; u < window; ++u)
        y[r * in_len * window + j * window + u] = v;
    }
  return y;
}

template <typename T>
Tensor<T> avg_unpool1d_backward(const Tensor<T>& grad_out, std::size_t window) {
  if (window == 0) throw ConfigError("unpool1d: window must be >= 1");
  const std::size_t out_len = grad_out.shape().back();
  if (out_len % window != 0)
    throw ShapeError("avg_unpool1d_backward: length not a multiple of window");
  const std::size_t in_len = out_len / window;
  Tensor<T> gx(detail::pooled_shape(grad_out, in_len));
  const std::size_t rows = gx.size() / in_len;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < in_len; ++j) {
      T acc{0};
      for (std::size_t u = 0; u < window; ++u)
        acc += grad_out[r * out_len + j * window + u];
      gx[r * in_len + j] = acc;
    }
  return gx;
}

/// Ties resolve to the lowest index.
template <typename T>
Tensor<T> max_pool1d(const Tensor<T>& x, std::size_t window, PoolCache<T>& cache) {
  const auto d = detail::pool_dims(x, window);
  Tensor<T> y(detail::pooled_shape(x, d.out_len));
  cache.valid = true;
  cache.window = window;
  cache.in_shape = x.shape();
  cache.argmax.assign(d.rows * d.out_len, 0);
  for (std::size_t r = 0; r < d.rows; ++r) {
    const T* in = x.data() + r * d.in_len;
    for (std::size_t j = 0; j < d.out_len; ++j) {
      std::size_t best = j * window;
      for (std::size_t u = 1; u < window; ++u)
        if (in[j * window + u] > in[best]) best = j * window + u;
      y[r * d.out_len + j] = in[best];
      cache.argmax[r * d.out_len + j] = best;
    }
  }
  return y;
}

template <typename T>
Tensor<T> max_pool1d_backward(const Tensor<T>& grad_out, const PoolCache<T>& cache) {
  if (!cache.valid || cache.argmax.empty())
    throw StateError("max_pool1d_backward: no forward cache");
  Tensor<T> gx(cache.in_shape);
  const std::size_t in_len = cache.in_shape.back();
  const std::size_t rows = gx.size() / in_len;
  const std::size_t out_len = cache.argmax.size() / rows;
  if (grad_out.size() != cache.argmax.size())
    throw ShapeError("max_pool1d_backward: grad_out has " + shape_string(grad_out));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < out_len; ++j)
      gx[r * in_len + cache.argmax[r * out_len + j]] += grad_out[r * out_len + j];
  return gx;
}

/// Scatters each value back to its recorded argmax position; other entries 0.
/// Output length is out_len*window (dropped remainder is not restored).
template <typename T>
Tensor<T> max_unpool1d(const Tensor<T>& x, const PoolCache<T>& cache) {
  if (!cache.valid || cache.argmax.empty())
    throw StateError("max_unpool1d: no matching max_pool1d cache");
  const std::size_t out_len = x.shape().back();
  const std::size_t rows = x.size() / out_len;
  if (cache.argmax.size() != x.size())
    throw ShapeError("max_unpool1d: input does not match cache");
  Tensor<T> y(detail::pooled_shape(x, out_len * cache.window));
  const std::size_t up_len = out_len * cache.window;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < out_len; ++j) {
      const std::size_t pos = cache.argmax[r * out_len + j];
      if (pos < up_len) y[r * up_len + pos] = x[r * out_len + j];
    }
  return y;
}

template <typename T>
Tensor<T> max_unpool1d_backward(const Tensor<T>& grad_out, const PoolCache<T>& cache) {
  if (!cache.valid || cache.argmax.empty())
    throw StateError("max_unpool1d_backward: no forward cache");
  const std::size_t up_len = grad_out.shape().back();
  if (up_len % cache.window != 0)
    throw ShapeError("max_unpool1d_backward: length not a multiple of window");
  const std::size_t out_len = up_len / cache.window;
  Tensor<T> gx(detail::pooled_shape(grad_out, out_len));
  const std::size_t rows = gx.size() / out_len;
  if (cache.argmax.size() != gx.size())
    throw ShapeError("max_unpool1d_backward: grad_out does not match cache");
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < out_len; ++j) {
      const std::size_t pos = cache.argmax[r * out_len + j];
      gx[r * out_len + j] = pos < up_len ? grad_out[r * up_len + pos] : T{0};
    }
  return gx;
}

}  // namespace surrocae::nn
