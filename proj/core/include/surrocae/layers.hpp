#pragma once

#include <cstddef>
#include <vector>

#include "surrocae/activation.hpp"
#include "surrocae/detail/matmul.hpp"
#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae::nn {

// Layer kernels. Inputs may carry a leading batch axis: dense accepts (in) or
// (batch,in), the 1-d convolution family accepts (channels,len) or
// (batch,channels,len). Forward passes fill a cache consumed by the matching
// backward pass; calling backward with an unfilled or stale cache throws
// StateError.

// ---------------------------------------------------------------------------
// Dense

template <typename T>
struct DenseLayer {
  Tensor<T> weights;  // (out, in)
  Tensor<T> bias;     // (out)
  Activation act = Activation::linear;

  std::size_t in_features() const { return weights.extent(1); }
  std::size_t out_features() const { return weights.extent(0); }
};

template <typename T>
struct DenseCache {
  bool valid = false;
  Tensor<T> input;   // as passed, (in) or (batch,in)
  Tensor<T> preact;  // (batch,out)
};

template <typename T>
struct DenseGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
void check_dense(const DenseLayer<T>& layer) {
  if (layer.weights.rank() != 2 || layer.bias.rank() != 1 ||
      layer.bias.extent(0) != layer.weights.extent(0))
    throw ShapeError("dense: weights must be (out,in) with bias (out)");
}

/// y = act(W x + b), rows of a batched input treated as independent samples.
template <typename T>
Tensor<T> dense_forward(const Tensor<T>& x, const DenseLayer<T>& layer,
                        DenseCache<T>* cache = nullptr) {
  check_dense(layer);
  const bool batched = x.rank() == 2;
  if (!batched && x.rank() != 1) throw ShapeError("dense: input rank must be 1 or 2");
  const std::size_t in = layer.in_features(), out = layer.out_features();
  const std::size_t b = batched ? x.extent(0) : 1;
  if ((batched ? x.extent(1) : x.extent(0)) != in)
    throw ShapeError("dense: input has " + shape_string(x) + ", layer expects in=" +
                     std::to_string(in));

  // pre^T = W * x^T keeps both matmul operands row-major contiguous.
  std::vector<T> xt(in * b);
  detail::transpose(x.data(), xt.data(), b, in);
  std::vector<T> pret(out * b, T{0});
  detail::matmul_accum(layer.weights.data(), xt.data(), pret.data(), out, in, b);

  Tensor<T> pre({b, out});
  detail::transpose(pret.data(), pre.data(), out, b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < out; ++j) pre(i, j) += layer.bias[j];

  Tensor<T> y = activate(layer.act, pre);
  if (cache) {
    cache->valid = true;
    cache->input = x;
    cache->preact = std::move(pre);
  }
  return batched ? y : y.reshaped({out});
}

template <typename T>
DenseGrads<T> dense_backward(const Tensor<T>& grad_out, const DenseLayer<T>& layer,
                             const DenseCache<T>& cache) {
  check_dense(layer);
  if (!cache.valid) throw StateError("dense_backward: no forward cache");
  const std::size_t in = layer.in_features(), out = layer.out_features();
  const std::size_t b = cache.preact.extent(0);
  if (grad_out.size() != b * out)
    throw ShapeError("dense_backward: grad_out has " + shape_string(grad_out));

  Tensor<T> dpre({b, out});
  for (std::size_t i = 0; i < b * out; ++i)
    dpre[i] = grad_out[i] * activate_grad(layer.act, cache.preact[i]);

  DenseGrads<T> g;
  g.bias = Tensor<T>({out});
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < out; ++j) g.bias[j] += dpre(i, j);

  const Tensor<T> x2 = cache.input.rank() == 1
                           ? cache.input.reshaped({1, cache.input.extent(0)})
                           : cache.input;
  g.weights = Tensor<T>({out, in});
  detail::matmul_accum_at(dpre.data(), x2.data(), g.weights.data(), out, b, in);

  Tensor<T> gx({b, in});
  detail::matmul_accum(dpre.data(), layer.weights.data(), gx.data(), b, out, in);
  g.input = cache.input.rank() == 1 ? gx.reshaped({in}) : std::move(gx);
  return g;
}

// ---------------------------------------------------------------------------
// Conv1d

inline std::size_t conv1d_output_len(std::size_t in_len, std::size_t kernel,
                                     std::size_t stride, std::size_t padding) {
  if (stride == 0) throw ConfigError("conv1d: stride must be >= 1");
  if (in_len + 2 * padding < kernel)
    throw ShapeError("conv1d: kernel longer than padded input");
  return (in_len + 2 * padding - kernel) / stride + 1;
}

template <typename T>
struct Conv1dLayer {
  Tensor<T> filters;  // (n_filters, in_channels, kernel)
  Tensor<T> bias;     // (n_filters)
  std::size_t stride = 1;
  std::size_t padding = 0;  // symmetric zero padding
  Activation act = Activation::linear;

  std::size_t n_filters() const { return filters.extent(0); }
  std::size_t in_channels() const { return filters.extent(1); }
  std::size_t kernel() const { return filters.extent(2); }
};

template <typename T>
struct ConvCache {
  bool valid = false;
  std::vector<std::size_t> in_shape;
  Tensor<T> col;     // (batch, in_channels*kernel, out_len)
  Tensor<T> preact;  // (batch, n_filters, out_len)
};

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> filters;
  Tensor<T> bias;
};

template <typename T>
void check_conv(const Conv1dLayer<T>& layer) {
  if (layer.filters.rank() != 3 || layer.bias.rank() != 1 ||
      layer.bias.extent(0) != layer.filters.extent(0))
    throw ShapeError("conv1d: filters must be (n_f,c_in,k) with bias (n_f)");
  if (layer.stride == 0) throw ConfigError("conv1d: stride must be >= 1");
}

namespace detail {

/// Gathers padded windows: col[(c*K+u), j] = x[c][j*stride + u - padding].
template <typename T>
void im2col(const T* x, T* col, std::size_t channels, std::size_t in_len,
            std::size_t kernel, std::size_t stride, std::size_t padding,
            std::size_t out_len) {
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t u = 0; u < kernel; ++u) {
      T* row = col + (c * kernel + u) * out_len;
      for (std::size_t j = 0; j < out_len; ++j) {
        const std::ptrdiff_t pos =
            static_cast<std::ptrdiff_t>(j * stride + u) - static_cast<std::ptrdiff_t>(padding);
        row[j] = (pos >= 0 && pos < static_cast<std::ptrdiff_t>(in_len))
                     ? x[c * in_len + pos]
                     : T{0};
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, T* x, std::size_t channels, std::size_t in_len,
                std::size_t kernel, std::size_t stride, std::size_t padding,
                std::size_t out_len) {
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t u = 0; u < kernel; ++u) {
      const T* row = col + (c * kernel + u) * out_len;
      for (std::size_t j = 0; j < out_len; ++j) {
        const std::ptrdiff_t pos =
            static_cast<std::ptrdiff_t>(j * stride + u) - static_cast<std::ptrdiff_t>(padding);
        if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(in_len))
          x[c * in_len + pos] += row[j];
      }
    }
  }
}

}  // namespace detail

template <typename T>
Tensor<T> conv1d_forward(const Tensor<T>& x, const Conv1dLayer<T>& layer,
                         ConvCache<T>* cache = nullptr) {
  check_conv(layer);
  const bool batched = x.rank() == 3;
  if (!batched && x.rank() != 2)
    throw ShapeError("conv1d: input rank must be 2 or 3");
  const std::size_t b = batched ? x.extent(0) : 1;
  const std::size_t c_in = layer.in_channels(), kernel = layer.kernel();
  const std::size_t in_ch = batched ? x.extent(1) : x.extent(0);
  const std::size_t in_len = batched ? x.extent(2) : x.extent(1);
  if (in_ch != c_in)
    throw ShapeError("conv1d: input channels " + std::to_string(in_ch) +
                     " != filter channels " + std::to_string(c_in));
  const std::size_t n_f = layer.n_filters();
  const std::size_t out_len =
      conv1d_output_len(in_len, kernel, layer.stride, layer.padding);
  const std::size_t ck = c_in * kernel;

  Tensor<T> col({b, ck, out_len});
  Tensor<T> pre({b, n_f, out_len});
  for (std::size_t s = 0; s < b; ++s) {
    T* cols = col.data() + s * ck * out_len;
    detail::im2col(x.data() + s * c_in * in_len, cols, c_in, in_len, kernel,
                   layer.stride, layer.padding, out_len);
    T* pres = pre.data() + s * n_f * out_len;
    detail::matmul_accum(layer.filters.data(), cols, pres, n_f, ck, out_len);
    for (std::size_t f = 0; f < n_f; ++f)
      for (std::size_t j = 0; j < out_len; ++j) pres[f * out_len + j] += layer.bias[f];
  }

  Tensor<T> y = activate(layer.act, pre);
  if (cache) {
    cache->valid = true;
    cache->in_shape = x.shape();
    cache->col = std::move(col);
    cache->preact = std::move(pre);
  }
  return batched ? y : y.reshaped({n_f, out_len});
}

template <typename T>
ConvGrads<T> conv1d_backward(const Tensor<T>& grad_out, const Conv1dLayer<T>& layer,
                             const ConvCache<T>& cache) {
  check_conv(layer);
  if (!cache.valid) throw StateError("conv1d_backward: no forward cache");
  const std::size_t b = cache.preact.extent(0);
  const std::size_t n_f = layer.n_filters(), kernel = layer.kernel();
  const std::size_t c_in = layer.in_channels(), ck = c_in * kernel;
  const std::size_t out_len = cache.preact.extent(2);
  const bool batched = cache.in_shape.size() == 3;
  const std::size_t in_len = cache.in_shape[batched ? 2 : 1];
  if (grad_out.size() != b * n_f * out_len)
    throw ShapeError("conv1d_backward: grad_out has " + shape_string(grad_out));

  Tensor<T> dpre({b, n_f, out_len});
  for (std::size_t i = 0; i < dpre.size(); ++i)
    dpre[i] = grad_out[i] * activate_grad(layer.act, cache.preact[i]);

  ConvGrads<T> g;
  g.bias = Tensor<T>({n_f});
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t f = 0; f < n_f; ++f)
      for (std::size_t j = 0; j < out_len; ++j) g.bias[f] += dpre(s, f, j);

  g.filters = Tensor<T>({n_f, c_in, kernel});
  g.input = Tensor<T>(cache.in_shape);
  std::vector<T> colt(out_len * ck);
  std::vector<T> dcol(ck * out_len);
  for (std::size_t s = 0; s < b; ++s) {
    const T* cols = cache.col.data() + s * ck * out_len;
    const T* dpres = dpre.data() + s * n_f * out_len;
    detail::transpose(cols, colt.data(), ck, out_len);
    detail::matmul_accum(dpres, colt.data(), g.filters.data(), n_f, out_len, ck);
    std::fill(dcol.begin(), dcol.end(), T{0});
    detail::matmul_accum_at(layer.filters.data(), dpres, dcol.data(), ck, n_f, out_len);
    detail::col2im_add(dcol.data(), g.input.data() + s * c_in * in_len, c_in, in_len,
                       kernel, layer.stride, layer.padding, out_len);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Deconv1d (transposed convolution)

inline std::size_t deconv1d_output_len(std::size_t in_len, std::size_t kernel,
                                       std::size_t stride, std::size_t crop) {
  if (stride == 0) throw ConfigError("deconv1d: stride must be >= 1");
  const std::size_t natural = (in_len - 1) * stride + kernel;
  if (crop >= natural) throw ShapeError("deconv1d: crop consumes entire output");
  return natural - crop;
}

template <typename T>
struct Deconv1dLayer {
  Tensor<T> filters;  // (in_channels, out_channels, kernel)
  Tensor<T> bias;     // (out_channels)
  std::size_t stride = 1;
  std::size_t crop = 0;  // trailing positions removed from the scatter output
  Activation act = Activation::linear;

  std::size_t in_channels() const { return filters.extent(0); }
  std::size_t out_channels() const { return filters.extent(1); }
  std::size_t kernel() const { return filters.extent(2); }
};

template <typename T>
struct DeconvCache {
  bool valid = false;
  std::vector<std::size_t> in_shape;
  Tensor<T> input;   // (batch, c_in, in_len)
  Tensor<T> preact;  // (batch, c_out, out_len)
};

template <typename T>
struct DeconvGrads {
  Tensor<T> input;
  Tensor<T> filters;
  Tensor<T> bias;
};

template <typename T>
void check_deconv(const Deconv1dLayer<T>& layer) {
  if (layer.filters.rank() != 3 || layer.bias.rank() != 1 ||
      layer.bias.extent(0) != layer.filters.extent(1))
    throw ShapeError("deconv1d: filters must be (c_in,c_out,k) with bias (c_out)");
  if (layer.stride == 0) throw ConfigError("deconv1d: stride must be >= 1");
}

/// Each input value scatters a filter-weighted copy into the output at stride
/// offsets; overlapping contributions add. With the filters of a padding-0
/// conv1d (axes transposed) this is that convolution's exact linear adjoint.
template <typename T>
Tensor<T> deconv1d_forward(const Tensor<T>& x, const Deconv1dLayer<T>& layer,
                           DeconvCache<T>* cache = nullptr) {
  check_deconv(layer);
  const bool batched = x.rank() == 3;
  if (!batched && x.rank() != 2)
    throw ShapeError("deconv1d: input rank must be 2 or 3");
  const std::size_t b = batched ? x.extent(0) : 1;
  const std::size_t c_in = layer.in_channels(), c_out = layer.out_channels();
  const std::size_t kernel = layer.kernel();
  const std::size_t in_ch = batched ? x.extent(1) : x.extent(0);
  const std::size_t in_len = batched ? x.extent(2) : x.extent(1);
  if (in_ch != c_in)
    throw ShapeError("deconv1d: input channels " + std::to_string(in_ch) +
                     " != filter channels " + std::to_string(c_in));
  const std::size_t out_len =
      deconv1d_output_len(in_len, kernel, layer.stride, layer.crop);
  const std::size_t cok = c_out * kernel;

  Tensor<T> pre({b, c_out, out_len});
  std::vector<T> tmp(cok * in_len);
  for (std::size_t s = 0; s < b; ++s) {
    const T* xs = x.data() + s * c_in * in_len;
    std::fill(tmp.begin(), tmp.end(), T{0});
    detail::matmul_accum_at(layer.filters.data(), xs, tmp.data(), cok, c_in, in_len);
    T* pres = pre.data() + s * c_out * out_len;
    for (std::size_t j = 0; j < in_len; ++j)
      for (std::size_t co = 0; co < c_out; ++co)
        for (std::size_t u = 0; u < kernel; ++u) {
          const std::size_t p = j * layer.stride + u;
          if (p < out_len) pres[co * out_len + p] += tmp[(co * kernel + u) * in_len + j];
        }
    for (std::size_t co = 0; co < c_out; ++co)
      for (std::size_t p = 0; p < out_len; ++p) pres[co * out_len + p] += layer.bias[co];
  }

  Tensor<T> y = activate(layer.act, pre);
  if (cache) {
    cache->valid = true;
    cache->in_shape = x.shape();
    cache->input = batched ? x : x.reshaped({1, c_in, in_len});
    cache->preact = std::move(pre);
  }
  return batched ? y : y.reshaped({c_out, out_len});
}

template <typename T>
DeconvGrads<T> deconv1d_backward(const Tensor<T>& grad_out,
                                 const Deconv1dLayer<T>& layer,
                                 const DeconvCache<T>& cache) {
  check_deconv(layer);
  if (!cache.valid) throw StateError("deconv1d_backward: no forward cache");
  const std::size_t b = cache.preact.extent(0);
  const std::size_t c_in = layer.in_channels(), c_out = layer.out_channels();
  const std::size_t kernel = layer.kernel(), cok = c_out * kernel;
  const std::size_t out_len = cache.preact.extent(2);
  const std::size_t in_len = cache.input.extent(2);
  if (grad_out.size() != b * c_out * out_len)
    throw ShapeError("deconv1d_backward: grad_out has " + shape_string(grad_out));

  Tensor<T> dpre({b, c_out, out_len});
  for (std::size_t i = 0; i < dpre.size(); ++i)
    dpre[i] = grad_out[i] * activate_grad(layer.act, cache.preact[i]);

  DeconvGrads<T> g;
  g.bias = Tensor<T>({c_out});
  for (std::size_t s = 0; s < b; ++s)
    for (std::size_t co = 0; co < c_out; ++co)
      for (std::size_t p = 0; p < out_len; ++p) g.bias[co] += dpre(s, co, p);

  g.filters = Tensor<T>({c_in, c_out, kernel});
  g.input = Tensor<T>({b, c_in, in_len});
  std::vector<T> tmpg(cok * in_len);
  std::vector<T> tmpgt(in_len * cok);
  for (std::size_t s = 0; s < b; ++s) {
    const T* dpres = dpre.data() + s * c_out * out_len;
    for (std::size_t co = 0; co < c_out; ++co)
      for (std::size_t u = 0; u < kernel; ++u)
        for (std::size_t j = 0; j < in_len; ++j) {
          const std::size_t p = j * layer.stride + u;
          tmpg[(co * kernel + u) * in_len + j] =
              p < out_len ? dpres[co * out_len + p] : T{0};
        }
    const T* xs = cache.input.data() + s * c_in * in_len;
    detail::transpose(tmpg.data(), tmpgt.data(), cok, in_len);
    detail::matmul_accum(xs, tmpgt.data(), g.filters.data(), c_in, in_len, cok);
    detail::matmul_accum(layer.filters.data(), tmpg.data(),
                         g.input.data() + s * c_in * in_len, c_in, cok, in_len);
  }
  if (cache.in_shape.size() == 2) g.input = g.input.reshaped(cache.in_shape);
  return g;
}

}  // namespace surrocae::nn
