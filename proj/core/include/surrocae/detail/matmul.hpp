#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace surrocae::nn::detail {

// Accumulating products for the layer kernels. The reduction over k runs in
// strictly ascending order for every output element and every multiply-add is
// an explicit fused op, so rounding does not depend on compiler contraction
// settings. Vectorization happens across the independent j outputs, which
// keeps results identical to a plain scalar loop with the same iteration
// order, bit for bit.

/// One fused multiply-add; the single-rounding contract both the kernels and
/// the test oracles are written against.
template <typename T>
inline T madd(T a, T b, T acc) {
  return std::fma(a, b, acc);
}

/// C(m x n) += A(m x k) * B(k x n), all row-major contiguous.
template <typename T>
void matmul_accum(const T* a, const T* b, T* c, std::size_t m, std::size_t k,
                  std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    T* crow = c + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const T av = arow[kk];
      const T* brow = b + kk * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] = madd(av, brow[j], crow[j]);
    }
  }
}

/// C(m x n) += A^T * B with A stored (k x m) row-major.
template <typename T>
void matmul_accum_at(const T* a, const T* b, T* c, std::size_t m, std::size_t k,
                     std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const T av = a[kk * m + i];
      const T* brow = b + kk * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] = madd(av, brow[j], crow[j]);
    }
  }
}

/// out(n x m) = in(m x n) transposed, both row-major.
template <typename T>
void transpose(const T* in, T* out, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = in[i * n + j];
}

}  // namespace surrocae::nn::detail
