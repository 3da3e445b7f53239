#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "surrocae/errors.hpp"

namespace surrocae::detail {

/// Thomas algorithm for a tridiagonal system, no pivoting; callers must pass
/// diagonally dominant systems. sub[i] multiplies x[i-1] in row i (sub[0]
/// unused), super[i] multiplies x[i+1] in row i (super[n-1] unused). All
/// spans length n; scratch buffers are overwritten.
inline void solve_tridiagonal(std::span<const double> sub,
                              std::span<const double> diag,
                              std::span<const double> super,
                              std::span<const double> rhs,
                              std::span<double> scratch_c,
                              std::span<double> scratch_d,
                              std::span<double> out) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() != n || super.size() != n || rhs.size() != n ||
      scratch_c.size() != n || scratch_d.size() != n || out.size() != n)
    throw ShapeError("solve_tridiagonal: inconsistent span lengths");

  double pivot = diag[0];
  if (pivot == 0.0) throw NumericError("solve_tridiagonal: zero pivot at row 0");
  scratch_c[0] = super[0] / pivot;
  scratch_d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - sub[i] * scratch_c[i - 1];
    if (pivot == 0.0)
      throw NumericError("solve_tridiagonal: zero pivot at row " + std::to_string(i));
    scratch_c[i] = super[i] / pivot;
    scratch_d[i] = (rhs[i] - sub[i] * scratch_d[i - 1]) / pivot;
  }
  out[n - 1] = scratch_d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    out[i] = scratch_d[i] - scratch_c[i] * out[i + 1];
}

}  // namespace surrocae::detail
