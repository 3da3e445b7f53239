#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "surrocae/errors.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae {

/// One-pass mean/variance accumulator (Welford update, Chan merge). merge()
/// lets per-thread partials combine associatively, so streamed statistics do
/// not depend on chunk boundaries beyond floating-point rounding.
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const;
  /// Unbiased sample variance; requires count >= 2.
  double variance() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Entrywise RunningStats over equally-shaped matrices. The first push fixes
/// the shape; the full ensemble is never stored.
class MatrixStats {
 public:
  template <typename T>
  void push(const Tensor<T>& u);
  void merge(const MatrixStats& other);

  std::size_t count() const { return n_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  Tensor<double> mean() const;
  /// Unbiased sample variance, entrywise; requires count >= 2.
  Tensor<double> variance() const;

 private:
  std::vector<std::size_t> shape_;
  std::size_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

template <typename T>
void MatrixStats::push(const Tensor<T>& u) {
  if (n_ == 0 && shape_.empty()) {
    shape_ = u.shape();
    mean_.assign(u.size(), 0.0);
    m2_.assign(u.size(), 0.0);
  } else if (u.shape() != shape_) {
    throw ShapeError("MatrixStats: sample shape " + shape_string(u) +
                     " differs from stream shape");
  }
  ++n_;
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double x = static_cast<double>(u[i]);
    const double delta = x - mean_[i];
    mean_[i] += delta * inv_n;
    m2_[i] += delta * (x - mean_[i]);
  }
}

/// ||ref - sur||_F / ||ref||_F accumulated in double regardless of T.
template <typename TA, typename TB>
double normalized_error(const Tensor<TA>& ref, const Tensor<TB>& sur) {
  if (ref.shape() != sur.shape())
    throw ShapeError("normalized_error: shapes " + shape_string(ref) +
                     " vs " + shape_string(sur));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double r = static_cast<double>(ref[i]);
    const double d = r - static_cast<double>(sur[i]);
    num += d * d;
    den += r * r;
  }
  if (den == 0.0)
    throw NumericError("normalized_error: reference norm is zero");
  return std::sqrt(num / den);
}

template <typename TA, typename TB>
double average_normalized_error(std::span<const Tensor<TA>> refs,
                                std::span<const Tensor<TB>> surs) {
  if (refs.size() != surs.size() || refs.empty())
    throw ShapeError("average_normalized_error: need equal-length, non-empty lists");
  double acc = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i)
    acc += normalized_error(refs[i], surs[i]);
  return acc / static_cast<double>(refs.size());
}

}  // namespace surrocae
