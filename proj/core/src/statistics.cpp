#include "surrocae/statistics.hpp"

namespace surrocae {

void RunningStats::push(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double nt = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * (nb / nt);
  m2_ += other.m2_ + delta * delta * (na * nb / nt);
  n_ += other.n_;
}

double RunningStats::mean() const {
  if (n_ == 0) throw StateError("RunningStats: mean of an empty stream");
  return mean_;
}

double RunningStats::variance() const {
  if (n_ < 2) throw StateError("RunningStats: variance needs at least two samples");
  return m2_ / static_cast<double>(n_ - 1);
}

void MatrixStats::merge(const MatrixStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  if (other.shape_ != shape_)
    throw ShapeError("MatrixStats: cannot merge differently shaped streams");
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double nt = na + nb;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * (nb / nt);
    m2_[i] += other.m2_[i] + delta * delta * (na * nb / nt);
  }
  n_ += other.n_;
}

Tensor<double> MatrixStats::mean() const {
  if (n_ == 0) throw StateError("MatrixStats: mean of an empty stream");
  return Tensor<double>(shape_, mean_);
}

Tensor<double> MatrixStats::variance() const {
  if (n_ < 2) throw StateError("MatrixStats: variance needs at least two samples");
  std::vector<double> v(m2_.size());
  const double inv = 1.0 / static_cast<double>(n_ - 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2_[i] * inv;
  return Tensor<double>(shape_, std::move(v));
}

}  // namespace surrocae
