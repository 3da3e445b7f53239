#include "surrocae/kde.hpp"

#include <algorithm>
#include <cmath>

#include "surrocae/errors.hpp"

namespace surrocae {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

/// Linear-interpolation quantile of a sorted vector (the common "type 7"
/// convention).
double sorted_quantile(const std::vector<double>& s, double p) {
  const double h = p * static_cast<double>(s.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= s.size()) return s.back();
  const double frac = h - static_cast<double>(lo);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

}  // namespace

double silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw ConfigError("silverman_bandwidth: need at least two samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);

  double scale = sd;
  if (iqr > 0.0) scale = std::min(sd, iqr / 1.34);
  return 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> kde_grid(const std::vector<double>& samples,
                             double bandwidth, std::size_t points, double pad) {
  if (samples.empty()) throw ConfigError("kde_grid: no samples");
  if (points < 2) throw ConfigError("kde_grid: need at least two grid points");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *mn - pad * bandwidth;
  const double hi = *mx + pad * bandwidth;
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + step * static_cast<double>(i);
  return grid;
}

KdeResult pdf_estimate(const std::vector<double>& samples,
                       const std::vector<double>& grid) {
  if (samples.size() < 100)
    throw ConfigError("pdf_estimate: need at least 100 samples");
  if (grid.empty()) throw ConfigError("pdf_estimate: empty grid");

  KdeResult result;
  result.bandwidth = silverman_bandwidth(samples);
  if (result.bandwidth <= 0.0) {
    result.point_mass = true;
    result.location = samples.front();
    return result;
  }

  const double inv_h = 1.0 / result.bandwidth;
  const double norm =
      kInvSqrt2Pi * inv_h / static_cast<double>(samples.size());
  result.density.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : samples) {
      const double t = (grid[g] - x) * inv_h;
      acc += std::exp(-0.5 * t * t);
    }
    result.density[g] = norm * acc;
  }
  return result;
}

}  // namespace surrocae
