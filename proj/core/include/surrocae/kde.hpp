#pragma once

#include <cstddef>
#include <vector>

namespace surrocae {

struct KdeResult {
  /// Set when all samples coincide; density stays empty and location holds
  /// the common value.
  bool point_mass = false;
  double location = 0.0;
  double bandwidth = 0.0;
  std::vector<double> density;
};

/// Silverman's rule: 0.9 * min(sd, IQR/1.34) * n^(-1/5), falling back to the
/// sd alone when the IQR collapses. Returns 0 for zero-variance samples.
double silverman_bandwidth(const std::vector<double>& samples);

/// Uniform grid spanning the sample range widened by `pad` bandwidths on each
/// side.
std::vector<double> kde_grid(const std::vector<double>& samples,
                             double bandwidth, std::size_t points = 401,
                             double pad = 5.0);

/// Gaussian kernel density estimate on the given grid, Silverman bandwidth.
/// Requires at least 100 samples; degenerate samples flag a point mass.
KdeResult pdf_estimate(const std::vector<double>& samples,
                       const std::vector<double>& grid);

}  // namespace surrocae
