#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "surrocae/rng.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae {

struct ParamRange {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
};

/// Log-normal specified by the moments of the distribution itself, not of the
/// underlying normal.
struct LognormalSpec {
  std::string name;
  double mean = 1.0;
  double sd = 1.0;
};

struct LognormalParams {
  double mu_ln;
  double sigma_ln;
};

/// Underlying normal parameters that reproduce the requested mean and sd.
LognormalParams lognormal_params(double mean, double sd);

/// Inverse standard normal CDF, accurate to close to machine precision over
/// (0,1). Out-of-range p throws.
double normal_quantile(double p);

/// n x dims design on the unit cube. Per dimension, row values occupy the n
/// strata [k/n, (k+1)/n) exactly once, with the stratum edges taken as those
/// double-precision quotients; pairing across dimensions is by seeded random
/// permutation.
Tensor<double> lhs_unit(std::size_t n, std::size_t dims, Rng& rng);

/// Unit design mapped to physical ranges. One sample lands in each of the n
/// strata whose edges are lo + (k/n)*(hi-lo) evaluated in double precision.
Tensor<double> lhs_sample(std::size_t n, const std::vector<ParamRange>& ranges,
                          Rng& rng);

/// Unit design pushed through the log-normal quantile transform per dimension.
/// Stratification carries over to the log-normal quantiles.
Tensor<double> lhs_sample_lognormal(std::size_t n,
                                    const std::vector<LognormalSpec>& specs,
                                    Rng& rng);

/// Independent draws with distribution mean/sd equal to the inputs.
std::vector<double> sample_lognormal(double mean, double sd, std::size_t n,
                                     Rng& rng);

/// Independent uniform draws over the box, one row per sample.
Tensor<double> sample_uniform(std::size_t n,
                              const std::vector<ParamRange>& ranges, Rng& rng);

}  // namespace surrocae
