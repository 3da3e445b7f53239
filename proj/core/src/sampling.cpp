#include "surrocae/sampling.hpp"

#include <cmath>
#include <numeric>

#include "surrocae/errors.hpp"

namespace surrocae {

namespace {

void check_counts(std::size_t n, std::size_t dims) {
  if (n == 0) throw ConfigError("sampling: need at least one sample");
  if (dims == 0) throw ConfigError("sampling: need at least one dimension");
}

/// Stratified draw for stratum k of n: uniform inside [k/n, (k+1)/n), clamped
/// so the half-open stratum membership survives the division rounding.
double stratum_draw(std::size_t k, std::size_t n, double u) {
  const double nd = static_cast<double>(n);
  const double lo = static_cast<double>(k) / nd;
  const double hi = static_cast<double>(k + 1) / nd;
  double v = (static_cast<double>(k) + u) / nd;
  if (v < lo) v = lo;
  if (v >= hi) v = std::nextafter(hi, lo);
  return v;
}

/// Same contract in an affinely mapped range with edges r.lo + (k/n)*(r.hi-r.lo).
double stratum_draw_scaled(std::size_t k, std::size_t n, double u,
                           const ParamRange& r) {
  const double nd = static_cast<double>(n);
  const double width = r.hi - r.lo;
  const double lo = r.lo + (static_cast<double>(k) / nd) * width;
  const double hi = r.lo + (static_cast<double>(k + 1) / nd) * width;
  double x = r.lo + ((static_cast<double>(k) + u) / nd) * width;
  if (x < lo) x = lo;
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

std::vector<std::size_t> shuffled_strata(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);
  return perm;
}

}  // namespace

LognormalParams lognormal_params(double mean, double sd) {
  if (!(mean > 0.0) || !(sd > 0.0))
    throw ConfigError("lognormal: mean and sd must be positive");
  const double ratio = sd / mean;
  const double var_ln = std::log1p(ratio * ratio);
  return {std::log(mean) - 0.5 * var_ln, std::sqrt(var_ln)};
}

double normal_quantile(double p) {
  // Wichura's PPND16 rational approximations (AS 241), relative error below
  // 1e-15 across (0,1).
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("normal_quantile: p must lie strictly inside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e+0) *
                r +
            3.64784832476320460504e+0) *
               r +
           5.76949722146069140550e+0) *
              r +
          4.63033784615654529590e+0) *
             r +
         1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e+0) *
              r +
          2.05319162663775882187e+0) *
             r +
         1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e+0) *
              r +
          5.46378491116411436990e+0) *
             r +
         6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
  }
  return q < 0.0 ? -x : x;
}

Tensor<double> lhs_unit(std::size_t n, std::size_t dims, Rng& rng) {
  check_counts(n, dims);
  Tensor<double> design({n, dims});
  for (std::size_t d = 0; d < dims; ++d) {
    const auto perm = shuffled_strata(n, rng);
    for (std::size_t i = 0; i < n; ++i)
      design(i, d) = stratum_draw(perm[i], n, rng.next_double());
  }
  return design;
}

Tensor<double> lhs_sample(std::size_t n, const std::vector<ParamRange>& ranges,
                          Rng& rng) {
  check_counts(n, ranges.size());
  for (const auto& r : ranges)
    if (!(r.lo < r.hi))
      throw ConfigError("lhs_sample: range '" + r.name + "' needs lo < hi");
  Tensor<double> design({n, ranges.size()});
  for (std::size_t d = 0; d < ranges.size(); ++d) {
    const auto perm = shuffled_strata(n, rng);
    for (std::size_t i = 0; i < n; ++i)
      design(i, d) =
          stratum_draw_scaled(perm[i], n, rng.next_double(), ranges[d]);
  }
  return design;
}

Tensor<double> lhs_sample_lognormal(std::size_t n,
                                    const std::vector<LognormalSpec>& specs,
                                    Rng& rng) {
  check_counts(n, specs.size());
  std::vector<LognormalParams> params;
  params.reserve(specs.size());
  for (const auto& s : specs) params.push_back(lognormal_params(s.mean, s.sd));

  Tensor<double> design({n, specs.size()});
  for (std::size_t d = 0; d < specs.size(); ++d) {
    const auto perm = shuffled_strata(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      double v = stratum_draw(perm[i], n, rng.next_double());
      // Quantiles blow up at 0; the clamp is far below any stratum width
      // that matters (n would need to exceed 1e15).
      if (v <= 0.0) v = 1e-300;
      design(i, d) =
          std::exp(params[d].mu_ln + params[d].sigma_ln * normal_quantile(v));
    }
  }
  return design;
}

std::vector<double> sample_lognormal(double mean, double sd, std::size_t n,
                                     Rng& rng) {
  if (n == 0) throw ConfigError("sample_lognormal: need at least one sample");
  const auto p = lognormal_params(mean, sd);
  std::vector<double> out(n);
  for (auto& x : out) x = std::exp(p.mu_ln + p.sigma_ln * rng.normal());
  return out;
}

Tensor<double> sample_uniform(std::size_t n,
                              const std::vector<ParamRange>& ranges, Rng& rng) {
  check_counts(n, ranges.size());
  for (const auto& r : ranges)
    if (!(r.lo < r.hi))
      throw ConfigError("sample_uniform: range '" + r.name + "' needs lo < hi");
  Tensor<double> out({n, ranges.size()});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < ranges.size(); ++d)
      out(i, d) = rng.uniform(ranges[d].lo, ranges[d].hi);
  return out;
}

}  // namespace surrocae
