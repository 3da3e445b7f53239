#include "surrocae/rng.hpp"

#include <cmath>
#include <numbers>

#include "surrocae/errors.hpp"

namespace surrocae {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ShapeError("Rng::below: n must be positive");
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

double Rng::normal() {
  // u1 shifted into (0,1] so the log is finite.
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace surrocae
