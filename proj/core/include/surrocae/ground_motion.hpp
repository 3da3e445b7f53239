#pragma once

#include <cstdint>
#include <string>

#include "surrocae/elasticity.hpp"

namespace surrocae {

/// Reads a two-column CSV "t,accel" (header row required, SI units). The time
/// column must be uniformly spaced; anything else is rejected.
GroundMotion load_ground_motion_csv(const std::string& path);

/// Writes the matching CSV, full double precision.
void save_ground_motion_csv(const GroundMotion& motion,
                            const std::string& path);

/// Deterministic broadband accelerogram: a sum of random-phase sinusoids
/// between 0.5 and 10 Hz under a rise/hold/decay envelope, normalized to the
/// requested peak acceleration.
GroundMotion synthetic_ground_motion(std::size_t n_steps, double dt,
                                     std::uint64_t seed,
                                     double peak_accel = 3.0);

}  // namespace surrocae
