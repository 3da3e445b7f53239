#pragma once

#include <cstddef>
#include <vector>

#include "surrocae/solution.hpp"

namespace surrocae {

/// 1-D viscous Burgers problem on [x_min, x_max] x [0, t_max] with
/// u(x,0) = -sin(pi x) and homogeneous Dirichlet boundaries. Grid point
/// counts are authoritative; dx and dt derive from them.
struct BurgersConfig {
  double nu = 0.5;
  double x_min = -1.0;
  double x_max = 1.0;
  double t_max = 5.0;
  std::size_t n_x = 200;
  std::size_t n_t = 100;
  /// Viscosities below this are clamped (and flagged) to keep the implicit
  /// stepper solvable; the inviscid limit forms shocks this scheme does not
  /// represent.
  double nu_min = 1e-3;
  double picard_tol = 1e-10;
  std::size_t max_picard = 50;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
  double dt() const { return t_max / static_cast<double>(n_t - 1); }
};

struct BurgersResult {
  SolutionMatrix solution;  // n_x rows, n_t columns
  std::vector<double> x;
  double nu_used = 0.0;
  bool nu_clamped = false;
  std::size_t total_picard_iters = 0;
};

/// Backward-Euler in time, central diffusion, first-order upwind convection;
/// each step solves the nonlinear equations by Picard iteration on the lagged
/// convection coefficient until the residual max-norm meets picard_tol.
BurgersResult solve_burgers(const BurgersConfig& config);

/// Residual of the implicit step equations at u_next given the previous time
/// level: interior entries are
///   (u_next - u_prev)/dt + u_next * upwind_dx(u_next) - nu * central_dxx(u_next),
/// boundary entries are u_next's boundary values themselves. The step
/// solution is exactly the root of this map.
std::vector<double> burgers_residual(const std::vector<double>& u_prev,
                                     const std::vector<double>& u_next,
                                     const BurgersConfig& config);

}  // namespace surrocae
