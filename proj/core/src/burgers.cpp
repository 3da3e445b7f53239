#include "surrocae/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "surrocae/detail/tridiag.hpp"
#include "surrocae/errors.hpp"

namespace surrocae {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_config(const BurgersConfig& c) {
  if (c.n_x < 3 || c.n_t < 2)
    throw ConfigError("burgers: need n_x >= 3 grid points and n_t >= 2 time points");
  if (!(c.x_max > c.x_min) || !(c.t_max > 0.0))
    throw ConfigError("burgers: empty space or time interval");
  if (!(c.nu_min > 0.0)) throw ConfigError("burgers: nu_min must be positive");
  if (c.nu > 1.0) throw ConfigError("burgers: nu must not exceed 1");
  if (!(c.picard_tol > 0.0) || c.max_picard == 0)
    throw ConfigError("burgers: invalid Picard controls");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> burgers_residual(const std::vector<double>& u_prev,
                                     const std::vector<double>& u_next,
                                     const BurgersConfig& config) {
  const std::size_t n = config.n_x;
  if (u_prev.size() != n || u_next.size() != n)
    throw ShapeError("burgers_residual: vectors must have n_x entries");
  const double dx = config.dx(), dt = config.dt();
  std::vector<double> r(n);
  r[0] = u_next[0];
  r[n - 1] = u_next[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c = u_next[i];
    const double dudx = c >= 0.0 ? (u_next[i] - u_next[i - 1]) / dx
                                 : (u_next[i + 1] - u_next[i]) / dx;
    const double lap =
        (u_next[i + 1] - 2.0 * u_next[i] + u_next[i - 1]) / (dx * dx);
    r[i] = (u_next[i] - u_prev[i]) / dt + c * dudx - config.nu * lap;
  }
  return r;
}

BurgersResult solve_burgers(const BurgersConfig& config) {
  check_config(config);

  BurgersResult result;
  result.nu_clamped = config.nu < config.nu_min;
  result.nu_used = result.nu_clamped ? config.nu_min : config.nu;

  BurgersConfig c = config;
  c.nu = result.nu_used;
  const std::size_t n = c.n_x;
  const double dx = c.dx(), dt = c.dt();
  const double nu = c.nu;

  result.x.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.x[i] = c.x_min + dx * static_cast<double>(i);
  result.x[n - 1] = c.x_max;  // endpoint exact regardless of rounding

  Tensor<double> values({n, c.n_t});
  std::vector<double> u(n), u_next(n), coeff(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = -std::sin(kPi * result.x[i]);
  u[0] = 0.0;
  u[n - 1] = 0.0;
  for (std::size_t i = 0; i < n; ++i) values(i, 0) = u[i];

  std::vector<double> sub(n), diag(n), super(n), rhs(n);
  std::vector<double> sc(n), sd(n);
  const double inv_dt = 1.0 / dt;
  const double inv_dx = 1.0 / dx;
  const double nu_dx2 = nu / (dx * dx);

  for (std::size_t step = 1; step < c.n_t; ++step) {
    coeff = u;  // lagged convection starts from the previous time level
    bool converged = false;
    double res_norm = 0.0;
    for (std::size_t it = 0; it < c.max_picard; ++it) {
      sub[0] = 0.0;
      diag[0] = 1.0;
      super[0] = 0.0;
      rhs[0] = 0.0;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        double d = inv_dt + 2.0 * nu_dx2;
        double lo = -nu_dx2, hi = -nu_dx2;
        const double ci = coeff[i];
        if (ci >= 0.0) {
          d += ci * inv_dx;
          lo -= ci * inv_dx;
        } else {
          d -= ci * inv_dx;
          hi += ci * inv_dx;
        }
        sub[i] = lo;
        diag[i] = d;
        super[i] = hi;
        rhs[i] = u[i] * inv_dt;
      }
      sub[n - 1] = 0.0;
      diag[n - 1] = 1.0;
      super[n - 1] = 0.0;
      rhs[n - 1] = 0.0;

      detail::solve_tridiagonal(sub, diag, super, rhs, sc, sd, u_next);
      ++result.total_picard_iters;

      res_norm = max_abs(burgers_residual(u, u_next, c));
      if (res_norm <= c.picard_tol) {
        converged = true;
        break;
      }
      coeff = u_next;
    }
    if (!converged)
      throw SolverError("burgers: Picard iteration stalled at step " +
                            std::to_string(step) + " (residual " +
                            std::to_string(res_norm) + ")",
                        step, res_norm);
    u = u_next;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(u[i]))
        throw SolverError("burgers: non-finite value at step " +
                              std::to_string(step),
                          step, res_norm);
      values(i, step) = u[i];
    }
  }

  result.solution.values = std::move(values);
  result.solution.time_axis.resize(c.n_t);
  for (std::size_t j = 0; j < c.n_t; ++j)
    result.solution.time_axis[j] = dt * static_cast<double>(j);
  result.solution.dof_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "x=%.6f", result.x[i]);
    result.solution.dof_labels[i] = buf;
  }
  return result;
}

}  // namespace surrocae
