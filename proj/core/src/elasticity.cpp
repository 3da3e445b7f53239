#include "surrocae/elasticity.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/SparseCholesky>

#include "surrocae/errors.hpp"

namespace surrocae {
namespace {

// Corner signs of the reference square, counterclockwise from (-1,-1).
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};
const double kGauss = 1.0 / std::sqrt(3.0);

struct ShapeGradients {
  double dndx[4];
  double dndy[4];
  double n[4];
  double det_j;
};

ShapeGradients shape_at(const std::array<std::array<double, 2>, 4>& coords,
                        double xi, double eta) {
  double dxi[4];
  double deta[4];
  ShapeGradients out;
  for (int a = 0; a < 4; ++a) {
    out.n[a] = 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta);
    dxi[a] = 0.25 * kXi[a] * (1.0 + kEta[a] * eta);
    deta[a] = 0.25 * kEta[a] * (1.0 + kXi[a] * xi);
  }
  double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
  for (int a = 0; a < 4; ++a) {
    j00 += dxi[a] * coords[a][0];
    j01 += dxi[a] * coords[a][1];
    j10 += deta[a] * coords[a][0];
    j11 += deta[a] * coords[a][1];
  }
  out.det_j = j00 * j11 - j01 * j10;
  if (!(out.det_j > 0.0)) {
    throw GeometryError("element Jacobian is not positive (det = " +
                        std::to_string(out.det_j) + ")");
  }
  double inv = 1.0 / out.det_j;
  for (int a = 0; a < 4; ++a) {
    out.dndx[a] = inv * (j11 * dxi[a] - j01 * deta[a]);
    out.dndy[a] = inv * (-j10 * dxi[a] + j00 * deta[a]);
  }
  return out;
}

void check_params(const ElasticityParams& p, std::size_t n_stories) {
  if (p.youngs_modulus.size() < n_stories) {
    throw ConfigError("need a Young's modulus for each of " +
                      std::to_string(n_stories) + " stories, got " +
                      std::to_string(p.youngs_modulus.size()));
  }
  for (double e : p.youngs_modulus) {
    if (!(e > 0.0)) throw ConfigError("Young's modulus must be positive");
  }
  if (!(p.poisson > -1.0 && p.poisson < 0.5)) {
    throw ConfigError("Poisson ratio must lie in (-1, 0.5)");
  }
  if (!(p.density > 0.0)) throw ConfigError("density must be positive");
  if (!(p.thickness > 0.0)) throw ConfigError("thickness must be positive");
}

}  // namespace

Eigen::Matrix3d plane_stress_matrix(double youngs_modulus, double poisson) {
  double f = youngs_modulus / (1.0 - poisson * poisson);
  Eigen::Matrix3d d;
  d << f, f * poisson, 0.0,
       f * poisson, f, 0.0,
       0.0, 0.0, f * (1.0 - poisson) / 2.0;
  return d;
}

Eigen::Matrix<double, 8, 8> element_stiffness(
    const std::array<std::array<double, 2>, 4>& coords,
    const Eigen::Matrix3d& material, double thickness) {
  Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
  for (int gx = 0; gx < 2; ++gx) {
    for (int gy = 0; gy < 2; ++gy) {
      ShapeGradients s = shape_at(coords, kGauss * kXi[gx ? 1 : 0],
                                  kGauss * kXi[gy ? 1 : 0]);
      Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        b(0, 2 * a) = s.dndx[a];
        b(1, 2 * a + 1) = s.dndy[a];
        b(2, 2 * a) = s.dndy[a];
        b(2, 2 * a + 1) = s.dndx[a];
      }
      ke += (thickness * s.det_j) * (b.transpose() * material * b);
    }
  }
  // Mirror the upper triangle so the matrix is symmetric to the bit.
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) ke(j, i) = ke(i, j);
  }
  return ke;
}

std::array<double, 4> element_lumped_mass(
    const std::array<std::array<double, 2>, 4>& coords, double density,
    double thickness) {
  std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
  for (int gx = 0; gx < 2; ++gx) {
    for (int gy = 0; gy < 2; ++gy) {
      ShapeGradients s = shape_at(coords, kGauss * kXi[gx ? 1 : 0],
                                  kGauss * kXi[gy ? 1 : 0]);
      // Row sum of the consistent mass: shape functions sum to one, so each
      // node receives density * thickness * N_a * detJ.
      for (int a = 0; a < 4; ++a) {
        m[a] += density * thickness * s.n[a] * s.det_j;
      }
    }
  }
  return m;
}

AssembledSystem assemble_system(const WallMesh& mesh,
                                const ElasticityParams& params) {
  std::size_t n_stories = 0;
  for (std::size_t s : mesh.element_story) n_stories = std::max(n_stories, s + 1);
  check_params(params, n_stories);

  const auto d = static_cast<Eigen::Index>(mesh.n_free_dofs);
  AssembledSystem sys;
  sys.mass = Eigen::VectorXd::Zero(d);
  sys.influence = Eigen::VectorXd::Zero(d);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.elements.size() * 64);

  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& conn = mesh.elements[e];
    std::array<std::array<double, 2>, 4> coords;
    for (int a = 0; a < 4; ++a) coords[a] = mesh.nodes[conn[a]];

    Eigen::Matrix3d mat = plane_stress_matrix(
        params.youngs_modulus[mesh.element_story[e]], params.poisson);
    Eigen::Matrix<double, 8, 8> ke =
        element_stiffness(coords, mat, params.thickness);
    std::array<double, 4> me =
        element_lumped_mass(coords, params.density, params.thickness);

    std::ptrdiff_t dofs[8];
    for (int a = 0; a < 4; ++a) {
      dofs[2 * a] = mesh.dof(conn[a], 0);
      dofs[2 * a + 1] = mesh.dof(conn[a], 1);
    }
    for (int i = 0; i < 8; ++i) {
      if (dofs[i] < 0) continue;
      sys.mass[dofs[i]] += me[static_cast<std::size_t>(i / 2)];
      for (int j = 0; j < 8; ++j) {
        if (dofs[j] < 0 || dofs[j] < dofs[i]) continue;
        triplets.emplace_back(static_cast<Eigen::Index>(dofs[i]),
                              static_cast<Eigen::Index>(dofs[j]), ke(i, j));
      }
    }
  }

  // Only the upper triangle is accumulated; mirroring it afterwards makes the
  // assembled matrix symmetric to the bit.
  Eigen::SparseMatrix<double> upper(d, d);
  upper.setFromTriplets(triplets.begin(), triplets.end());
  sys.stiffness = upper.selfadjointView<Eigen::Upper>();
  sys.stiffness.makeCompressed();

  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    std::ptrdiff_t dx = mesh.dof(n, 0);
    if (dx >= 0) sys.influence[dx] = 1.0;
  }
  return sys;
}

SolutionMatrix newmark_integrate(const AssembledSystem& system,
                                 const GroundMotion& motion,
                                 const NewmarkConfig& config,
                                 const InitialState* initial,
                                 Eigen::MatrixXd* velocity_out) {
  const Eigen::Index d = system.stiffness.rows();
  if (system.stiffness.cols() != d || system.mass.size() != d ||
      system.influence.size() != d) {
    throw ShapeError("assembled system blocks disagree on DOF count");
  }
  if (motion.accel.empty()) throw ConfigError("ground motion has no samples");
  if (!(motion.dt > 0.0)) throw ConfigError("ground motion dt must be positive");
  if (!(config.beta > 0.0) || !(config.gamma >= 0.5)) {
    throw ConfigError("need beta > 0 and gamma >= 0.5 for a stable step");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(system.mass[i] > 0.0)) {
      throw NumericError("lumped mass must be positive on every DOF");
    }
  }

  const double dt = motion.dt;
  const double a0 = 1.0 / (config.beta * dt * dt);
  const double a1 = config.gamma / (config.beta * dt);
  const double a2 = 1.0 / (config.beta * dt);
  const double a3 = 1.0 / (2.0 * config.beta) - 1.0;
  const double a4 = config.gamma / config.beta - 1.0;
  const double a5 = dt * (config.gamma / (2.0 * config.beta) - 1.0);

  const bool damped = config.damping.active();
  Eigen::SparseMatrix<double> damping;
  if (damped) {
    Eigen::VectorXd alpha_mass = config.damping.alpha_m * system.mass;
    Eigen::SparseMatrix<double> diag(d, d);
    diag = alpha_mass.asDiagonal();
    damping = diag + config.damping.beta_k * system.stiffness;
  }

  Eigen::SparseMatrix<double> effective = system.stiffness;
  {
    Eigen::VectorXd shift = a0 * system.mass;
    Eigen::SparseMatrix<double> diag(d, d);
    diag = shift.asDiagonal();
    effective += diag;
  }
  if (damped) effective += a1 * damping;

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(effective);
  if (llt.info() != Eigen::Success) {
    throw NumericError("effective stiffness is not positive definite");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  if (initial != nullptr) {
    if (initial->displacement.size() != d || initial->velocity.size() != d) {
      throw ShapeError("initial state size does not match DOF count");
    }
    u = initial->displacement;
    v = initial->velocity;
  }
  Eigen::VectorXd mass_iota = system.mass.cwiseProduct(system.influence);

  auto load_at = [&](std::size_t j) -> Eigen::VectorXd {
    return (-motion.accel[j]) * mass_iota;
  };
  Eigen::VectorXd acc = load_at(0) - system.stiffness * u;
  if (damped) acc -= damping * v;
  acc.array() /= system.mass.array();

  const std::size_t n = motion.accel.size();
  SolutionMatrix out;
  out.values = Tensor<double>({static_cast<std::size_t>(d), n});
  out.time_axis.resize(n);
  out.dof_labels.resize(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    out.dof_labels[static_cast<std::size_t>(i)] =
        "dof" + std::to_string(i);
  }

  if (velocity_out != nullptr) {
    velocity_out->resize(d, static_cast<Eigen::Index>(n));
  }
  auto store = [&](std::size_t col, const Eigen::VectorXd& du,
                   const Eigen::VectorXd& dv) {
    out.time_axis[col] = static_cast<double>(col) * dt;
    for (Eigen::Index i = 0; i < d; ++i) {
      out.values(static_cast<std::size_t>(i), col) = du[i];
    }
    if (velocity_out != nullptr) {
      velocity_out->col(static_cast<Eigen::Index>(col)) = dv;
    }
  };
  store(0, u, v);

  for (std::size_t j = 1; j < n; ++j) {
    Eigen::VectorXd rhs = load_at(j);
    rhs += system.mass.cwiseProduct(a0 * u + a2 * v + a3 * acc);
    if (damped) rhs += damping * (a1 * u + a4 * v + a5 * acc);
    Eigen::VectorXd u_next = llt.solve(rhs);
    if (llt.info() != Eigen::Success) {
      throw SolverError("Newmark solve failed", j, 0.0);
    }
    Eigen::VectorXd acc_next = a0 * (u_next - u) - a2 * v - a3 * acc;
    v += dt * ((1.0 - config.gamma) * acc + config.gamma * acc_next);
    u = u_next;
    acc = acc_next;
    if (!u.allFinite()) {
      throw SolverError("Newmark step produced non-finite displacement", j,
                        u.norm());
    }
    store(j, u, v);
  }
  return out;
}

}  // namespace surrocae
