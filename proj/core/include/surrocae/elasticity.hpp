#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "surrocae/mesh.hpp"
#include "surrocae/solution.hpp"

namespace surrocae {

/// Plane-stress material and section data. Young's modulus is per story so a
/// parameter triplet maps onto one wall.
struct ElasticityParams {
  std::vector<double> youngs_modulus;  // Pa, one entry per story
  double poisson = 0.2;
  double density = 2500.0;   // kg/m^3
  double thickness = 1.0;    // m
};

/// Assembled free-DOF system. Mass is lumped (row sum), so it is stored as a
/// diagonal. The influence vector maps ground acceleration onto the
/// x-translation DOFs.
struct AssembledSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;
  Eigen::VectorXd influence;
};

/// 3x3 plane-stress constitutive matrix.
Eigen::Matrix3d plane_stress_matrix(double youngs_modulus, double poisson);

/// 8x8 stiffness of a 4-node bilinear quad, 2x2 Gauss quadrature. Node order
/// matches WallMesh::elements (counterclockwise); DOF order is
/// (x0, y0, x1, y1, ...). The result is symmetric to the bit: the upper
/// triangle is computed and mirrored.
Eigen::Matrix<double, 8, 8> element_stiffness(
    const std::array<std::array<double, 2>, 4>& coords,
    const Eigen::Matrix3d& material, double thickness);

/// Row-sum lumped element mass, one value per node (shared by both of the
/// node's DOFs). Entries are positive and sum to the element mass.
std::array<double, 4> element_lumped_mass(
    const std::array<std::array<double, 2>, 4>& coords, double density,
    double thickness);

AssembledSystem assemble_system(const WallMesh& mesh,
                                const ElasticityParams& params);

/// Rayleigh damping C = alpha_m * M + beta_k * K. Defaults to none.
struct RayleighDamping {
  double alpha_m = 0.0;
  double beta_k = 0.0;
  bool active() const { return alpha_m != 0.0 || beta_k != 0.0; }
};

/// The time step comes from the ground motion; the integrator never
/// interpolates between samples.
struct NewmarkConfig {
  double beta = 0.25;
  double gamma = 0.5;
  RayleighDamping damping;
};

struct GroundMotion {
  double dt = 0.01;
  std::vector<double> accel;  // m/s^2, sample j is at time j * dt
};

/// Optional nonzero start for free-vibration studies; defaults to rest.
struct InitialState {
  Eigen::VectorXd displacement;
  Eigen::VectorXd velocity;
};

/// Implicit Newmark time integration of M a + C v + K u = -M * iota * a_g.
/// The effective stiffness is factorized once (sparse Cholesky). Column j of
/// the result holds the displacement at time j * dt, so column 0 is the
/// initial state and the loaded steps follow the ground-motion samples.
/// Pass velocity_out to also capture the velocity history (same layout).
SolutionMatrix newmark_integrate(const AssembledSystem& system,
                                 const GroundMotion& motion,
                                 const NewmarkConfig& config,
                                 const InitialState* initial = nullptr,
                                 Eigen::MatrixXd* velocity_out = nullptr);

}  // namespace surrocae
