#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "doctest.h"
#include "surrocae/elasticity.hpp"
#include "surrocae/errors.hpp"
#include "surrocae/ground_motion.hpp"
#include "surrocae/mesh.hpp"

using namespace surrocae;

namespace {

constexpr double kPi = 3.14159265358979323846;
using Quad = std::array<std::array<double, 2>, 4>;

const Quad kUnitSquare = {{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
const Quad kDistorted = {{{0.1, -0.2}, {1.4, 0.1}, {1.2, 1.3}, {-0.1, 0.9}}};

double shoelace_area(const Quad& q) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    a += q[i][0] * q[j][1] - q[j][0] * q[i][1];
  }
  return 0.5 * a;
}

/// Nodal displacements of a uniform-strain field (eps_x, eps_y, gamma_xy).
Eigen::Matrix<double, 8, 1> uniform_strain_displacements(const Quad& q,
                                                         double ex, double ey,
                                                         double gxy) {
  Eigen::Matrix<double, 8, 1> u;
  for (int a = 0; a < 4; ++a) {
    u[2 * a] = ex * q[a][0] + 0.5 * gxy * q[a][1];
    u[2 * a + 1] = ey * q[a][1] + 0.5 * gxy * q[a][0];
  }
  return u;
}

/// Consistent nodal forces of a constant stress state on a quad with linear
/// edges: node a picks up sigma * n ds integrated over its two half-edges,
/// which collapses to sigma applied to the rotated diagonal p_next - p_prev.
Eigen::Matrix<double, 8, 1> constant_stress_forces(const Quad& q, double sx,
                                                   double sy, double sxy,
                                                   double thickness) {
  Eigen::Matrix<double, 8, 1> f;
  for (int a = 0; a < 4; ++a) {
    const auto& next = q[(a + 1) % 4];
    const auto& prev = q[(a + 3) % 4];
    double nx = 0.5 * (next[1] - prev[1]);
    double ny = -0.5 * (next[0] - prev[0]);
    f[2 * a] = thickness * (sx * nx + sxy * ny);
    f[2 * a + 1] = thickness * (sxy * nx + sy * ny);
  }
  return f;
}

Eigen::MatrixXd dense(const Eigen::SparseMatrix<double>& m) {
  return Eigen::MatrixXd(m);
}

GroundMotion constant_motion(double accel, std::size_t n, double dt) {
  GroundMotion m;
  m.dt = dt;
  m.accel.assign(n, accel);
  return m;
}

std::filesystem::path temp_csv(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("plane stress matrix matches the closed form") {
  Eigen::Matrix3d d = plane_stress_matrix(30e9, 0.2);
  CHECK(d(0, 0) == 31.25e9);
  CHECK(d(1, 1) == 31.25e9);
  CHECK(d(0, 1) == 6.25e9);
  CHECK(d(1, 0) == 6.25e9);
  CHECK(d(2, 2) == 12.5e9);
  CHECK(d(0, 2) == 0.0);
  CHECK(d(2, 0) == 0.0);
  CHECK(d(1, 2) == 0.0);
  CHECK(d(2, 1) == 0.0);
}

TEST_CASE("element stiffness reproduces constant stress states exactly") {
  const double e_mod = 30e9;
  const double nu = 0.2;
  const double tau = 0.25;
  Eigen::Matrix3d d = plane_stress_matrix(e_mod, nu);

  for (const Quad& q : {kUnitSquare, kDistorted}) {
    Eigen::Matrix<double, 8, 8> ke = element_stiffness(q, d, tau);

    // Three independent strain states; forces must match the boundary
    // tractions of the corresponding constant stress field.
    const double strains[3][3] = {
        {1e-4, -nu * 1e-4, 0.0}, {0.0, 2e-4, 0.0}, {0.0, 0.0, 3e-4}};
    for (const auto& s : strains) {
      Eigen::Vector3d eps(s[0], s[1], s[2]);
      Eigen::Vector3d sig = d * eps;
      Eigen::Matrix<double, 8, 1> u =
          uniform_strain_displacements(q, s[0], s[1], s[2]);
      Eigen::Matrix<double, 8, 1> f_fem = ke * u;
      Eigen::Matrix<double, 8, 1> f_exact =
          constant_stress_forces(q, sig[0], sig[1], sig[2], tau);
      double scale = f_exact.cwiseAbs().maxCoeff();
      REQUIRE(scale > 0.0);
      CHECK((f_fem - f_exact).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }

    // Rigid body motions cost nothing.
    Eigen::Matrix<double, 8, 1> rigid;
    for (int a = 0; a < 4; ++a) {
      rigid[2 * a] = 0.7 - 0.3 * q[a][1];
      rigid[2 * a + 1] = -0.2 + 0.3 * q[a][0];
    }
    double knorm = ke.cwiseAbs().maxCoeff();
    CHECK((ke * rigid).cwiseAbs().maxCoeff() <= 1e-10 * knorm);

    // Bitwise symmetry is part of the contract.
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) CHECK(ke(i, j) == ke(j, i));
    }
  }
}

TEST_CASE("unit square element stiffness matches hand integration") {
  // For the unit square with nu = 0 the diagonal entry of node 0 in x is
  // tau * (E/(1-0) * 1/3 + G * 1/3) with G = E/2, i.e. tau * E / 2.
  Eigen::Matrix3d d = plane_stress_matrix(1.0, 0.0);
  Eigen::Matrix<double, 8, 8> ke = element_stiffness(kUnitSquare, d, 1.0);
  CHECK(ke(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ke(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  // Coupling between the two x DOFs along the bottom edge:
  // -E * 1/3 + G * 1/6 = -1/3 + 1/12 = -1/4.
  CHECK(ke(0, 2) == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("assembled patch is in equilibrium under a linear field") {
  // Four unit squares forming a 2x2 patch. The center node is interior; a
  // uniform strain field imposed on the boundary must leave it force free.
  std::vector<std::array<double, 2>> nodes;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      nodes.push_back({static_cast<double>(i), static_cast<double>(j)});
    }
  }
  std::vector<std::array<int, 4>> elems = {
      {0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};

  Eigen::Matrix3d d = plane_stress_matrix(30e9, 0.2);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(18, 18);
  for (const auto& conn : elems) {
    Quad q;
    for (int a = 0; a < 4; ++a) q[a] = nodes[static_cast<std::size_t>(conn[a])];
    Eigen::Matrix<double, 8, 8> ke = element_stiffness(q, d, 1.0);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        k(2 * conn[i / 2] + i % 2, 2 * conn[j / 2] + j % 2) += ke(i, j);
      }
    }
  }

  Eigen::VectorXd u(18);
  const double ex = 2e-4, ey = -1e-4, gxy = 5e-5;
  for (int n = 0; n < 9; ++n) {
    u[2 * n] = ex * nodes[static_cast<std::size_t>(n)][0] +
               0.5 * gxy * nodes[static_cast<std::size_t>(n)][1];
    u[2 * n + 1] = ey * nodes[static_cast<std::size_t>(n)][1] +
                   0.5 * gxy * nodes[static_cast<std::size_t>(n)][0];
  }
  Eigen::VectorXd f = k * u;
  double scale = f.cwiseAbs().maxCoeff();
  // Node 4 sits in the middle of the patch.
  CHECK(std::abs(f[8]) <= 1e-10 * scale);
  CHECK(std::abs(f[9]) <= 1e-10 * scale);
}

TEST_CASE("lumped element mass conserves total mass and stays positive") {
  const double rho = 2500.0;
  const double tau = 0.3;
  for (const Quad& q : {kUnitSquare, kDistorted}) {
    std::array<double, 4> m = element_lumped_mass(q, rho, tau);
    double total = 0.0;
    for (double v : m) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(rho * tau * shoelace_area(q)).epsilon(1e-13));
  }
  // Symmetric element: equal shares.
  std::array<double, 4> m = element_lumped_mass(kUnitSquare, rho, tau);
  for (double v : m) CHECK(v == doctest::Approx(rho * tau / 4.0).epsilon(1e-14));
}

TEST_CASE("wall mesh: unit panel") {
  WallGeometry g;
  g.width = 1.0;
  g.n_stories = 1;
  g.story_height = 1.0;
  g.opening_width = 0.0;
  g.opening_height = 0.0;
  g.element_size = 1.0;
  WallMesh mesh = build_wall_mesh(g);

  CHECK(mesh.nodes.size() == 4);
  CHECK(mesh.elements.size() == 1);
  CHECK(mesh.n_free_dofs == 4);
  std::size_t fixed = 0;
  for (bool b : mesh.node_fixed) fixed += b ? 1 : 0;
  CHECK(fixed == 2);
  REQUIRE(mesh.monitored_nodes.size() == 1);
  const auto& mon = mesh.nodes[mesh.monitored_nodes[0]];
  CHECK(mon[0] == 0.0);
  CHECK(mon[1] == 1.0);
  // Fixed nodes carry no DOF index.
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    if (mesh.node_fixed[n]) {
      CHECK(mesh.dof(n, 0) == -1);
      CHECK(mesh.dof(n, 1) == -1);
    } else {
      CHECK(mesh.dof(n, 0) >= 0);
      CHECK(mesh.dof(n, 1) >= 0);
    }
  }
}

TEST_CASE("wall mesh: production and reduced geometries") {
  WallMesh full = build_wall_mesh(WallGeometry::paper_scale());
  CHECK(full.elements.size() == 864);
  CHECK(full.nodes.size() == 980);
  CHECK(full.n_free_dofs == 1920);
  REQUIRE(full.monitored_nodes.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto& p = full.nodes[full.monitored_nodes[s]];
    CHECK(p[0] == 0.0);
    CHECK(p[1] == doctest::Approx(3.0 * (s + 1.0)).epsilon(1e-15));
  }
  // Stories are tagged evenly.
  std::array<std::size_t, 3> per_story{0, 0, 0};
  for (std::size_t s : full.element_story) {
    REQUIRE(s < 3);
    ++per_story[s];
  }
  CHECK(per_story[0] == 288);
  CHECK(per_story[1] == 288);
  CHECK(per_story[2] == 288);

  WallMesh reduced = build_wall_mesh(WallGeometry::reduced());
  CHECK(reduced.elements.size() == 96);
  CHECK(reduced.nodes.size() == 134);
  CHECK(reduced.n_free_dofs == 252);

  // Halving the element size quadruples the element count.
  WallGeometry mid = WallGeometry::reduced();
  mid.element_size = 0.3;
  CHECK(build_wall_mesh(mid).elements.size() == 4 * 96);

  // Elements are counterclockwise and DOF numbering is dense.
  for (const auto& conn : reduced.elements) {
    Quad q;
    for (int a = 0; a < 4; ++a) q[a] = reduced.nodes[conn[a]];
    CHECK(shoelace_area(q) > 0.0);
  }
  std::vector<bool> seen(reduced.n_free_dofs, false);
  for (std::ptrdiff_t idx : reduced.dof_index) {
    if (idx < 0) continue;
    REQUIRE(static_cast<std::size_t>(idx) < seen.size());
    CHECK(!seen[static_cast<std::size_t>(idx)]);
    seen[static_cast<std::size_t>(idx)] = true;
  }
  CHECK(std::count(seen.begin(), seen.end(), false) == 0);

  // Same geometry twice gives the same mesh.
  WallMesh again = build_wall_mesh(WallGeometry::reduced());
  CHECK(again.nodes == reduced.nodes);
  CHECK(again.elements == reduced.elements);
}

TEST_CASE("wall mesh rejects non-conforming geometry") {
  WallGeometry g = WallGeometry::reduced();
  g.element_size = 0.7;
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.opening_height = 3.0;  // no coupling beam left
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.opening_width = 4.8;
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.opening_width = 1.3;  // margin (4.8-1.3)/2 misses the 0.6 grid
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.opening_height = 0.0;  // width still positive
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.element_size = -0.5;
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);

  g = WallGeometry::reduced();
  g.n_stories = 0;
  CHECK_THROWS_AS(build_wall_mesh(g), GeometryError);
}

TEST_CASE("assembled stiffness is symmetric, definite, and scales with E") {
  WallMesh mesh = build_wall_mesh(WallGeometry::reduced());
  ElasticityParams p;
  p.youngs_modulus = {30e9, 28e9, 32e9};
  AssembledSystem sys = assemble_system(mesh, p);

  REQUIRE(sys.stiffness.rows() == 252);
  REQUIRE(sys.mass.size() == 252);

  // Bitwise symmetry.
  Eigen::SparseMatrix<double> kt = sys.stiffness.transpose();
  Eigen::MatrixXd diff = dense(sys.stiffness) - dense(kt);
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);

  // Positive definite for admissible moduli.
  for (double base : {20e9, 30e9, 45e9}) {
    ElasticityParams q = p;
    q.youngs_modulus = {base, base * 1.1, base * 0.9};
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(
        assemble_system(mesh, q).stiffness);
    CHECK(llt.info() == Eigen::Success);
  }

  // Doubling every modulus doubles K exactly.
  ElasticityParams doubled = p;
  for (double& e : doubled.youngs_modulus) e *= 2.0;
  AssembledSystem sys2 = assemble_system(mesh, doubled);
  Eigen::MatrixXd lhs = dense(sys2.stiffness);
  Eigen::MatrixXd rhs = 2.0 * dense(sys.stiffness);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);

  // Mass is strictly positive and the influence vector is 1 on x DOFs only.
  CHECK(sys.mass.minCoeff() > 0.0);
  std::size_t ones = 0;
  for (Eigen::Index i = 0; i < sys.influence.size(); ++i) {
    CHECK((sys.influence[i] == 0.0 || sys.influence[i] == 1.0));
    ones += sys.influence[i] == 1.0 ? 1 : 0;
  }
  CHECK(ones == 126);
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    if (mesh.dof(n, 0) >= 0) CHECK(sys.influence[mesh.dof(n, 0)] == 1.0);
    if (mesh.dof(n, 1) >= 0) CHECK(sys.influence[mesh.dof(n, 1)] == 0.0);
  }

  // Story modulus matters: a different middle story changes K.
  ElasticityParams mixed = p;
  mixed.youngs_modulus[1] = 20e9;
  AssembledSystem sys3 = assemble_system(mesh, mixed);
  CHECK((dense(sys3.stiffness) - dense(sys.stiffness)).cwiseAbs().maxCoeff() >
        0.0);

  // Parameter validation.
  ElasticityParams bad = p;
  bad.youngs_modulus = {30e9};
  CHECK_THROWS_AS(assemble_system(mesh, bad), ConfigError);
  bad = p;
  bad.youngs_modulus[0] = -1.0;
  CHECK_THROWS_AS(assemble_system(mesh, bad), ConfigError);
  bad = p;
  bad.poisson = 0.5;
  CHECK_THROWS_AS(assemble_system(mesh, bad), ConfigError);
  bad = p;
  bad.density = 0.0;
  CHECK_THROWS_AS(assemble_system(mesh, bad), ConfigError);
}

TEST_CASE("Newmark tracks the closed-form SDOF response under a step load") {
  // m = 1, k = 4 pi^2 so the natural period is exactly one second. A constant
  // ground acceleration of -1 applies a unit step force, giving
  // u(t) = (1 - cos(2 pi t)) / k.
  AssembledSystem sdof;
  sdof.stiffness.resize(1, 1);
  sdof.stiffness.insert(0, 0) = 4.0 * kPi * kPi;
  sdof.stiffness.makeCompressed();
  sdof.mass = Eigen::VectorXd::Ones(1);
  sdof.influence = Eigen::VectorXd::Ones(1);

  const double dt = 0.01;  // T / 100
  SolutionMatrix r =
      newmark_integrate(sdof, constant_motion(-1.0, 601, dt), NewmarkConfig{});
  REQUIRE(r.values.extent(0) == 1);
  REQUIRE(r.values.extent(1) == 601);
  CHECK(r.values(0, 0) == 0.0);
  CHECK(r.time_axis[600] == doctest::Approx(6.0).epsilon(1e-12));

  const double k = 4.0 * kPi * kPi;
  const double amp = 1.0 / k;

  // Amplitude of the oscillation about the static offset is preserved.
  double max_dev = 0.0;
  for (std::size_t j = 0; j <= 600; ++j) {
    max_dev = std::max(max_dev, std::abs(r.values(0, j) - amp));
  }
  CHECK(max_dev <= amp * (1.0 + 1e-9));
  CHECK(max_dev >= amp * (1.0 - 3e-3));

  // Period from zero-down-crossings of u - u_static, linearly interpolated.
  std::vector<double> crossings;
  for (std::size_t j = 1; j <= 600; ++j) {
    double a = r.values(0, j - 1) - amp;
    double b = r.values(0, j) - amp;
    if (a > 0.0 && b <= 0.0) {
      crossings.push_back(r.time_axis[j - 1] + dt * a / (a - b));
    }
  }
  REQUIRE(crossings.size() >= 5);
  double period =
      (crossings.back() - crossings.front()) / (crossings.size() - 1.0);
  CHECK(std::abs(period - 1.0) <= 0.01);
  // Average acceleration elongates the period by (w dt)^2 / 12 ~ 3e-4.
  CHECK(std::abs(period - 1.0) <= 1e-3);

  // Pointwise agreement with the closed form stays tight over six cycles.
  double max_err = 0.0;
  for (std::size_t j = 0; j <= 600; ++j) {
    double exact = amp * (1.0 - std::cos(2.0 * kPi * r.time_axis[j]));
    max_err = std::max(max_err, std::abs(r.values(0, j) - exact));
  }
  CHECK(max_err <= 0.02 * amp);
}

TEST_CASE("Newmark conserves energy in undamped free vibration") {
  WallMesh mesh = build_wall_mesh(WallGeometry::reduced());
  ElasticityParams p;
  p.youngs_modulus = {30e9, 30e9, 30e9};
  AssembledSystem sys = assemble_system(mesh, p);

  // Static deflection under the influence load as a smooth starting shape.
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.stiffness);
  REQUIRE(llt.info() == Eigen::Success);
  Eigen::VectorXd shape = llt.solve(sys.mass.cwiseProduct(sys.influence));
  shape *= 0.01 / shape.cwiseAbs().maxCoeff();

  InitialState init;
  init.displacement = shape;
  init.velocity = Eigen::VectorXd::Zero(sys.mass.size());

  Eigen::MatrixXd vel;
  SolutionMatrix r = newmark_integrate(sys, constant_motion(0.0, 601, 0.01),
                                       NewmarkConfig{}, &init, &vel);

  auto energy = [&](Eigen::Index j) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.mass.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u[i] = r.values(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    Eigen::VectorXd v = vel.col(j);
    return 0.5 * v.dot(sys.mass.cwiseProduct(v)) +
           0.5 * u.dot(sys.stiffness * u);
  };

  double e0 = energy(0);
  REQUIRE(e0 > 0.0);
  double max_drift = 0.0;
  for (Eigen::Index j = 1; j <= 600; ++j) {
    max_drift = std::max(max_drift, std::abs(energy(j) - e0) / e0);
  }
  CHECK(max_drift <= 1e-6);
}

TEST_CASE("Newmark response is zero, linear, and deterministic") {
  WallMesh mesh = build_wall_mesh(WallGeometry::reduced());
  ElasticityParams p;
  p.youngs_modulus = {32e9, 30e9, 28e9};
  AssembledSystem sys = assemble_system(mesh, p);

  // No excitation, no response, bit for bit.
  SolutionMatrix rest =
      newmark_integrate(sys, constant_motion(0.0, 50, 0.04), NewmarkConfig{});
  for (std::size_t i = 0; i < rest.values.size(); ++i) {
    CHECK(rest.values.data()[i] == 0.0);
  }

  GroundMotion motion = synthetic_ground_motion(150, 0.04, 42);
  SolutionMatrix base = newmark_integrate(sys, motion, NewmarkConfig{});

  // Scaling the motion by 2 scales the response exactly (and by 3 to
  // rounding).
  GroundMotion twice = motion;
  for (double& a : twice.accel) a *= 2.0;
  SolutionMatrix r2 = newmark_integrate(sys, twice, NewmarkConfig{});
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    CHECK(r2.values.data()[i] == 2.0 * base.values.data()[i]);
  }

  GroundMotion thrice = motion;
  for (double& a : thrice.accel) a *= 3.0;
  SolutionMatrix r3 = newmark_integrate(sys, thrice, NewmarkConfig{});
  double max_rel = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    scale = std::max(scale, std::abs(3.0 * base.values.data()[i]));
  }
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    max_rel = std::max(max_rel, std::abs(r3.values.data()[i] -
                                         3.0 * base.values.data()[i]));
  }
  CHECK(max_rel <= 1e-10 * scale);

  // Identical inputs give identical outputs.
  SolutionMatrix again = newmark_integrate(sys, motion, NewmarkConfig{});
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    CHECK(again.values.data()[i] == base.values.data()[i]);
  }

  // The roof monitors the largest drift.
  double roof = 0.0, first = 0.0;
  std::ptrdiff_t roof_dof = mesh.dof(mesh.monitored_nodes[2], 0);
  std::ptrdiff_t first_dof = mesh.dof(mesh.monitored_nodes[0], 0);
  REQUIRE(roof_dof >= 0);
  REQUIRE(first_dof >= 0);
  for (std::size_t j = 0; j < base.values.extent(1); ++j) {
    roof = std::max(roof, std::abs(base.values(static_cast<std::size_t>(roof_dof), j)));
    first = std::max(first, std::abs(base.values(static_cast<std::size_t>(first_dof), j)));
  }
  CHECK(roof > 0.0);
  CHECK(roof >= first);
}

TEST_CASE("heavily damped response settles to the static solution") {
  WallMesh mesh = build_wall_mesh(WallGeometry::reduced());
  ElasticityParams p;
  p.youngs_modulus = {30e9, 30e9, 30e9};
  AssembledSystem sys = assemble_system(mesh, p);

  NewmarkConfig cfg;
  cfg.damping.alpha_m = 5.0;
  cfg.damping.beta_k = 1e-4;
  const double ag = 2.0;
  SolutionMatrix r =
      newmark_integrate(sys, constant_motion(ag, 601, 0.04), cfg);

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.stiffness);
  Eigen::VectorXd u_static =
      llt.solve((-ag) * sys.mass.cwiseProduct(sys.influence));
  double scale = u_static.cwiseAbs().maxCoeff();
  REQUIRE(scale > 0.0);

  double max_err = 0.0;
  for (Eigen::Index i = 0; i < u_static.size(); ++i) {
    max_err = std::max(
        max_err, std::abs(r.values(static_cast<std::size_t>(i), 600) -
                          u_static[i]));
  }
  CHECK(max_err <= 0.01 * scale);
}

TEST_CASE("Newmark validates its inputs") {
  AssembledSystem sdof;
  sdof.stiffness.resize(1, 1);
  sdof.stiffness.insert(0, 0) = 1.0;
  sdof.stiffness.makeCompressed();
  sdof.mass = Eigen::VectorXd::Ones(1);
  sdof.influence = Eigen::VectorXd::Ones(1);

  GroundMotion empty;
  empty.accel.clear();
  CHECK_THROWS_AS(newmark_integrate(sdof, empty, NewmarkConfig{}), ConfigError);

  GroundMotion bad_dt = constant_motion(1.0, 10, 0.0);
  CHECK_THROWS_AS(newmark_integrate(sdof, bad_dt, NewmarkConfig{}),
                  ConfigError);

  NewmarkConfig bad_cfg;
  bad_cfg.gamma = 0.4;
  CHECK_THROWS_AS(
      newmark_integrate(sdof, constant_motion(1.0, 10, 0.01), bad_cfg),
      ConfigError);

  InitialState wrong;
  wrong.displacement = Eigen::VectorXd::Zero(2);
  wrong.velocity = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(newmark_integrate(sdof, constant_motion(1.0, 10, 0.01),
                                    NewmarkConfig{}, &wrong),
                  ShapeError);

  AssembledSystem zero_mass = sdof;
  zero_mass.mass[0] = 0.0;
  CHECK_THROWS_AS(
      newmark_integrate(zero_mass, constant_motion(1.0, 10, 0.01),
                        NewmarkConfig{}),
      NumericError);
}

TEST_CASE("synthetic ground motion is deterministic with the requested peak") {
  GroundMotion a = synthetic_ground_motion(600, 0.01, 7);
  GroundMotion b = synthetic_ground_motion(600, 0.01, 7);
  CHECK(a.accel == b.accel);
  REQUIRE(a.accel.size() == 600);
  CHECK(a.dt == 0.01);

  double peak = 0.0;
  for (double v : a.accel) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(3.0).epsilon(1e-12));

  GroundMotion c = synthetic_ground_motion(600, 0.01, 8);
  CHECK(a.accel != c.accel);

  // The envelope keeps the tail quiet.
  CHECK(std::abs(a.accel.back()) < 0.5);

  CHECK_THROWS_AS(synthetic_ground_motion(1, 0.01, 7), ConfigError);
  CHECK_THROWS_AS(synthetic_ground_motion(100, -0.1, 7), ConfigError);
}

TEST_CASE("ground motion CSV round trip and validation") {
  GroundMotion motion = synthetic_ground_motion(150, 0.04, 42);
  auto path = temp_csv("surrocae_gm_roundtrip.csv");
  save_ground_motion_csv(motion, path.string());
  GroundMotion loaded = load_ground_motion_csv(path.string());
  CHECK(loaded.dt == motion.dt);
  CHECK(loaded.accel == motion.accel);
  std::filesystem::remove(path);

  auto bad = temp_csv("surrocae_gm_bad.csv");
  write_file(bad, "time,acc\n0,0\n0.01,0.1\n");
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
  write_file(bad, "t,accel\n0,0\n0.01,zebra\n");
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
  write_file(bad, "t,accel\n0,0\n0.01,0.1\n0.03,0.2\n");
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
  write_file(bad, "t,accel\n0,0\n");
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
  write_file(bad, "t,accel\n0,0\n-0.01,0.1\n");
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(load_ground_motion_csv(bad.string()), IoError);
}

TEST_CASE("shipped accelerograms match their generators") {
  // data/ ships the exact CSV output of the generator with pinned seeds, so a
  // reload must reproduce the generator bit for bit.
  GroundMotion full = load_ground_motion_csv(
      std::string(SURROCAE_DATA_DIR) + "/synthetic_ground_motion.csv");
  CHECK(full.dt == 0.01);
  REQUIRE(full.accel.size() == 600);
  GroundMotion ref = synthetic_ground_motion(600, 0.01, 42);
  CHECK(full.accel == ref.accel);

  GroundMotion reduced = load_ground_motion_csv(
      std::string(SURROCAE_DATA_DIR) + "/synthetic_ground_motion_reduced.csv");
  CHECK(reduced.dt == 0.04);
  REQUIRE(reduced.accel.size() == 150);
  GroundMotion ref_r = synthetic_ground_motion(150, 0.04, 42);
  CHECK(reduced.accel == ref_r.accel);
}
