#include "surrocae/mesh.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "surrocae/errors.hpp"

namespace surrocae {
namespace {

// Length must be an integer multiple of the grid pitch.
std::size_t grid_count(double length, double pitch, const char* what) {
  if (length < 0.0) {
    throw GeometryError(std::string(what) + " is negative");
  }
  double ratio = length / pitch;
  double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * (ratio + 1.0)) {
    throw GeometryError(std::string(what) + " = " + std::to_string(length) +
                        " does not align with element size " +
                        std::to_string(pitch));
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

WallMesh build_wall_mesh(const WallGeometry& g) {
  if (g.element_size <= 0.0) {
    throw GeometryError("element size must be positive");
  }
  if (g.width <= 0.0 || g.story_height <= 0.0 || g.n_stories == 0) {
    throw GeometryError("wall dimensions must be positive");
  }
  bool has_opening = g.opening_width > 0.0 && g.opening_height > 0.0;
  if ((g.opening_width > 0.0) != (g.opening_height > 0.0)) {
    throw GeometryError("opening needs both width and height (or neither)");
  }

  const double h = g.element_size;
  const std::size_t nx = grid_count(g.width, h, "wall width");
  const std::size_t ns = grid_count(g.story_height, h, "story height");
  const std::size_t ny = ns * g.n_stories;

  std::size_t ow = 0;
  std::size_t oh = 0;
  std::size_t ox0 = 0;
  if (has_opening) {
    if (g.opening_width >= g.width) {
      throw GeometryError("opening spans the full wall width");
    }
    if (g.opening_height >= g.story_height) {
      throw GeometryError("opening leaves no coupling beam above it");
    }
    ow = grid_count(g.opening_width, h, "opening width");
    oh = grid_count(g.opening_height, h, "opening height");
    // Opening is horizontally centered; the margin must land on the grid.
    ox0 = grid_count((g.width - g.opening_width) / 2.0, h, "opening margin");
  }

  auto cell_open = [&](std::size_t ci, std::size_t cj) {
    if (!has_opening) return false;
    if (ci < ox0 || ci >= ox0 + ow) return false;
    return cj % ns < oh;  // opening base sits on the story floor
  };

  const std::size_t nnx = nx + 1;
  const std::size_t nny = ny + 1;
  auto grid_node = [&](std::size_t i, std::size_t j) { return j * nnx + i; };

  // Pass 1: which grid nodes are referenced by at least one solid cell.
  std::vector<bool> used(nnx * nny, false);
  std::size_t n_elements = 0;
  for (std::size_t cj = 0; cj < ny; ++cj) {
    for (std::size_t ci = 0; ci < nx; ++ci) {
      if (cell_open(ci, cj)) continue;
      ++n_elements;
      used[grid_node(ci, cj)] = true;
      used[grid_node(ci + 1, cj)] = true;
      used[grid_node(ci + 1, cj + 1)] = true;
      used[grid_node(ci, cj + 1)] = true;
    }
  }

  WallMesh mesh;
  mesh.elements.reserve(n_elements);
  mesh.element_story.reserve(n_elements);

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> compact(nnx * nny, kNone);
  for (std::size_t j = 0; j < nny; ++j) {
    for (std::size_t i = 0; i < nnx; ++i) {
      std::size_t gid = grid_node(i, j);
      if (!used[gid]) continue;
      compact[gid] = mesh.nodes.size();
      mesh.nodes.push_back({static_cast<double>(i) * h,
                            static_cast<double>(j) * h});
      mesh.node_fixed.push_back(j == 0);
    }
  }

  for (std::size_t cj = 0; cj < ny; ++cj) {
    for (std::size_t ci = 0; ci < nx; ++ci) {
      if (cell_open(ci, cj)) continue;
      mesh.elements.push_back({compact[grid_node(ci, cj)],
                               compact[grid_node(ci + 1, cj)],
                               compact[grid_node(ci + 1, cj + 1)],
                               compact[grid_node(ci, cj + 1)]});
      mesh.element_story.push_back(cj / ns);
    }
  }

  mesh.dof_index.assign(2 * mesh.nodes.size(), -1);
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    if (mesh.node_fixed[n]) continue;
    mesh.dof_index[2 * n] = static_cast<std::ptrdiff_t>(mesh.n_free_dofs++);
    mesh.dof_index[2 * n + 1] = static_cast<std::ptrdiff_t>(mesh.n_free_dofs++);
  }
  if (mesh.n_free_dofs == 0) {
    throw GeometryError("mesh has no free degrees of freedom");
  }

  // Outer-edge node at each story top. x = 0 never falls inside an opening,
  // so these grid nodes always survive.
  for (std::size_t s = 0; s < g.n_stories; ++s) {
    std::size_t gid = grid_node(0, (s + 1) * ns);
    mesh.monitored_nodes.push_back(compact[gid]);
  }

  return mesh;
}

}  // namespace surrocae
