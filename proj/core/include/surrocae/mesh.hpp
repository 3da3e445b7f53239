#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace surrocae {

/// Rectangular multi-story shear wall with one centered opening per story
/// (opening base sits on the story floor, leaving a coupling beam above).
/// Setting opening dimensions to zero produces a solid panel. All lengths in
/// meters; every length must align with the element grid.
struct WallGeometry {
  double width = 4.8;
  std::size_t n_stories = 3;
  double story_height = 3.0;
  double opening_width = 1.2;
  double opening_height = 2.4;
  double element_size = 0.2;

  /// Dense mesh sized toward the production element count.
  static WallGeometry paper_scale() { return WallGeometry{}; }

  /// Coarse variant for fast pipelines and tests.
  static WallGeometry reduced() {
    WallGeometry g;
    g.element_size = 0.6;
    return g;
  }

  double total_height() const {
    return story_height * static_cast<double>(n_stories);
  }
};

struct WallMesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<std::size_t, 4>> elements;  // counterclockwise
  std::vector<std::size_t> element_story;
  std::vector<bool> node_fixed;  // fully fixed (base line)
  /// Free-DOF index of (node, component) or -1 when fixed;
  /// component 0 = x, 1 = y.
  std::vector<std::ptrdiff_t> dof_index;
  std::size_t n_free_dofs = 0;
  /// One node per story, outer edge at story top, x-displacement of these
  /// nodes is what reports monitor.
  std::vector<std::size_t> monitored_nodes;

  std::ptrdiff_t dof(std::size_t node, int component) const {
    return dof_index[2 * node + static_cast<std::size_t>(component)];
  }
};

WallMesh build_wall_mesh(const WallGeometry& geometry);

}  // namespace surrocae
