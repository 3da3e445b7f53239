#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "surrocae/model.hpp"
#include "surrocae/tensor.hpp"

namespace surrocae {

/// FNV-1a over a byte range; `basis` lets callers chain ranges.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t basis = 14695981039346656037ull);

/// A solved parameter sweep: one parameter row and one solution matrix per
/// sample. Everything a training run needs, plus the fingerprint of the
/// solver configuration that produced it so mismatched artifacts are caught
/// at load time rather than as silent garbage.
struct SnapshotDataset {
  std::vector<std::string> param_names;
  Tensor<Scalar> params;      // (n_samples, n_params)
  Tensor<Scalar> solutions;   // (n_samples, n_dofs, n_time)
  std::vector<double> time_axis;  // seconds, one entry per solution column
  std::string solver;

  std::size_t n_samples() const {
    return solutions.rank() == 3 ? solutions.extent(0) : 0;
  }
  std::size_t n_dofs() const {
    return solutions.rank() == 3 ? solutions.extent(1) : 0;
  }
  std::size_t n_time() const {
    return solutions.rank() == 3 ? solutions.extent(2) : 0;
  }
  std::size_t n_params() const {
    return params.rank() == 2 ? params.extent(1) : 0;
  }
};

/// On-disk layout: u64 header length, JSON header, raw little-endian float32
/// parameter block, raw float32 solution block, u64 FNV-1a over both blocks.
void save_dataset(const SnapshotDataset& dataset, const std::string& path);
SnapshotDataset load_dataset(const std::string& path);

}  // namespace surrocae
