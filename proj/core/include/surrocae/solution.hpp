#pragma once

#include <string>
#include <vector>

#include "surrocae/tensor.hpp"

namespace surrocae {

/// Space-time solution of one high-fidelity run: values(i, j) is DOF i at the
/// j-th time point, column 0 being the initial condition.
struct SolutionMatrix {
  Tensor<double> values;
  std::vector<double> time_axis;
  std::vector<std::string> dof_labels;
};

}  // namespace surrocae
