#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surrocae {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor rank/extent mismatches.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values, rejected before any compute starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Mesh geometry that cannot be realized (non-conforming openings etc.).
class GeometryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Calls made in the wrong order, e.g. backward without a forward cache.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, failed factorizations, undefined metrics.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Time stepper failed to converge.
class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, std::size_t step, double residual)
      : NumericError(what), step(step), residual(residual) {}
  std::size_t step;
  double residual;
};

/// Optimization diverged (NaN/Inf loss or gradients).
class TrainingError : public NumericError {
 public:
  TrainingError(const std::string& what, std::size_t epoch, std::size_t batch)
      : NumericError(what), epoch(epoch), batch(batch) {}
  std::size_t epoch;
  std::size_t batch;
};

/// File and serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace surrocae
