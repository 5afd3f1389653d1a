#pragma once

#include <stdexcept>
#include <string>

namespace pntk {

/// Invalid configuration (bad width, alpha outside (0,1], ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical domain failure (non-PSD covariance, singular system, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pseudo-network row whose masked activation norm vanishes.
class DegenerateMaskError : public NumericError {
 public:
  DegenerateMaskError(int layer, int row)
      : NumericError("degenerate mask row: layer " + std::to_string(layer) +
                     ", row " + std::to_string(row)),
        layer_(layer),
        row_(row) {}
  int layer() const noexcept { return layer_; }
  int row() const noexcept { return row_; }

 private:
  int layer_;
  int row_;
};

/// A requested computation exceeds a configured resource budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File read/write failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pntk
