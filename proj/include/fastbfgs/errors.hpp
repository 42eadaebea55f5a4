#pragma once

#include <stdexcept>
#include <string>

namespace fastbfgs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown problem name.
class NameError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch or a dimension not accepted by a problem family.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Dense methods refuse problems that do not fit an n x n matrix.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// apply() on a subspace state that has not absorbed any curvature pair.
class EmptyStateError : public Error {
 public:
  using Error::Error;
};

/// Hessian-vector product requested along the zero vector.
class ZeroDirectionError : public Error {
 public:
  using Error::Error;
};

/// Numerically rank-deficient column set where full rank is required.
class RankError : public Error {
 public:
  using Error::Error;
};

/// Invalid optimizer or benchmark configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fastbfgs
