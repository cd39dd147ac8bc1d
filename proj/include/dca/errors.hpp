#pragma once

#include <stdexcept>
#include <string>

namespace dca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together, or a requested size outside the valid range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN or Inf reached an operation.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class AsymmetryError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization of the (ridged) right-hand matrix failed.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// A triangular factor is numerically singular.
class RankError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace dca
