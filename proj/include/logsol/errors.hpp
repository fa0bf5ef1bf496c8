#pragma once

#include <stdexcept>
#include <string>

namespace logsol {

/// Base of every contract violation raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
public:
  GridMismatch() : Error("fields live on different grids") {}
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class PositivityViolation : public Error {
public:
  using Error::Error;
};

class PeriodicityViolation : public Error {
public:
  using Error::Error;
};

class ZeroField : public Error {
public:
  ZeroField() : Error("field is identically zero") {}
};

class NonpositiveScale : public Error {
public:
  explicit NonpositiveScale(double s)
      : Error("fiber scale must be positive, got " + std::to_string(s)) {}
};

class BoxTooSmall : public Error {
public:
  using Error::Error;
};

class OrbitUndefined : public Error {
public:
  OrbitUndefined() : Error("integer translations require a periodic grid") {}
};

} // namespace logsol
