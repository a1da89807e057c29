#pragma once

#include <stdexcept>
#include <string>

namespace hllg {

// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Shape/grid mismatch between operands.
class StructuralError : public Error {
  public:
    using Error::Error;
};

// Invalid parameter value (s <= 0, axis out of range, p < 1, ...).
class ParameterError : public Error {
  public:
    using Error::Error;
};

// Operation requires the S^2 target (m = 2).
class UnsupportedTargetError : public Error {
  public:
    using Error::Error;
};

// |u| dropped below the collapse threshold somewhere; carries time/location.
class ConstraintCollapseError : public Error {
  public:
    ConstraintCollapseError(const std::string& msg, double t, std::size_t node)
        : Error(msg), time(t), node_index(node) {}
    double time = 0.0;
    std::size_t node_index = 0;
};

// Non-finite values appeared during time stepping.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& msg, double t) : Error(msg), time(t) {}
    double time = 0.0;
};

// Malformed snapshot/CSV input.
class FormatError : public Error {
  public:
    using Error::Error;
};

// A check was asked for data the trajectory does not carry.
class DataError : public Error {
  public:
    using Error::Error;
};

}  // namespace hllg
