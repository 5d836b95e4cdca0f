#pragma once

#include <stdexcept>
#include <string>

namespace mbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, off-simplex weights and similar.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent construction parameters (barrier grouping, schedules, boxes).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the strict interior of the feasible set.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Unknown registry entry.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Gradient of a max-type function requested at a tie between maximizers.
class TieError : public Error {
 public:
  using Error::Error;
};

/// A solver entry condition does not hold (e.g. infeasible start point).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An operation is not defined for the given problem shape.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbm
