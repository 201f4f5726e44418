#pragma once

#include <stdexcept>

namespace lidx {

// Domain violations (bad arguments, out-of-range inputs) are reported with
// std::domain_error. The types below cover the remaining failure classes.

/// The model kind cannot perform the requested operation, e.g. inverting a
/// step CDF.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density that appears in a denominator vanished.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The integration grid is too coarse for the quantity being computed.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal guarantee was broken. Signals a bug or a bad caller-asserted
/// constant, never a recoverable condition.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lidx
