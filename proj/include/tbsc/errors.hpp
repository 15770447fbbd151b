#pragma once

#include <stdexcept>
#include <string>

namespace tbsc {

// Operand shapes do not conform (matrix product, message length, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters outside the domain of an operation (e.g. T < b1 + b2).
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters are well formed but violate a construction constraint.
class InfeasibleParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An equation reduced to 0 = 1.
class InconsistentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The decoder could not reproduce the transmitted stream.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A code fails the recovery guarantee it was built for.
class ConstructionInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The relay was asked for a symbol its decoder has not produced yet.
class RelayCausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An exhaustive enumeration would exceed its size guard.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tbsc
