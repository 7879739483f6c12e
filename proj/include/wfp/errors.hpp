#pragma once

#include <stdexcept>
#include <string>

namespace wfp {

// Malformed input: bad dimensions, unknown labels, broken JSON layout.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural requirement on an operator or model does not hold
// (non-unitary, incomplete projector family, probabilities not summing to 1).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-side precondition of a reasoning step is not met.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical check that should hold by construction failed.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The backtracking and exhaustive section searches returned different answers.
class EngineDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wfp
