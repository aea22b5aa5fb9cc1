#pragma once

#include <stdexcept>
#include <string>

namespace roughlab {

/// Bad input: malformed path, partition, parameter out of range.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input exceeds a documented size cap (grid length, block index).
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Symbolic divergence of a modulus integral. `witness` is the total
/// log-power exponent that failed the integrability test.
class DivergentError : public std::domain_error {
 public:
  DivergentError(const std::string& what, double witness)
      : std::domain_error(what), witness_(witness) {}
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

/// A postcondition that should hold by construction did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace roughlab
