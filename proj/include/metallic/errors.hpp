#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace metallic {

/// Argument outside the mathematical domain of an operation (p <= 0, bad radii, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dimension mismatch between matrices, frames and ambient spaces.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The chart Jacobian lost rank at the requested point.
class DegeneratePointError : public std::runtime_error {
 public:
  DegeneratePointError(const std::string& what, std::vector<double> singular_values)
      : std::runtime_error(what), singular_values_(std::move(singular_values)) {}

  const std::vector<double>& singular_values() const noexcept { return singular_values_; }

 private:
  std::vector<double> singular_values_;
};

/// The normal frame could not be completed, or an override frame is not orthonormal.
class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The deterministic normal frame switched pivot inside a finite-difference stencil.
class FrameDiscontinuityError : public FrameError {
 public:
  using FrameError::FrameError;
};

/// A verification routine was called on an input that does not satisfy its hypothesis
/// (e.g. invariant-only identities on a non-invariant submanifold).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A catalog lookup named an entry that does not exist.
class UnknownEntryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace metallic
