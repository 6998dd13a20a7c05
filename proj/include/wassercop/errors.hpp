#pragma once

#include <stdexcept>
#include <string>

namespace wassercop {

/// Argument outside the mathematical domain of an operation (u outside [0,1],
/// non-finite x, p < 1, dimension mismatch, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed CSV/JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution failed the finite p-th moment gate.
class MomentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or solver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Oracle input larger than the configured atom cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace wassercop
