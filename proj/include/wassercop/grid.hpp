#pragma once

#include <string>

#include "wassercop/quadrature.hpp"

namespace wassercop {

/// How integrals over (0,1) are evaluated when at least one margin is not
/// atomic. Atomic-by-atomic inputs always use exact breakpoints.
struct GridSpec {
  enum class Kind { ExactBreakpoints, UniformGrid, AdaptiveQuadrature };

  Kind kind = Kind::AdaptiveQuadrature;
  int n = 0;
  double tol = kDefaultQuadratureTol;

  static GridSpec exact() { return {Kind::ExactBreakpoints, 0, 0.0}; }
  static GridSpec uniform(int n) { return {Kind::UniformGrid, n, 0.0}; }
  static GridSpec adaptive(double tol = default_grid_tolerance()) {
    return {Kind::AdaptiveQuadrature, 0, tol};
  }

  /// Throws DomainError unless n >= 2 (uniform) or tol > 0 (adaptive).
  void validate() const;

  /// "exact", "uniform:N" or "adaptive[:TOL]".
  static GridSpec parse(const std::string& text);
  std::string to_string() const;
};

}  // namespace wassercop
