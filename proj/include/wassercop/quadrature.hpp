#pragma once

#include <functional>
#include <span>

namespace wassercop {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr double kDefaultQuadratureTol = 1e-8;

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. The integration range is first
/// split at every interior point of `breaks`, so integrands with known kinks
/// or jumps are never straddled by a single panel.
Estimate integrate_adaptive(const std::function<double(double)>& f, double a,
                            double b, double tol = kDefaultQuadratureTol,
                            std::span<const double> breaks = {});

/// Integral of a decaying integrand over [a, +inf).
Estimate integrate_upper_tail(const std::function<double(double)>& f, double a,
                              double tol = kDefaultQuadratureTol);

/// Integral of a decaying integrand over (-inf, b].
Estimate integrate_lower_tail(const std::function<double(double)>& f, double b,
                              double tol = kDefaultQuadratureTol);

/// Default adaptive tolerance, overridable through WASSERCOP_GRID_TOL.
double default_grid_tolerance();

}  // namespace wassercop
