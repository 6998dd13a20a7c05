#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wassercop/copulas.hpp"
#include "wassercop/distributions.hpp"
#include "wassercop/grid.hpp"

namespace wassercop {

enum class Method {
  CdfIntegral,
  QuantileIntegral,
  ComonotoneCopulaIntegral,
  SharedCopulaSum,
  OracleLP
};

std::string to_string(Method m);

struct DistanceReport {
  double p = 1.0;
  std::optional<double> q;
  double value = 0.0;        // W_p
  double power_value = 0.0;  // W_p^p
  Method method = Method::QuantileIntegral;
  double error_estimate = 0.0;  // on power_value
  std::optional<std::pair<double, double>> bounds;  // on W_{p,q}^p
  std::optional<std::string> copula;                // audit only
};

/// Fills value from power_value.
DistanceReport make_report(double p, double power_value, Method method,
                           double error_estimate);

/// W_1 as the integral of |F - G| over the real line.
DistanceReport w1_cdf(const Distribution1D& f, const Distribution1D& g,
                      double tol = default_grid_tolerance());

/// W_p^p as the integral over (0,1) of |F^{-1}(u) - G^{-1}(u)|^p.
DistanceReport wp_quantile(const Distribution1D& f, const Distribution1D& g,
                           double p, const GridSpec& grid = GridSpec::adaptive());

/// W_p^p as the double integral of |x - y|^p against dM(F(x), G(y)),
/// evaluated as an expectation along the comonotone coupling.
DistanceReport wp_via_M(const Distribution1D& f, const Distribution1D& g,
                        double p, const GridSpec& grid = GridSpec::adaptive());

/// W_p^p of two laws on R^d that share the copula `c`, with the p-norm on
/// R^d: the sum of the coordinate-wise W_p^p. `c` is recorded, not used.
DistanceReport wp_shared_nd(const CopulaSpec& c,
                            const std::vector<Distribution1D>& margins_f,
                            const std::vector<Distribution1D>& margins_g,
                            double p,
                            const GridSpec& grid = GridSpec::adaptive());

/// Bounds on W_{p,q}^p (q-norm inside a p-th power cost) for laws sharing
/// `c`, from norm equivalence on R^d. Requires p != q.
DistanceReport wpq_bounds(const CopulaSpec& c,
                          const std::vector<Distribution1D>& margins_f,
                          const std::vector<Distribution1D>& margins_g,
                          double p, double q,
                          const GridSpec& grid = GridSpec::adaptive());

/// Sum of coordinate-wise W_p^p: a lower bound on W_p^p for any pair of
/// laws with these margins.
double wp_lower_bound_nd(const std::vector<Distribution1D>& margins_f,
                         const std::vector<Distribution1D>& margins_g, double p,
                         const GridSpec& grid = GridSpec::adaptive());

}  // namespace wassercop
