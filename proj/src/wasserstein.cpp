#include "wassercop/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wassercop/errors.hpp"

namespace wassercop {

namespace {

// Cumulative levels closer than this are the same breakpoint.
constexpr double kLevelMergeTol = 1e-14;

void require_exponent(double p, const char* where) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError(std::string(where) + ": exponent must be a finite real >= 1");
  }
}

void moment_gate(const Distribution1D& f, const Distribution1D& g, double p) {
  moment(f, p);
  moment(g, p);
}

void require_same_dim(const std::vector<Distribution1D>& f,
                      const std::vector<Distribution1D>& g,
                      const char* where) {
  if (f.size() != g.size() || f.empty()) {
    throw DomainError(std::string(where) + ": margin lists must be nonempty "
                                           "and of equal length");
  }
}

double abs_pow(double x, double p) {
  const double a = std::abs(x);
  return p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p);
}

// Union of the cumulative weight levels of two atomic laws.
std::vector<double> merged_levels(const Distribution1D& f,
                                  const Distribution1D& g) {
  std::vector<double> levels;
  const auto cf = f.cumulative_weights();
  const auto cg = g.cumulative_weights();
  levels.reserve(cf.size() + cg.size());
  std::merge(cf.begin(), cf.end(), cg.begin(), cg.end(),
             std::back_inserter(levels));
  std::vector<double> out;
  out.reserve(levels.size());
  for (double t : levels) {
    if (out.empty() || t - out.back() > kLevelMergeTol) {
      out.push_back(t);
    } else {
      out.back() = std::max(out.back(), t);
    }
  }
  out.back() = 1.0;
  return out;
}

double quantile_power_exact(const Distribution1D& f, const Distribution1D& g,
                            double p) {
  const auto levels = merged_levels(f, g);
  std::vector<double> terms;
  terms.reserve(levels.size());
  double prev = 0.0;
  for (double t : levels) {
    const double mid = 0.5 * (prev + t);
    terms.push_back((t - prev) * abs_pow(f.quantile(mid) - g.quantile(mid), p));
    prev = t;
  }
  return compensated_sum(terms);
}

Estimate quantile_power_numeric(const Distribution1D& f,
                                const Distribution1D& g, double p,
                                const GridSpec& grid) {
  auto integrand = [&](double u) {
    return abs_pow(f.quantile(u) - g.quantile(u), p);
  };
  switch (grid.kind) {
    case GridSpec::Kind::ExactBreakpoints:
      throw DomainError(
          "wp_quantile: exact breakpoints need two atomic margins");
    case GridSpec::Kind::UniformGrid: {
      auto midpoint = [&](int n) {
        std::vector<double> terms(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
          terms[static_cast<std::size_t>(k)] = integrand((k + 0.5) / n);
        }
        return compensated_sum(terms) / n;
      };
      const double fine = midpoint(grid.n);
      const double coarse = midpoint(std::max(1, grid.n / 2));
      return {fine, std::abs(fine - coarse)};
    }
    case GridSpec::Kind::AdaptiveQuadrature:
      break;
  }
  std::vector<double> breaks;
  for (const Distribution1D* d : {&f, &g}) {
    if (d->is_atomic()) {
      const auto cw = d->cumulative_weights();
      breaks.insert(breaks.end(), cw.begin(), cw.end());
    }
  }
  const double eps = kDefaultClampEps;
  Estimate e = integrate_adaptive(integrand, eps, 1.0 - eps, grid.tol, breaks);
  e.error += eps * (integrand(eps) + integrand(1.0 - eps));
  return e;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::CdfIntegral:
      return "CdfIntegral";
    case Method::QuantileIntegral:
      return "QuantileIntegral";
    case Method::ComonotoneCopulaIntegral:
      return "ComonotoneCopulaIntegral";
    case Method::SharedCopulaSum:
      return "SharedCopulaSum";
    case Method::OracleLP:
      return "OracleLP";
  }
  return "unknown";
}

DistanceReport make_report(double p, double power_value, Method method,
                           double error_estimate) {
  DistanceReport r;
  r.p = p;
  r.power_value = std::max(0.0, power_value);
  r.value = std::pow(r.power_value, 1.0 / p);
  r.method = method;
  r.error_estimate = error_estimate;
  return r;
}

DistanceReport w1_cdf(const Distribution1D& f, const Distribution1D& g,
                      double tol) {
  moment_gate(f, g, 1.0);
  if (f.is_atomic() && g.is_atomic()) {
    std::vector<double> xs;
    for (const Distribution1D* d : {&f, &g}) {
      for (const Atom& a : d->atoms()) xs.push_back(a.location);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> terms;
    terms.reserve(xs.size());
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      terms.push_back(std::abs(f.cdf(xs[k]) - g.cdf(xs[k])) *
                      (xs[k + 1] - xs[k]));
    }
    return make_report(1.0, terms.empty() ? 0.0 : compensated_sum(terms),
                       Method::CdfIntegral, 0.0);
  }

  if (!(tol > 0.0)) throw DomainError("w1_cdf: tol must be > 0");
  const double eps = kDefaultClampEps;
  const double lo = std::min(f.quantile(0.0, eps), g.quantile(0.0, eps));
  const double hi = std::max(f.quantile(1.0, eps), g.quantile(1.0, eps));
  std::vector<double> breaks;
  for (const Distribution1D* d : {&f, &g}) {
    for (const Atom& a : d->atoms()) breaks.push_back(a.location);
  }
  auto gap = [&](double x) { return std::abs(f.cdf(x) - g.cdf(x)); };
  Estimate body = integrate_adaptive(gap, lo, hi, tol, breaks);
  double value = body.value;
  double error = body.error;
  if (std::isinf(f.support_min()) || std::isinf(g.support_min())) {
    const Estimate tail = integrate_lower_tail(gap, lo, tol);
    value += tail.value;
    error += tail.error;
  }
  if (std::isinf(f.support_max()) || std::isinf(g.support_max())) {
    auto upper_gap = [&](double x) {
      // 1 - F computed directly where F is close to one.
      return std::abs((1.0 - f.cdf(x)) - (1.0 - g.cdf(x)));
    };
    const Estimate tail = integrate_upper_tail(upper_gap, hi, tol);
    value += tail.value;
    error += tail.error;
  }
  return make_report(1.0, value, Method::CdfIntegral, error);
}

DistanceReport wp_quantile(const Distribution1D& f, const Distribution1D& g,
                           double p, const GridSpec& grid) {
  require_exponent(p, "wp_quantile");
  grid.validate();
  moment_gate(f, g, p);
  if (f.is_atomic() && g.is_atomic()) {
    return make_report(p, quantile_power_exact(f, g, p),
                       Method::QuantileIntegral, 0.0);
  }
  const Estimate e = quantile_power_numeric(f, g, p, grid);
  return make_report(p, e.value, Method::QuantileIntegral, e.error);
}

DistanceReport wp_via_M(const Distribution1D& f, const Distribution1D& g,
                        double p, const GridSpec& grid) {
  require_exponent(p, "wp_via_M");
  grid.validate();
  moment_gate(f, g, p);
  const Estimate e = expect_comonotone(
      f, g, [p](double x, double y) { return abs_pow(x - y, p); }, grid);
  return make_report(p, e.value, Method::ComonotoneCopulaIntegral, e.error);
}

DistanceReport wp_shared_nd(const CopulaSpec& c,
                            const std::vector<Distribution1D>& margins_f,
                            const std::vector<Distribution1D>& margins_g,
                            double p, const GridSpec& grid) {
  require_exponent(p, "wp_shared_nd");
  require_same_dim(margins_f, margins_g, "wp_shared_nd");
  if (c.dim() != margins_f.size()) {
    throw DomainError("wp_shared_nd: copula dimension does not match margins");
  }
  if (!c.is_copula()) {
    throw DomainError("wp_shared_nd: W^d with d > 2 is not a copula");
  }
  std::vector<double> terms;
  double error = 0.0;
  for (std::size_t i = 0; i < margins_f.size(); ++i) {
    const DistanceReport r = wp_quantile(margins_f[i], margins_g[i], p, grid);
    terms.push_back(r.power_value);
    error += r.error_estimate;
  }
  DistanceReport r =
      make_report(p, compensated_sum(terms), Method::SharedCopulaSum, error);
  switch (c.kind()) {
    case CopulaSpec::Kind::Comonotone:
      r.copula = "Comonotone(d=" + std::to_string(c.dim()) + ")";
      break;
    case CopulaSpec::Kind::LowerFH:
      r.copula = "LowerFH(d=" + std::to_string(c.dim()) + ")";
      break;
    case CopulaSpec::Kind::EmpiricalCopula:
      r.copula = "EmpiricalCopula(d=" + std::to_string(c.dim()) +
                 ", n=" + std::to_string(c.size()) + ")";
      break;
  }
  return r;
}

DistanceReport wpq_bounds(const CopulaSpec& c,
                          const std::vector<Distribution1D>& margins_f,
                          const std::vector<Distribution1D>& margins_g,
                          double p, double q, const GridSpec& grid) {
  require_exponent(p, "wpq_bounds");
  require_exponent(q, "wpq_bounds");
  if (p == q) {
    throw DomainError("wpq_bounds: p == q; use wp_shared_nd instead");
  }
  DistanceReport r = wp_shared_nd(c, margins_f, margins_g, p, grid);
  const double s = r.power_value;
  const double factor =
      std::pow(static_cast<double>(margins_f.size()), p / q - 1.0);
  r.q = q;
  r.bounds = q < p ? std::pair{s, factor * s} : std::pair{factor * s, s};
  return r;
}

double wp_lower_bound_nd(const std::vector<Distribution1D>& margins_f,
                         const std::vector<Distribution1D>& margins_g, double p,
                         const GridSpec& grid) {
  require_exponent(p, "wp_lower_bound_nd");
  require_same_dim(margins_f, margins_g, "wp_lower_bound_nd");
  std::vector<double> terms;
  for (std::size_t i = 0; i < margins_f.size(); ++i) {
    terms.push_back(wp_quantile(margins_f[i], margins_g[i], p, grid).power_value);
  }
  return compensated_sum(terms);
}

}  // namespace wassercop
