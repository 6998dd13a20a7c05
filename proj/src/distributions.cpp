#include "wassercop/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wassercop/errors.hpp"
#include "wassercop/quadrature.hpp"

namespace wassercop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double u, const char* where) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(where) + ": probability outside [0,1]");
  }
}

}  // namespace

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

// ---------------------------------------------------------------------------
// Standard normal

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -kInf;
    if (u == 1.0) return kInf;
    throw DomainError("standard_normal_quantile: u outside [0,1]");
  }
  // Acklam's rational approximation, |relative error| < 1.15e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;

  double x;
  if (u < kLow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - kLow) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against erfc brings the error to near machine precision.
  const double e = standard_normal_cdf(x) - u;
  const double g = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= g / (1.0 + 0.5 * x * g);
  return x;
}

// ---------------------------------------------------------------------------
// Construction

Distribution1D Distribution1D::empirical(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("empirical: no atoms");
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.location)) {
      throw DomainError("empirical: non-finite atom location");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw DomainError("empirical: atom weight must be positive and finite");
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& l, const Atom& r) {
                     return l.location < r.location;
                   });

  // Merge duplicate locations; the weights of each group are summed with
  // compensation so the result does not depend on input order.
  std::vector<Atom> merged;
  std::vector<double> group;
  for (std::size_t k = 0; k < atoms.size();) {
    group.clear();
    std::size_t j = k;
    while (j < atoms.size() && atoms[j].location == atoms[k].location) {
      group.push_back(atoms[j].weight);
      ++j;
    }
    std::sort(group.begin(), group.end());
    merged.push_back({atoms[k].location, compensated_sum(group)});
    k = j;
  }

  std::vector<double> weights;
  weights.reserve(merged.size());
  for (const Atom& a : merged) weights.push_back(a.weight);
  const double total = compensated_sum(weights);

  Distribution1D d;
  d.kind_ = Kind::Empirical;
  d.cumulative_.reserve(merged.size());
  double running = 0.0;
  double carry = 0.0;
  for (Atom& a : merged) {
    a.weight /= total;
    const double t = running + a.weight;
    carry += std::abs(running) >= std::abs(a.weight) ? (running - t) + a.weight
                                                      : (a.weight - t) + running;
    running = t;
    d.cumulative_.push_back(std::min(1.0, running + carry));
  }
  d.cumulative_.back() = 1.0;
  d.atoms_ = std::move(merged);
  return d;
}

Distribution1D Distribution1D::point_mass(double location) {
  if (!std::isfinite(location)) {
    throw DomainError("point_mass: non-finite location");
  }
  Distribution1D d;
  d.kind_ = Kind::PointMass;
  d.atoms_ = {{location, 1.0}};
  d.cumulative_ = {1.0};
  d.param1_ = location;
  return d;
}

Distribution1D Distribution1D::uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw DomainError("uniform: require finite a < b");
  }
  Distribution1D d;
  d.kind_ = Kind::Uniform;
  d.param1_ = a;
  d.param2_ = b;
  return d;
}

Distribution1D Distribution1D::normal(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0)) {
    throw DomainError("normal: require finite mean and stddev > 0");
  }
  Distribution1D d;
  d.kind_ = Kind::Normal;
  d.param1_ = mean;
  d.param2_ = stddev;
  return d;
}

Distribution1D Distribution1D::exponential(double rate) {
  if (!std::isfinite(rate) || !(rate > 0.0)) {
    throw DomainError("exponential: require finite rate > 0");
  }
  Distribution1D d;
  d.kind_ = Kind::Exponential;
  d.param1_ = rate;
  return d;
}

// ---------------------------------------------------------------------------
// Evaluation

double Distribution1D::cdf(double x) const {
  if (!std::isfinite(x)) throw DomainError("cdf: non-finite x");
  switch (kind_) {
    case Kind::Empirical:
    case Kind::PointMass: {
      // Number of atoms at or below x.
      const auto it = std::upper_bound(
          atoms_.begin(), atoms_.end(), x,
          [](double v, const Atom& a) { return v < a.location; });
      const auto k = static_cast<std::size_t>(it - atoms_.begin());
      return k == 0 ? 0.0 : cumulative_[k - 1];
    }
    case Kind::Uniform:
      if (x <= param1_) return 0.0;
      if (x >= param2_) return 1.0;
      return (x - param1_) / (param2_ - param1_);
    case Kind::Normal:
      return standard_normal_cdf((x - param1_) / param2_);
    case Kind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-param1_ * x);
  }
  return 0.0;
}

double Distribution1D::quantile(double u, double eps) const {
  require_probability(u, "quantile");
  switch (kind_) {
    case Kind::Empirical:
    case Kind::PointMass: {
      if (u == 0.0) return atoms_.front().location;
      // First atom whose cumulative weight reaches u.
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto k = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
      return atoms_[k].location;
    }
    case Kind::Uniform:
      if (u == 1.0) return param2_;
      return param1_ + u * (param2_ - param1_);
    case Kind::Normal:
      u = std::clamp(u, eps, 1.0 - eps);
      return param1_ + param2_ * standard_normal_quantile(u);
    case Kind::Exponential:
      u = std::min(u, 1.0 - eps);
      return -std::log1p(-u) / param1_;
  }
  return 0.0;
}

double Distribution1D::support_min() const {
  switch (kind_) {
    case Kind::Empirical:
    case Kind::PointMass:
      return atoms_.front().location;
    case Kind::Uniform:
      return param1_;
    case Kind::Normal:
      return -kInf;
    case Kind::Exponential:
      return 0.0;
  }
  return 0.0;
}

double Distribution1D::support_max() const {
  switch (kind_) {
    case Kind::Empirical:
    case Kind::PointMass:
      return atoms_.back().location;
    case Kind::Uniform:
      return param2_;
    case Kind::Normal:
    case Kind::Exponential:
      return kInf;
  }
  return 0.0;
}

std::string Distribution1D::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Empirical:
      os << "Empirical(" << atoms_.size() << " atoms)";
      break;
    case Kind::PointMass:
      os << "PointMass(" << param1_ << ")";
      break;
    case Kind::Uniform:
      os << "Uniform(" << param1_ << ", " << param2_ << ")";
      break;
    case Kind::Normal:
      os << "Normal(" << param1_ << ", " << param2_ << ")";
      break;
    case Kind::Exponential:
      os << "Exponential(" << param1_ << ")";
      break;
  }
  return os.str();
}

double cdf(const Distribution1D& d, double x) { return d.cdf(x); }

double quantile(const Distribution1D& d, double u, double eps) {
  return d.quantile(u, eps);
}

Distribution1D empirical_from_samples(std::span<const double> xs,
                                      std::optional<std::span<const double>> ws) {
  if (xs.empty()) throw DomainError("empirical_from_samples: empty input");
  if (ws && ws->size() != xs.size()) {
    throw DomainError("empirical_from_samples: weight count mismatch");
  }
  std::vector<Atom> atoms;
  atoms.reserve(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    atoms.push_back({xs[k], ws ? (*ws)[k] : 1.0});
  }
  return Distribution1D::empirical(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Moments

namespace {

// sign(x) |x|^(p+1) / (p+1), an antiderivative of |x|^p.
double abs_power_antiderivative(double x, double p) {
  const double v = std::pow(std::abs(x), p + 1.0) / (p + 1.0);
  return x < 0.0 ? -v : v;
}

double normal_abs_moment(double mean, double stddev, double p) {
  auto integrand = [=](double x) {
    const double z = (x - mean) / stddev;
    return std::pow(std::abs(x), p) * std::exp(-0.5 * z * z) /
           (stddev * std::sqrt(2.0 * std::numbers::pi));
  };
  // Split at the origin (kink of |x|^p) and at the mean.
  const double lo = std::min(0.0, mean);
  const double hi = std::max(0.0, mean);
  Estimate mid = integrate_adaptive(integrand, lo, hi, 1e-12);
  Estimate left = integrate_lower_tail(integrand, lo, 1e-12);
  Estimate right = integrate_upper_tail(integrand, hi, 1e-12);
  return mid.value + left.value + right.value + mid.error + left.error +
         right.error;
}

}  // namespace

MomentCertificate moment(const Distribution1D& d, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("moment: p must be a finite real >= 1");
  }
  double bound = 0.0;
  switch (d.kind()) {
    case Distribution1D::Kind::Empirical:
    case Distribution1D::Kind::PointMass: {
      std::vector<double> terms;
      terms.reserve(d.atoms().size());
      for (const Atom& a : d.atoms()) {
        terms.push_back(a.weight * std::pow(std::abs(a.location), p));
      }
      bound = compensated_sum(terms);
      break;
    }
    case Distribution1D::Kind::Uniform: {
      const double a = d.param1();
      const double b = d.param2();
      bound = (abs_power_antiderivative(b, p) - abs_power_antiderivative(a, p)) /
              (b - a);
      break;
    }
    case Distribution1D::Kind::Normal:
      bound = normal_abs_moment(d.param1(), d.param2(), p);
      break;
    case Distribution1D::Kind::Exponential:
      bound = std::exp(std::lgamma(p + 1.0) - p * std::log(d.param1()));
      break;
  }
  if (!std::isfinite(bound)) {
    throw MomentError("moment of order " + std::to_string(p) +
                      " is not finite for " + d.describe());
  }
  return {p, bound};
}

}  // namespace wassercop
