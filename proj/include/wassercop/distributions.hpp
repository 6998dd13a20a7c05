#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wassercop {

/// Quantiles of parametric laws are evaluated on [eps, 1 - eps].
inline constexpr double kDefaultClampEps = 1e-12;

struct Atom {
  double location;
  double weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A probability law on the real line, exposed through its CDF and its
/// generalized inverse Q(u) = inf{x : F(x) >= u}.
///
/// Atomic laws (Empirical, PointMass) are stored canonically: locations
/// strictly increasing, duplicates merged, weights normalized to one.
class Distribution1D {
 public:
  enum class Kind { Empirical, PointMass, Uniform, Normal, Exponential };

  static Distribution1D empirical(std::vector<Atom> atoms);
  static Distribution1D point_mass(double location);
  static Distribution1D uniform(double a, double b);
  static Distribution1D normal(double mean, double stddev);
  static Distribution1D exponential(double rate);

  Kind kind() const { return kind_; }
  bool is_atomic() const {
    return kind_ == Kind::Empirical || kind_ == Kind::PointMass;
  }

  /// Atoms of an atomic law; empty for parametric kinds.
  std::span<const Atom> atoms() const { return atoms_; }
  /// Running sums of atom weights; the last entry is exactly 1.
  std::span<const double> cumulative_weights() const { return cumulative_; }

  /// Named parameters: (a, b), (mean, stddev), (rate, unused) or
  /// (location, unused).
  double param1() const { return param1_; }
  double param2() const { return param2_; }

  double cdf(double x) const;
  double quantile(double u, double eps = kDefaultClampEps) const;

  /// Infimum and supremum of the support (may be infinite).
  double support_min() const;
  double support_max() const;

  std::string describe() const;

  friend bool operator==(const Distribution1D&, const Distribution1D&) = default;

 private:
  Distribution1D() = default;

  Kind kind_ = Kind::PointMass;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double param1_ = 0.0;
  double param2_ = 0.0;
};

/// Finite upper estimate of E|X|^p, required before any W_p computation.
struct MomentCertificate {
  double p;
  double bound;
};

double cdf(const Distribution1D& d, double x);
double quantile(const Distribution1D& d, double u,
                double eps = kDefaultClampEps);

/// Builds a canonical Empirical law from samples and optional positive
/// weights. The result does not depend on input order.
Distribution1D empirical_from_samples(std::span<const double> xs,
                                      std::optional<std::span<const double>> ws =
                                          std::nullopt);

/// Throws MomentError when the p-th absolute moment is not finite.
MomentCertificate moment(const Distribution1D& d, double p);

/// Standard normal CDF and its inverse (rational approximation refined by one
/// Halley step).
double standard_normal_cdf(double x);
double standard_normal_quantile(double u);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace wassercop
