#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wassercop/copulas.hpp"
#include "wassercop/distributions.hpp"
#include "wassercop/wasserstein.hpp"

namespace wassercop {

using Rational = boost::multiprecision::cpp_rational;

/// Finitely supported probability measure on R^d with exact masses.
class DiscreteMeasureND {
 public:
  /// Merges duplicate locations (first occurrence keeps its index) and
  /// normalizes the masses to sum exactly to one.
  DiscreteMeasureND(std::vector<std::vector<double>> locations,
                    std::vector<Rational> masses);

  /// Masses 1/n each (before merging).
  static DiscreteMeasureND uniform(std::vector<std::vector<double>> locations);
  /// Each double weight is converted exactly, then normalized.
  static DiscreteMeasureND from_weights(std::vector<std::vector<double>> locations,
                                        std::span<const double> weights);
  /// One-dimensional measure of an atomic law.
  static DiscreteMeasureND from_distribution(const Distribution1D& d);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return locations_.size(); }
  const std::vector<std::vector<double>>& locations() const { return locations_; }
  const std::vector<Rational>& masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_[i].convert_to<double>(); }

  /// Coordinate margin i as an Empirical law.
  Distribution1D margin(std::size_t i) const;
  std::vector<Distribution1D> margins() const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<double>> locations_;
  std::vector<Rational> masses_;
};

using CostFunction =
    std::function<double(std::span<const double>, std::span<const double>)>;

/// sum_i |x_i - y_i|^p, i.e. ||x - y||_p^p.
CostFunction p_norm_power_cost(double p);
/// ||x - y||_q^p.
CostFunction q_norm_power_cost(double p, double q);

struct CouplingEntry {
  std::size_t i;
  std::size_t j;
  Rational mass;
};

/// Finitely supported coupling of two DiscreteMeasureND.
struct DiscreteCoupling {
  std::vector<CouplingEntry> entries;

  /// Largest |row sum - source mass| or |column sum - target mass|; zero for
  /// a feasible coupling.
  Rational margin_violation(const DiscreteMeasureND& source,
                            const DiscreteMeasureND& target) const;
};

struct OtOptions {
  std::size_t cap = 64;
  bool assignment_fast_path = true;
};

struct OtSolution {
  double value = 0.0;
  DiscreteCoupling witness;
  std::vector<double> row_potentials;
  std::vector<double> column_potentials;
  std::size_t pivots = 0;
  bool used_assignment = false;
};

/// Exact discrete optimal transport: transportation simplex with Bland's
/// rule, started from the north-west corner, with an assignment fast path for
/// equal-count uniform measures.
OtSolution solve_ot(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu,
                    const CostFunction& cost, const OtOptions& options = {});

/// Largest violation of dual feasibility or complementary slackness, plus the
/// primal/dual objective gap, for a solution of the problem (mu, nu, cost).
double optimality_certificate_gap(const DiscreteMeasureND& mu,
                                  const DiscreteMeasureND& nu,
                                  const CostFunction& cost,
                                  const OtSolution& solution);

struct AssignmentResult {
  double value = 0.0;  // (1/n) sum_i cost(x_i, y_sigma(i))
  std::vector<std::size_t> permutation;
  std::vector<double> row_potentials;
  std::vector<double> column_potentials;
};

/// Hungarian algorithm on equal-count, equal-mass measures.
AssignmentResult solve_assignment(const DiscreteMeasureND& mu,
                                  const DiscreteMeasureND& nu,
                                  const CostFunction& cost);

/// Minimum over all n! permutations; n <= 9.
AssignmentResult solve_assignment_exhaustive(const DiscreteMeasureND& mu,
                                             const DiscreteMeasureND& nu,
                                             const CostFunction& cost);

// ---------------------------------------------------------------------------
// Verification against the oracle

struct VerifyOptions {
  /// Added to every formula value; a nonzero offset must make checks fail.
  double formula_offset = 0.0;
  OtOptions ot;
};

struct GapReport {
  double lp_value = 0.0;
  double formula_value = 0.0;
  double gap = 0.0;
  bool passed = false;
};

/// LP minimum with cost |x-y|^p against the quantile integral.
GapReport verify_comonotone_optimal(const Distribution1D& f,
                                    const Distribution1D& g, double p,
                                    const VerifyOptions& options = {});

/// Builds the discrete shared-copula pair from `c` (EmpiricalCopula) and
/// compares the R^d LP with cost ||x-y||_p^p to the coordinate sum computed
/// by wp_shared_nd on the margins of the discretized laws.
GapReport verify_shared_copula_decomposition(
    std::shared_ptr<const CopulaSpec> c,
    const std::vector<Distribution1D>& margins_f,
    const std::vector<Distribution1D>& margins_g, double p,
    const VerifyOptions& options = {});

struct NecessityReport {
  double lp_value = 0.0;
  double coordinate_sum = 0.0;  // sum_i W_p(mu_i, nu_i)^p
  bool projection_bound_holds = false;
  bool strict_gap = false;
  std::vector<std::vector<double>> source_atoms;
  std::vector<std::vector<double>> target_atoms;
};

/// Same margins, different empirical copulas: the LP value still dominates
/// the coordinate sum, and exceeds it strictly when the copulas differ.
NecessityReport verify_necessity(std::shared_ptr<const CopulaSpec> c_mu,
                                 std::shared_ptr<const CopulaSpec> c_nu,
                                 const std::vector<Distribution1D>& margins,
                                 double p, const VerifyOptions& options = {});

struct SandwichReport {
  double lp_value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool passed = false;
};

/// Exact W_{p,q}^p on the discrete shared-copula pair against wpq_bounds.
SandwichReport verify_wpq_sandwich(std::shared_ptr<const CopulaSpec> c,
                                   const std::vector<Distribution1D>& margins_f,
                                   const std::vector<Distribution1D>& margins_g,
                                   double p, double q,
                                   const VerifyOptions& options = {});

}  // namespace wassercop
