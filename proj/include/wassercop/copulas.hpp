#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "wassercop/distributions.hpp"
#include "wassercop/grid.hpp"
#include "wassercop/quadrature.hpp"

namespace wassercop {

/// Dependence structure on [0,1]^d.
///
/// EmpiricalCopula keeps the rows it was built from (used as quantile levels
/// by the shared-copula construction) and evaluates as the multilinear
/// (checkerboard) extension of the rank-based empirical copula. At grid
/// points k/n that extension coincides with (1/n) #{rows r : rank(r)/n <= u}.
class CopulaSpec {
 public:
  enum class Kind { Comonotone, LowerFH, EmpiricalCopula };

  static CopulaSpec comonotone(std::size_t dim);
  /// W^d. Only a genuine copula for d = 2.
  static CopulaSpec lower_frechet_hoeffding(std::size_t dim);
  /// Rows of pseudo-observations in [0,1]^d.
  static CopulaSpec empirical(std::vector<std::vector<double>> rows);
  /// Ranks raw data column-wise into pseudo-observations rank/n.
  static CopulaSpec empirical_from_data(
      const std::vector<std::vector<double>>& data);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool is_copula() const { return kind_ != Kind::LowerFH || dim_ == 2; }

  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  /// Allowed deviation from exact uniform margins: 1/n for EmpiricalCopula.
  double margin_slack() const;

  double operator()(std::span<const double> u) const;

  /// Raw step estimator (1/n) #{rows r : r_i <= u_i for all i}.
  double step_count(std::span<const double> u) const;

 private:
  CopulaSpec() = default;

  Kind kind_ = Kind::Comonotone;
  std::size_t dim_ = 2;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<int>> ranks_;  // 1-based, ties broken by row order
};

double eval_M(std::span<const double> u);
double eval_W(std::span<const double> u);
double eval_copula(const CopulaSpec& c, std::span<const double> u);

struct FrechetHoeffdingResult {
  double lower;
  double value;
  double upper;
  bool ok;
};

FrechetHoeffdingResult frechet_hoeffding_check(const CopulaSpec& c,
                                               std::span<const double> u);
/// Same check for an arbitrary evaluator at the given tolerance.
FrechetHoeffdingResult frechet_hoeffding_check(
    const std::function<double(std::span<const double>)>& evaluator,
    std::span<const double> u, double tol);

/// C-volume of the box [lo, hi] (inclusion-exclusion over 2^d corners).
double copula_volume(const CopulaSpec& c, std::span<const double> lo,
                     std::span<const double> hi);

/// Margins plus one copula: the Sklar assembly of a law on R^d.
struct JointSpec {
  std::vector<Distribution1D> margins;
  std::shared_ptr<const CopulaSpec> copula;

  JointSpec(std::vector<Distribution1D> margins,
            std::shared_ptr<const CopulaSpec> copula);
  std::size_t dim() const { return margins.size(); }
};

/// H(x) = C(F_1(x_1), ..., F_d(x_d)). Infinite coordinates are taken as
/// limits.
double sklar_joint_cdf(const JointSpec& j, std::span<const double> x);

/// Atoms of the comonotone coupling (F^{-1}(U), G^{-1}(U)).
struct ComonotonePair {
  std::vector<double> u_grid;  // representative level of each cell
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> masses;

  std::size_t size() const { return pairs.size(); }
};

ComonotonePair comonotone_coupling(const Distribution1D& f,
                                   const Distribution1D& g,
                                   const GridSpec& grid = GridSpec::uniform(1000));

/// E g(F^{-1}(U), G^{-1}(U)) with U uniform on (0,1).
Estimate expect_comonotone(const Distribution1D& f, const Distribution1D& g,
                           const std::function<double(double, double)>& fn,
                           const GridSpec& grid = GridSpec::adaptive());

/// Two joints sharing one copula object.
std::pair<JointSpec, JointSpec> shared_copula_build(
    std::shared_ptr<const CopulaSpec> c, std::vector<Distribution1D> margins_f,
    std::vector<Distribution1D> margins_g);

/// Discrete law of an EmpiricalCopula joint: row j becomes the point
/// (F_i^{-1}(u_{j,i}))_i carrying mass 1/n.
std::vector<std::vector<double>> discretize_joint(const JointSpec& j);

}  // namespace wassercop
