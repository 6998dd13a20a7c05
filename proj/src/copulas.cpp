#include "wassercop/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wassercop/errors.hpp"

namespace wassercop {

namespace {

void require_unit_cube(std::span<const double> u, const char* where) {
  if (u.empty()) throw DomainError(std::string(where) + ": empty vector");
  for (double v : u) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError(std::string(where) + ": coordinate outside [0,1]");
    }
  }
}

void require_dim(std::size_t expected, std::size_t got, const char* where) {
  if (expected != got) {
    throw DomainError(std::string(where) + ": dimension mismatch (expected " +
                      std::to_string(expected) + ", got " +
                      std::to_string(got) + ")");
  }
}

// Ordinal ranks (1-based) of one column, ties broken by row index.
std::vector<int> ordinal_ranks(const std::vector<double>& column) {
  std::vector<std::size_t> order(column.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return column[a] < column[b];
  });
  std::vector<int> ranks(column.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return ranks;
}

}  // namespace

// ---------------------------------------------------------------------------
// M^d and W^d

double eval_M(std::span<const double> u) {
  require_unit_cube(u, "eval_M");
  return *std::min_element(u.begin(), u.end());
}

double eval_W(std::span<const double> u) {
  require_unit_cube(u, "eval_W");
  const double d = static_cast<double>(u.size());
  const double sum = std::accumulate(u.begin(), u.end(), 0.0);
  return std::max(sum - d + 1.0, 0.0);
}

// ---------------------------------------------------------------------------
// CopulaSpec

CopulaSpec CopulaSpec::comonotone(std::size_t dim) {
  if (dim < 1) throw DomainError("copula: dim must be >= 1");
  CopulaSpec c;
  c.kind_ = Kind::Comonotone;
  c.dim_ = dim;
  return c;
}

CopulaSpec CopulaSpec::lower_frechet_hoeffding(std::size_t dim) {
  if (dim < 2) throw DomainError("copula: dim must be >= 2");
  CopulaSpec c;
  c.kind_ = Kind::LowerFH;
  c.dim_ = dim;
  return c;
}

CopulaSpec CopulaSpec::empirical(std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw DomainError("empirical copula: no rows");
  const std::size_t dim = rows.front().size();
  if (dim < 2) throw DomainError("empirical copula: dim must be >= 2");
  for (const auto& row : rows) {
    require_dim(dim, row.size(), "empirical copula");
    require_unit_cube(row, "empirical copula");
  }
  CopulaSpec c;
  c.kind_ = Kind::EmpiricalCopula;
  c.dim_ = dim;
  c.ranks_.assign(rows.size(), std::vector<int>(dim));
  std::vector<double> column(rows.size());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][i];
    const auto ranks = ordinal_ranks(column);
    for (std::size_t r = 0; r < rows.size(); ++r) c.ranks_[r][i] = ranks[r];
  }
  c.rows_ = std::move(rows);
  return c;
}

CopulaSpec CopulaSpec::empirical_from_data(
    const std::vector<std::vector<double>>& data) {
  if (data.empty()) throw DomainError("empirical copula: no rows");
  const std::size_t dim = data.front().size();
  const auto n = static_cast<double>(data.size());
  std::vector<std::vector<double>> pseudo(data.size(), std::vector<double>(dim));
  std::vector<double> column(data.size());
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t r = 0; r < data.size(); ++r) {
      require_dim(dim, data[r].size(), "empirical copula");
      if (!std::isfinite(data[r][i])) {
        throw DomainError("empirical copula: non-finite data");
      }
      column[r] = data[r][i];
    }
    const auto ranks = ordinal_ranks(column);
    for (std::size_t r = 0; r < data.size(); ++r) pseudo[r][i] = ranks[r] / n;
  }
  return empirical(std::move(pseudo));
}

double CopulaSpec::margin_slack() const {
  return kind_ == Kind::EmpiricalCopula ? 1.0 / static_cast<double>(size())
                                        : 0.0;
}

double CopulaSpec::operator()(std::span<const double> u) const {
  require_dim(dim_, u.size(), "eval_copula");
  require_unit_cube(u, "eval_copula");
  switch (kind_) {
    case Kind::Comonotone:
      return eval_M(u);
    case Kind::LowerFH:
      return eval_W(u);
    case Kind::EmpiricalCopula: {
      const auto n = static_cast<double>(rows_.size());
      double total = 0.0;
      for (const auto& ranks : ranks_) {
        double prod = 1.0;
        for (std::size_t i = 0; i < dim_ && prod > 0.0; ++i) {
          prod *= std::clamp(n * u[i] - ranks[i] + 1.0, 0.0, 1.0);
        }
        total += prod;
      }
      return std::min(1.0, total / n);
    }
  }
  return 0.0;
}

double CopulaSpec::step_count(std::span<const double> u) const {
  if (kind_ != Kind::EmpiricalCopula) {
    throw DomainError("step_count: only defined for EmpiricalCopula");
  }
  require_dim(dim_, u.size(), "step_count");
  std::size_t count = 0;
  for (const auto& row : rows_) {
    bool dominated = true;
    for (std::size_t i = 0; i < dim_ && dominated; ++i) {
      dominated = row[i] <= u[i];
    }
    count += dominated ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(rows_.size());
}

double eval_copula(const CopulaSpec& c, std::span<const double> u) {
  return c(u);
}

// ---------------------------------------------------------------------------
// Frechet-Hoeffding bounds

FrechetHoeffdingResult frechet_hoeffding_check(
    const std::function<double(std::span<const double>)>& evaluator,
    std::span<const double> u, double tol) {
  FrechetHoeffdingResult r;
  r.lower = eval_W(u);
  r.upper = eval_M(u);
  r.value = evaluator(u);
  r.ok = r.lower - tol <= r.value && r.value <= r.upper + tol;
  return r;
}

FrechetHoeffdingResult frechet_hoeffding_check(const CopulaSpec& c,
                                               std::span<const double> u) {
  require_dim(c.dim(), u.size(), "frechet_hoeffding_check");
  return frechet_hoeffding_check(
      [&](std::span<const double> v) { return c(v); }, u,
      1e-12 + c.margin_slack());
}

double copula_volume(const CopulaSpec& c, std::span<const double> lo,
                     std::span<const double> hi) {
  require_dim(c.dim(), lo.size(), "copula_volume");
  require_dim(c.dim(), hi.size(), "copula_volume");
  const std::size_t d = c.dim();
  std::vector<double> corner(d);
  double volume = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    int lows = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const bool low = (mask >> i) & 1U;
      corner[i] = low ? lo[i] : hi[i];
      lows += low ? 1 : 0;
    }
    volume += (lows % 2 == 0 ? 1.0 : -1.0) * c(corner);
  }
  return volume;
}

// ---------------------------------------------------------------------------
// Sklar assembly

JointSpec::JointSpec(std::vector<Distribution1D> m,
                     std::shared_ptr<const CopulaSpec> c)
    : margins(std::move(m)), copula(std::move(c)) {
  if (!copula) throw DomainError("joint: missing copula");
  require_dim(copula->dim(), margins.size(), "joint");
  if (!copula->is_copula()) {
    throw DomainError("joint: W^d with d > 2 is not a copula");
  }
}

double sklar_joint_cdf(const JointSpec& j, std::span<const double> x) {
  require_dim(j.dim(), x.size(), "sklar_joint_cdf");
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw DomainError("sklar_joint_cdf: NaN coordinate");
    if (std::isinf(x[i])) {
      u[i] = x[i] < 0.0 ? 0.0 : 1.0;
    } else {
      u[i] = j.margins[i].cdf(x[i]);
    }
  }
  return (*j.copula)(u);
}

// ---------------------------------------------------------------------------
// Comonotone coupling

namespace {

// Remaining cell masses below this are rounding residue of the float
// weights, not mass.
constexpr double kMassResidue = 1e-14;

ComonotonePair atomic_coupling(const Distribution1D& f,
                               const Distribution1D& g) {
  const auto fa = f.atoms();
  const auto ga = g.atoms();
  ComonotonePair out;
  std::size_t i = 0;
  std::size_t j = 0;
  double rest_f = fa[0].weight;
  double rest_g = ga[0].weight;
  double level = 0.0;
  // North-west corner rule on the sorted atoms.
  while (i < fa.size() && j < ga.size()) {
    const bool last = i + 1 == fa.size() && j + 1 == ga.size();
    const double m = last ? std::max(rest_f, rest_g) : std::min(rest_f, rest_g);
    if (m > 0.0) {
      out.u_grid.push_back(std::min(level + 0.5 * m, 1.0));
      out.pairs.emplace_back(fa[i].location, ga[j].location);
      out.masses.push_back(m);
      level += m;
    }
    if (last) break;
    rest_f -= m;
    rest_g -= m;
    const bool next_f = rest_f <= kMassResidue && i + 1 < fa.size();
    const bool next_g = rest_g <= kMassResidue && j + 1 < ga.size();
    if (next_f) rest_f = fa[++i].weight;
    if (next_g) rest_g = ga[++j].weight;
    if (!next_f && !next_g) {
      // Only reachable when one side is on its last atom with residue left.
      if (i + 1 == fa.size()) {
        rest_g = ga[++j].weight;
      } else {
        rest_f = fa[++i].weight;
      }
    }
  }
  return out;
}

}  // namespace

ComonotonePair comonotone_coupling(const Distribution1D& f,
                                   const Distribution1D& g,
                                   const GridSpec& grid) {
  grid.validate();
  if (f.is_atomic() && g.is_atomic()) return atomic_coupling(f, g);
  if (grid.kind != GridSpec::Kind::UniformGrid) {
    throw DomainError(
        "comonotone_coupling: parametric margins need a uniform grid");
  }
  ComonotonePair out;
  const double mass = 1.0 / grid.n;
  for (int k = 0; k < grid.n; ++k) {
    const double u = (k + 0.5) * mass;
    out.u_grid.push_back(u);
    out.pairs.emplace_back(f.quantile(u), g.quantile(u));
    out.masses.push_back(mass);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expectations along the comonotone coupling

namespace {

double checked(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("expect_comonotone: integrand not finite on the support");
  }
  return v;
}

double midpoint_sum(const Distribution1D& f, const Distribution1D& g,
                    const std::function<double(double, double)>& fn, int n) {
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double u = (k + 0.5) / n;
    terms[static_cast<std::size_t>(k)] = checked(fn(f.quantile(u), g.quantile(u)));
  }
  return compensated_sum(terms) / n;
}

}  // namespace

Estimate expect_comonotone(const Distribution1D& f, const Distribution1D& g,
                           const std::function<double(double, double)>& fn,
                           const GridSpec& grid) {
  grid.validate();
  if (f.is_atomic() && g.is_atomic()) {
    const ComonotonePair c = atomic_coupling(f, g);
    std::vector<double> terms(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      terms[k] = c.masses[k] * checked(fn(c.pairs[k].first, c.pairs[k].second));
    }
    return {compensated_sum(terms), 0.0};
  }

  switch (grid.kind) {
    case GridSpec::Kind::ExactBreakpoints:
      throw DomainError(
          "expect_comonotone: exact breakpoints need two atomic margins");
    case GridSpec::Kind::UniformGrid: {
      const double fine = midpoint_sum(f, g, fn, grid.n);
      const double coarse = midpoint_sum(f, g, fn, std::max(1, grid.n / 2));
      return {fine, std::abs(fine - coarse)};
    }
    case GridSpec::Kind::AdaptiveQuadrature:
      break;
  }

  // Split at the jump levels of any atomic margin.
  std::vector<double> breaks;
  for (const Distribution1D* d : {&f, &g}) {
    if (d->is_atomic()) {
      const auto cw = d->cumulative_weights();
      breaks.insert(breaks.end(), cw.begin(), cw.end());
    }
  }
  const double eps = kDefaultClampEps;
  auto integrand = [&](double u) {
    return checked(fn(f.quantile(u), g.quantile(u)));
  };
  Estimate e = integrate_adaptive(integrand, eps, 1.0 - eps, grid.tol, breaks);
  // Mass left outside [eps, 1 - eps], valued at the clamp levels.
  e.error += eps * (std::abs(integrand(eps)) + std::abs(integrand(1.0 - eps)));
  return e;
}

// ---------------------------------------------------------------------------
// Shared copula

std::pair<JointSpec, JointSpec> shared_copula_build(
    std::shared_ptr<const CopulaSpec> c, std::vector<Distribution1D> margins_f,
    std::vector<Distribution1D> margins_g) {
  if (!c) throw DomainError("shared_copula_build: missing copula");
  require_dim(margins_f.size(), margins_g.size(), "shared_copula_build");
  JointSpec jf(std::move(margins_f), c);
  JointSpec jg(std::move(margins_g), c);
  return {std::move(jf), std::move(jg)};
}

std::vector<std::vector<double>> discretize_joint(const JointSpec& j) {
  if (j.copula->kind() != CopulaSpec::Kind::EmpiricalCopula) {
    throw DomainError("discretize_joint: needs an EmpiricalCopula");
  }
  std::vector<std::vector<double>> points;
  points.reserve(j.copula->size());
  for (const auto& row : j.copula->rows()) {
    std::vector<double> x(j.dim());
    for (std::size_t i = 0; i < j.dim(); ++i) x[i] = j.margins[i].quantile(row[i]);
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace wassercop
