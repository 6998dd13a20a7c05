#include "wassercop/ot_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "wassercop/errors.hpp"

namespace wassercop {

// ---------------------------------------------------------------------------
// DiscreteMeasureND

DiscreteMeasureND::DiscreteMeasureND(std::vector<std::vector<double>> locations,
                                     std::vector<Rational> masses) {
  if (locations.empty()) throw DomainError("discrete measure: no atoms");
  if (locations.size() != masses.size()) {
    throw DomainError("discrete measure: location/mass count mismatch");
  }
  dim_ = locations.front().size();
  if (dim_ == 0) throw DomainError("discrete measure: zero dimension");

  std::map<std::vector<double>, std::size_t> index;
  Rational total = 0;
  for (std::size_t k = 0; k < locations.size(); ++k) {
    if (locations[k].size() != dim_) {
      throw DomainError("discrete measure: inconsistent atom dimension");
    }
    for (double x : locations[k]) {
      if (!std::isfinite(x)) throw DomainError("discrete measure: non-finite location");
    }
    if (masses[k] <= 0) throw DomainError("discrete measure: mass must be positive");
    total += masses[k];
    auto [it, inserted] = index.emplace(locations[k], locations_.size());
    if (inserted) {
      locations_.push_back(std::move(locations[k]));
      masses_.push_back(masses[k]);
    } else {
      masses_[it->second] += masses[k];
    }
  }
  for (Rational& m : masses_) m /= total;
}

DiscreteMeasureND DiscreteMeasureND::uniform(
    std::vector<std::vector<double>> locations) {
  std::vector<Rational> masses(locations.size(), Rational(1));
  return {std::move(locations), std::move(masses)};
}

DiscreteMeasureND DiscreteMeasureND::from_weights(
    std::vector<std::vector<double>> locations, std::span<const double> weights) {
  std::vector<Rational> masses;
  masses.reserve(weights.size());
  for (double w : weights) {
    if (!std::isfinite(w)) throw DomainError("discrete measure: non-finite weight");
    masses.emplace_back(w);
  }
  return {std::move(locations), std::move(masses)};
}

DiscreteMeasureND DiscreteMeasureND::from_distribution(const Distribution1D& d) {
  if (!d.is_atomic()) {
    throw DomainError("discrete measure: " + d.describe() + " is not atomic");
  }
  std::vector<std::vector<double>> locations;
  std::vector<double> weights;
  for (const Atom& a : d.atoms()) {
    locations.push_back({a.location});
    weights.push_back(a.weight);
  }
  return from_weights(std::move(locations), weights);
}

Distribution1D DiscreteMeasureND::margin(std::size_t i) const {
  if (i >= dim_) throw DomainError("discrete measure: margin index out of range");
  std::vector<Atom> atoms;
  atoms.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) {
    atoms.push_back({locations_[k][i], mass(k)});
  }
  return Distribution1D::empirical(std::move(atoms));
}

std::vector<Distribution1D> DiscreteMeasureND::margins() const {
  std::vector<Distribution1D> out;
  out.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out.push_back(margin(i));
  return out;
}

// ---------------------------------------------------------------------------
// Costs

CostFunction p_norm_power_cost(double p) {
  if (!(p >= 1.0)) throw DomainError("cost: p must be >= 1");
  return [p](std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), p);
    return s;
  };
}

CostFunction q_norm_power_cost(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("cost: p, q must be >= 1");
  return [p, q](std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), q);
    return std::pow(s, p / q);
  };
}

Rational DiscreteCoupling::margin_violation(const DiscreteMeasureND& source,
                                            const DiscreteMeasureND& target) const {
  std::vector<Rational> rows(source.size(), Rational(0));
  std::vector<Rational> cols(target.size(), Rational(0));
  for (const CouplingEntry& e : entries) {
    if (e.i >= source.size() || e.j >= target.size()) {
      throw DomainError("coupling: entry index out of range");
    }
    rows[e.i] += e.mass;
    cols[e.j] += e.mass;
  }
  Rational worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max<Rational>(worst, abs(rows[i] - source.masses()[i]));
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    worst = std::max<Rational>(worst, abs(cols[j] - target.masses()[j]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Transportation simplex

namespace {

constexpr std::size_t kMaxPivots = 1'000'000;

struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> c;

  double operator()(std::size_t i, std::size_t j) const { return c[i * cols + j]; }
};

CostMatrix build_costs(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu,
                       const CostFunction& cost) {
  CostMatrix m{mu.size(), nu.size(), {}};
  m.c.reserve(m.rows * m.cols);
  for (const auto& x : mu.locations()) {
    for (const auto& y : nu.locations()) {
      const double v = cost(x, y);
      if (!std::isfinite(v)) throw NumericalError("solve_ot: non-finite cost");
      if (v < 0.0) throw DomainError("solve_ot: negative cost");
      m.c.push_back(v);
    }
  }
  return m;
}

double solution_value(const CostMatrix& costs, const DiscreteCoupling& w) {
  std::vector<double> terms;
  terms.reserve(w.entries.size());
  for (const CouplingEntry& e : w.entries) {
    terms.push_back(e.mass.convert_to<double>() * costs(e.i, e.j));
  }
  return compensated_sum(terms);
}

class TransportationSimplex {
 public:
  TransportationSimplex(const CostMatrix& costs, std::vector<Rational> supply,
                        std::vector<Rational> demand)
      : costs_(costs),
        m_(costs.rows),
        n_(costs.cols),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        flow_(m_ * n_, Rational(0)),
        basic_(m_ * n_, false),
        u_(m_),
        v_(n_) {
    double scale = 1.0;
    for (double c : costs_.c) scale = std::max(scale, std::abs(c));
    tol_ = 1e-12 * scale;
  }

  std::size_t solve() {
    north_west_corner();
    std::size_t pivots = 0;
    while (true) {
      compute_potentials();
      const auto entering = find_entering();
      if (!entering) break;
      pivot(*entering);
      if (++pivots > kMaxPivots) {
        throw NumericalError("solve_ot: pivot limit exceeded");
      }
    }
    return pivots;
  }

  DiscreteCoupling witness() const {
    DiscreteCoupling w;
    for (std::size_t cell = 0; cell < flow_.size(); ++cell) {
      if (basic_[cell] && flow_[cell] > 0) {
        w.entries.push_back({cell / n_, cell % n_, flow_[cell]});
      }
    }
    return w;
  }

  const std::vector<double>& row_potentials() const { return u_; }
  const std::vector<double>& column_potentials() const { return v_; }

 private:
  std::size_t cell(std::size_t i, std::size_t j) const { return i * n_ + j; }

  // Spanning-tree basis with m + n - 1 cells; degenerate cells carry zero.
  void north_west_corner() {
    std::vector<Rational> a = supply_;
    std::vector<Rational> b = demand_;
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const Rational x = std::min(a[i], b[j]);
      basic_[cell(i, j)] = true;
      flow_[cell(i, j)] = x;
      a[i] -= x;
      b[j] -= x;
      if (i + 1 == m_ && j + 1 == n_) break;
      if ((a[i] == 0 && i + 1 < m_) || j + 1 == n_) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<std::vector<std::size_t>> adjacency() const {
    // Nodes 0..m-1 are rows, m..m+n-1 columns; edges are basic cells.
    std::vector<std::vector<std::size_t>> adj(m_ + n_);
    for (std::size_t c = 0; c < basic_.size(); ++c) {
      if (!basic_[c]) continue;
      adj[c / n_].push_back(c);
      adj[m_ + c % n_].push_back(c);
    }
    return adj;
  }

  void compute_potentials() {
    const auto adj = adjacency();
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t c : adj[node]) {
        const std::size_t i = c / n_;
        const std::size_t j = c % n_;
        if (node < m_ && !seen[m_ + j]) {
          v_[j] = costs_(i, j) - u_[i];
          seen[m_ + j] = true;
          stack.push_back(m_ + j);
        } else if (node >= m_ && !seen[i]) {
          u_[i] = costs_(i, j) - v_[j];
          seen[i] = true;
          stack.push_back(i);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw NumericalError("solve_ot: basis is not a spanning tree");
    }
  }

  // Bland's rule: lowest-index cell with negative reduced cost.
  std::optional<std::size_t> find_entering() const {
    for (std::size_t c = 0; c < basic_.size(); ++c) {
      if (basic_[c]) continue;
      const std::size_t i = c / n_;
      const std::size_t j = c % n_;
      if (costs_(i, j) - u_[i] - v_[j] < -tol_) return c;
    }
    return std::nullopt;
  }

  // Basic cells on the tree path from row i to column j, starting at row i.
  std::vector<std::size_t> tree_path(std::size_t i, std::size_t j) const {
    const auto adj = adjacency();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> via(m_ + n_, kNone);
    std::vector<bool> seen(m_ + n_, false);
    std::vector<std::size_t> queue{i};
    seen[i] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t c : adj[node]) {
        const std::size_t other = node < m_ ? m_ + c % n_ : c / n_;
        if (seen[other]) continue;
        seen[other] = true;
        via[other] = c;
        queue.push_back(other);
      }
    }
    std::vector<std::size_t> path;
    for (std::size_t node = m_ + j; node != i;) {
      const std::size_t c = via[node];
      if (c == kNone) throw NumericalError("solve_ot: disconnected basis");
      path.push_back(c);
      node = node < m_ ? m_ + c % n_ : c / n_;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot(std::size_t entering) {
    const auto path = tree_path(entering / n_, entering % n_);
    // Path cells alternate -, +, -, ... starting next to the entering cell.
    std::optional<std::size_t> leaving;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t c = path[k];
      if (!leaving || flow_[c] < flow_[*leaving] ||
          (flow_[c] == flow_[*leaving] && c < *leaving)) {
        leaving = c;
      }
    }
    const Rational theta = flow_[*leaving];
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0) {
        flow_[path[k]] -= theta;
      } else {
        flow_[path[k]] += theta;
      }
    }
    flow_[entering] = theta;
    basic_[entering] = true;
    basic_[*leaving] = false;
    flow_[*leaving] = 0;
  }

  const CostMatrix& costs_;
  std::size_t m_;
  std::size_t n_;
  std::vector<Rational> supply_;
  std::vector<Rational> demand_;
  std::vector<Rational> flow_;
  std::vector<bool> basic_;
  std::vector<double> u_;
  std::vector<double> v_;
  double tol_ = 0.0;
};

bool is_uniform_pair(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu) {
  if (mu.size() != nu.size()) return false;
  const Rational expected(1, static_cast<long long>(mu.size()));
  auto all_equal = [&](const DiscreteMeasureND& m) {
    return std::all_of(m.masses().begin(), m.masses().end(),
                       [&](const Rational& r) { return r == expected; });
  };
  return all_equal(mu) && all_equal(nu);
}

void check_cap(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu,
               std::size_t cap) {
  if (mu.size() > cap || nu.size() > cap) {
    throw CapExceeded("solve_ot: " + std::to_string(mu.size()) + " x " +
                      std::to_string(nu.size()) + " atoms exceeds cap " +
                      std::to_string(cap));
  }
}

void check_dims(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu) {
  if (mu.dim() != nu.dim()) throw DomainError("solve_ot: dimension mismatch");
}

// Plain left-to-right sum so the Hungarian and exhaustive paths agree bit for
// bit on the same permutation.
double permutation_cost(const CostMatrix& costs,
                        const std::vector<std::size_t>& perm) {
  double s = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) s += costs(i, perm[i]);
  return s;
}

AssignmentResult hungarian(const CostMatrix& costs) {
  const std::size_t n = costs.rows;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is the virtual start column.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = costs(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult r;
  r.permutation.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) r.permutation[row_of[j] - 1] = j - 1;
  r.value = permutation_cost(costs, r.permutation) / static_cast<double>(n);
  r.row_potentials.assign(u.begin() + 1, u.end());
  r.column_potentials.assign(v.begin() + 1, v.end());
  return r;
}

void require_assignment_shape(const DiscreteMeasureND& mu,
                              const DiscreteMeasureND& nu) {
  check_dims(mu, nu);
  if (!is_uniform_pair(mu, nu)) {
    throw DomainError(
        "solve_assignment: needs equal atom counts and equal masses 1/n");
  }
}

}  // namespace

OtSolution solve_ot(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu,
                    const CostFunction& cost, const OtOptions& options) {
  check_dims(mu, nu);
  check_cap(mu, nu, options.cap);
  const CostMatrix costs = build_costs(mu, nu, cost);

  OtSolution s;
  if (options.assignment_fast_path && is_uniform_pair(mu, nu)) {
    const AssignmentResult a = hungarian(costs);
    const Rational mass(1, static_cast<long long>(mu.size()));
    for (std::size_t i = 0; i < a.permutation.size(); ++i) {
      s.witness.entries.push_back({i, a.permutation[i], mass});
    }
    s.row_potentials = a.row_potentials;
    s.column_potentials = a.column_potentials;
    s.used_assignment = true;
  } else {
    TransportationSimplex simplex(costs, mu.masses(), nu.masses());
    s.pivots = simplex.solve();
    s.witness = simplex.witness();
    s.row_potentials = simplex.row_potentials();
    s.column_potentials = simplex.column_potentials();
  }
  s.value = solution_value(costs, s.witness);
  if (s.witness.margin_violation(mu, nu) != 0) {
    throw NumericalError("solve_ot: witness violates the margins");
  }
  return s;
}

double optimality_certificate_gap(const DiscreteMeasureND& mu,
                                  const DiscreteMeasureND& nu,
                                  const CostFunction& cost,
                                  const OtSolution& solution) {
  const CostMatrix costs = build_costs(mu, nu, cost);
  const auto& u = solution.row_potentials;
  const auto& v = solution.column_potentials;
  if (u.size() != mu.size() || v.size() != nu.size()) {
    throw DomainError("certificate: potential sizes do not match the problem");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      worst = std::max(worst, -(costs(i, j) - u[i] - v[j]));
    }
  }
  for (const CouplingEntry& e : solution.witness.entries) {
    worst = std::max(worst, std::abs(costs(e.i, e.j) - u[e.i] - v[e.j]));
  }
  std::vector<double> dual_terms;
  for (std::size_t i = 0; i < mu.size(); ++i) dual_terms.push_back(mu.mass(i) * u[i]);
  for (std::size_t j = 0; j < nu.size(); ++j) dual_terms.push_back(nu.mass(j) * v[j]);
  worst = std::max(worst, std::abs(compensated_sum(dual_terms) - solution.value));
  return worst;
}

AssignmentResult solve_assignment(const DiscreteMeasureND& mu,
                                  const DiscreteMeasureND& nu,
                                  const CostFunction& cost) {
  require_assignment_shape(mu, nu);
  return hungarian(build_costs(mu, nu, cost));
}

AssignmentResult solve_assignment_exhaustive(const DiscreteMeasureND& mu,
                                             const DiscreteMeasureND& nu,
                                             const CostFunction& cost) {
  require_assignment_shape(mu, nu);
  if (mu.size() > 9) throw CapExceeded("exhaustive assignment: n > 9");
  const CostMatrix costs = build_costs(mu, nu, cost);
  std::vector<std::size_t> perm(mu.size());
  std::iota(perm.begin(), perm.end(), 0);
  AssignmentResult best;
  double best_sum = std::numeric_limits<double>::infinity();
  do {
    const double s = permutation_cost(costs, perm);
    if (s < best_sum) {
      best_sum = s;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.value = best_sum / static_cast<double>(mu.size());
  return best;
}

}  // namespace wassercop
