#include "wassercop/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wassercop/errors.hpp"
#include "wassercop/wasserstein.hpp"

namespace wassercop {

// ---------------------------------------------------------------------------
// Generators. Raw bit manipulation keeps the streams identical across
// standard libraries.

double InstanceGenerator::real(double lo, double hi) {
  const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::size_t InstanceGenerator::integer(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1));
}

std::vector<double> InstanceGenerator::unit_point(std::size_t d) {
  std::vector<double> u(d);
  for (double& v : u) v = real(0.0, 1.0);
  return u;
}

Distribution1D InstanceGenerator::empirical(std::size_t max_atoms) {
  const std::size_t n = integer(1, max_atoms);
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::round(real(-5.0, 5.0) * 1000.0) / 1000.0;
    atoms.push_back({x, static_cast<double>(integer(1, 9))});
  }
  return Distribution1D::empirical(std::move(atoms));
}

CopulaSpec InstanceGenerator::copula(std::size_t n, std::size_t d) {
  const bool comonotone = integer(0, 2) == 0;
  std::vector<std::vector<double>> data(n, std::vector<double>(d));
  for (auto& row : data) {
    const double common = real(0.0, 1.0);
    for (double& v : row) v = comonotone ? common : real(0.0, 1.0);
  }
  return CopulaSpec::empirical_from_data(data);
}

DiscreteMeasureND InstanceGenerator::measure(std::size_t max_atoms, std::size_t d) {
  const std::size_t n = integer(1, max_atoms);
  std::vector<std::vector<double>> locations(n, std::vector<double>(d));
  std::vector<Rational> masses;
  for (auto& x : locations) {
    for (double& v : x) v = std::round(real(-3.0, 3.0) * 100.0) / 100.0;
    masses.emplace_back(static_cast<long long>(integer(1, 9)));
  }
  return {std::move(locations), std::move(masses)};
}

DiscreteMeasureND InstanceGenerator::uniform_measure(std::size_t n, std::size_t d) {
  std::vector<std::vector<double>> locations;
  while (locations.size() < n) {
    std::vector<double> x(d);
    for (double& v : x) v = std::round(real(-3.0, 3.0) * 64.0) / 64.0;
    // atoms must stay distinct or the constructor merges them
    if (std::find(locations.begin(), locations.end(), x) == locations.end())
      locations.push_back(std::move(x));
  }
  return DiscreteMeasureND::uniform(std::move(locations));
}

// ---------------------------------------------------------------------------
// Suites

namespace {

std::vector<Distribution1D> random_margins(InstanceGenerator& gen, std::size_t d) {
  std::vector<Distribution1D> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(gen.empirical(6));
  return out;
}

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

void track(SuiteResult& r, double gap, bool ok) {
  r.max_gap = std::max(r.max_gap, gap);
  r.passed = r.passed && ok;
  ++r.instances;
}

SuiteResult comonotone_suite(std::uint64_t seed, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "comonotone";
  InstanceGenerator gen(seed);
  for (int k = 0; k < 200; ++k) {
    const auto f = gen.empirical();
    const auto g = gen.empirical();
    for (double p : {1.0, 2.0, 3.0}) {
      const GapReport rep = verify_comonotone_optimal(f, g, p, opt);
      track(r, rep.gap / std::max(1.0, rep.lp_value), rep.passed);
    }
  }
  return r;
}

SuiteResult formulas_suite(std::uint64_t seed, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "formulas";
  InstanceGenerator gen(seed);
  for (int k = 0; k < 200; ++k) {
    const auto f = gen.empirical();
    const auto g = gen.empirical();
    const double cdf_route = w1_cdf(f, g).power_value;
    const double q1 = wp_quantile(f, g, 1.0).power_value + opt.formula_offset;
    track(r, std::abs(cdf_route - q1), std::abs(cdf_route - q1) <= 1e-10);
    for (double p : {1.0, 2.0, 3.0}) {
      const double via_m = wp_via_M(f, g, p).power_value;
      const double q = wp_quantile(f, g, p).power_value + opt.formula_offset;
      track(r, std::abs(via_m - q), std::abs(via_m - q) <= 1e-10);
    }
  }
  return r;
}

SuiteResult metric_suite(std::uint64_t seed, const VerifyOptions&) {
  SuiteResult r;
  r.name = "metric";
  InstanceGenerator gen(seed);
  for (int k = 0; k < 1000; ++k) {
    const auto a = gen.empirical();
    const auto b = gen.empirical();
    const auto c = gen.empirical();
    for (double p : {1.0, 2.0}) {
      const double self = wp_quantile(a, a, p).value;
      track(r, self, self == 0.0);
      const double ab = wp_quantile(a, b, p).value;
      const double ba = wp_quantile(b, a, p).value;
      track(r, std::abs(ab - ba), std::abs(ab - ba) <= 1e-12);
      const double ac = wp_quantile(a, c, p).value;
      const double bc = wp_quantile(b, c, p).value;
      const double excess = std::max(0.0, ac - (ab + bc));
      track(r, excess, excess <= 1e-10);
    }
  }
  return r;
}

SuiteResult decomposition_suite(std::uint64_t seed, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "decomposition";
  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = gen.integer(2, 3);
    auto c = std::make_shared<const CopulaSpec>(gen.copula(gen.integer(2, 10), d));
    const auto mf = random_margins(gen, d);
    const auto mg = random_margins(gen, d);
    for (double p : {1.0, 2.0, 3.0}) {
      const GapReport rep = verify_shared_copula_decomposition(c, mf, mg, p, opt);
      track(r, rep.gap / std::max(1.0, rep.lp_value), rep.passed);
    }
  }
  return r;
}

SuiteResult necessity_suite(std::uint64_t seed, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "necessity";
  auto c_mu = std::make_shared<const CopulaSpec>(
      CopulaSpec::empirical({{0.25, 0.25}, {0.75, 0.75}}));
  auto c_nu = std::make_shared<const CopulaSpec>(
      CopulaSpec::empirical({{0.25, 0.75}, {0.75, 0.25}}));
  const std::vector<Distribution1D> margins(2, Distribution1D::uniform(0.0, 1.0));
  const NecessityReport witness = verify_necessity(c_mu, c_nu, margins, 2.0, opt);
  const bool witnessed = witness.strict_gap && witness.lp_value >= 0.1 &&
                         witness.coordinate_sum == 0.0;
  track(r, 0.0, witnessed && witness.projection_bound_holds);
  std::ostringstream os;
  os << "witness (p=2): mu atoms";
  for (const auto& x : witness.source_atoms) os << ' ' << format_point(x);
  os << "; nu atoms";
  for (const auto& x : witness.target_atoms) os << ' ' << format_point(x);
  os << "; LP = " << witness.lp_value
     << " > sum_i W_p(mu_i, nu_i)^p = " << witness.coordinate_sum;
  r.notes.push_back(os.str());

  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const std::size_t d = gen.integer(2, 3);
    const auto mu = gen.measure(8, d);
    const auto nu = gen.measure(8, d);
    const double p = static_cast<double>(gen.integer(1, 3));
    const double lp = solve_ot(mu, nu, p_norm_power_cost(p), opt.ot).value;
    const double sum =
        wp_lower_bound_nd(mu.margins(), nu.margins(), p) + opt.formula_offset;
    const double shortfall = std::max(0.0, sum - lp);
    track(r, shortfall, shortfall <= 1e-10);
  }
  return r;
}

SuiteResult frechet_suite(std::uint64_t seed, const VerifyOptions&) {
  SuiteResult r;
  r.name = "frechet";
  InstanceGenerator gen(seed);
  for (std::size_t d : {2U, 3U, 4U}) {
    for (int inst = 0; inst < 100; ++inst) {
      const CopulaSpec c = gen.copula(gen.integer(2, 12), d);
      for (int k = 0; k < 100; ++k) {
        const auto u = gen.unit_point(d);
        const FrechetHoeffdingResult fh = frechet_hoeffding_check(c, u);
        const double excess = std::max({0.0, fh.lower - fh.value, fh.value - fh.upper});
        track(r, excess, fh.ok);
      }
    }
  }
  return r;
}

SuiteResult sandwich_suite(std::uint64_t seed, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "sandwich";
  InstanceGenerator gen(seed);
  const std::pair<double, double> exponents[] = {{1, 2}, {2, 1}, {2, 3}, {3, 2}};
  for (const auto& [p, q] : exponents) {
    for (std::size_t d : {2U, 3U}) {
      for (int k = 0; k < 50; ++k) {
        auto c = std::make_shared<const CopulaSpec>(gen.copula(gen.integer(2, 10), d));
        const auto mf = random_margins(gen, d);
        const auto mg = random_margins(gen, d);
        const SandwichReport rep = verify_wpq_sandwich(c, mf, mg, p, q, opt);
        const double excess =
            std::max({0.0, rep.lower - rep.lp_value, rep.lp_value - rep.upper});
        track(r, excess, rep.passed);
      }
    }
  }
  return r;
}

SuiteResult continuous_suite(std::uint64_t, const VerifyOptions& opt) {
  SuiteResult r;
  r.name = "continuous";
  const auto f = Distribution1D::uniform(0.0, 1.0);
  const auto g = Distribution1D::uniform(0.0, 2.0);
  const double quad = wp_quantile(f, g, 2.0, GridSpec::adaptive(1e-10)).power_value +
                      opt.formula_offset;
  track(r, std::abs(quad - 1.0 / 3.0), std::abs(quad - 1.0 / 3.0) <= 1e-8);

  constexpr std::size_t n = 200;
  std::vector<std::vector<double>> xs;
  std::vector<std::vector<double>> ys;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = (static_cast<double>(k) + 0.5) / n;
    xs.push_back({f.quantile(u)});
    ys.push_back({g.quantile(u)});
  }
  OtOptions ot = opt.ot;
  ot.cap = std::max(ot.cap, n);
  const double lp = solve_ot(DiscreteMeasureND::uniform(xs),
                             DiscreteMeasureND::uniform(ys),
                             p_norm_power_cost(2.0), ot)
                        .value;
  const double rel = std::abs(lp - quad) / quad;
  track(r, rel, rel <= 0.02);
  return r;
}

SuiteResult assignment_suite(std::uint64_t seed, const VerifyOptions&) {
  SuiteResult r;
  r.name = "assignment";
  InstanceGenerator gen(seed);
  OtOptions simplex_only;
  simplex_only.assignment_fast_path = false;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int k = 0; k < 40; ++k) {
      const std::size_t d = gen.integer(1, 3);
      const auto mu = gen.uniform_measure(n, d);
      const auto nu = gen.uniform_measure(n, d);
      const auto cost = p_norm_power_cost(static_cast<double>(gen.integer(1, 3)));
      const double hungarian = solve_assignment(mu, nu, cost).value;
      const double brute = solve_assignment_exhaustive(mu, nu, cost).value;
      track(r, std::abs(hungarian - brute), hungarian == brute);
      const double lp = solve_ot(mu, nu, cost, simplex_only).value;
      track(r, std::abs(lp - brute), std::abs(lp - brute) <= 1e-12 * std::max(1.0, brute));
    }
  }
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "comonotone", "formulas", "metric",     "decomposition", "necessity",
      "frechet",    "sandwich", "continuous", "assignment"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      const VerifyOptions& options) {
  if (name == "comonotone") return comonotone_suite(seed, options);
  if (name == "formulas") return formulas_suite(seed, options);
  if (name == "metric") return metric_suite(seed, options);
  if (name == "decomposition") return decomposition_suite(seed, options);
  if (name == "necessity") return necessity_suite(seed, options);
  if (name == "frechet") return frechet_suite(seed, options);
  if (name == "sandwich") return sandwich_suite(seed, options);
  if (name == "continuous") return continuous_suite(seed, options);
  if (name == "assignment") return assignment_suite(seed, options);
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace wassercop
