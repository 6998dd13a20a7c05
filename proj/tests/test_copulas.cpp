#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "wassercop/copulas.hpp"
#include "wassercop/errors.hpp"
#include "wassercop/verification.hpp"

using namespace wassercop;
using Catch::Approx;
using V = std::vector<double>;

namespace {

Distribution1D two_atoms() { return Distribution1D::empirical({{0, .5}, {1, .5}}); }
Distribution1D skewed() { return Distribution1D::empirical({{0, .25}, {2, .75}}); }

}  // namespace

TEST_CASE("upper bound M", "[copulas]") {
  CHECK(eval_M(V{0.3, 0.7}) == 0.3);
  CHECK(eval_M(V{1, 1, 0.42}) == 0.42);
  CHECK(eval_M(V{0, 0.9}) == 0.0);
  CHECK_THROWS_AS(eval_M(V{0.5, 1.2}), DomainError);
  CHECK_THROWS_AS(eval_M(V{}), DomainError);
}

TEST_CASE("lower bound W", "[copulas]") {
  CHECK(eval_W(V{0.3, 0.7}) == 0.0);
  CHECK(eval_W(V{0.8, 0.9}) == Approx(0.7).margin(1e-15));
  CHECK(eval_W(V{1, 1, 0.37}) == Approx(0.37).margin(1e-15));
  CHECK(eval_W(V{0.2, 1}) == Approx(0.2).margin(1e-15));
}

TEST_CASE("eval_copula", "[copulas]") {
  CHECK(eval_copula(CopulaSpec::comonotone(2), V{0.2, 0.5}) == 0.2);
  const auto diag = CopulaSpec::empirical({{.25, .25}, {.75, .75}});
  CHECK(eval_copula(diag, V{.5, .5}) == 0.5);
  const auto anti = CopulaSpec::empirical({{.25, .75}, {.75, .25}});
  CHECK(eval_copula(anti, V{.5, .5}) == 0.0);
  CHECK(eval_copula(CopulaSpec::lower_frechet_hoeffding(2), V{0.8, 0.9}) ==
        Approx(0.7));
  CHECK_THROWS_AS(eval_copula(diag, V{.5, .5, .5}), DomainError);
}

TEST_CASE("empirical copula at grid points matches the step count", "[copulas]") {
  InstanceGenerator gen(3);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = gen.integer(2, 10);
    const std::size_t d = gen.integer(2, 4);
    const auto c = gen.copula(n, d);
    std::uniform_int_distribution<std::size_t> pick(0, n);
    for (int t = 0; t < 20; ++t) {
      V u(d);
      for (auto& x : u) x = static_cast<double>(pick(rng)) / static_cast<double>(n);
      CHECK(c(u) == Approx(c.step_count(u)).margin(1e-15));
    }
  }
}

TEST_CASE("empirical copula from raw data", "[copulas]") {
  const auto c = CopulaSpec::empirical_from_data({{10, -3}, {20, 5}, {0, 1}});
  REQUIRE(c.size() == 3);
  CHECK(c.rows()[0] == V{2.0 / 3, 1.0 / 3});
  CHECK(c.rows()[1] == V{1.0, 1.0});
  CHECK(c.rows()[2] == V{1.0 / 3, 2.0 / 3});
  CHECK(c.margin_slack() == Approx(1.0 / 3));
  CHECK(CopulaSpec::comonotone(3).margin_slack() == 0.0);
}

TEST_CASE("copula construction errors", "[copulas][errors]") {
  CHECK_THROWS_AS(CopulaSpec::empirical({}), DomainError);
  CHECK_THROWS_AS(CopulaSpec::empirical({{0.5}}), DomainError);
  CHECK_THROWS_AS(CopulaSpec::empirical({{0.5, 1.5}}), DomainError);
  CHECK_THROWS_AS(CopulaSpec::empirical({{0.5, 0.5}, {0.5}}), DomainError);
  CHECK_THROWS_AS(CopulaSpec::lower_frechet_hoeffding(1), DomainError);
  CHECK_THROWS_AS(CopulaSpec::empirical_from_data({{1, NAN}}), DomainError);
  CHECK_FALSE(CopulaSpec::lower_frechet_hoeffding(3).is_copula());
  CHECK(CopulaSpec::lower_frechet_hoeffding(2).is_copula());
}

TEST_CASE("Frechet-Hoeffding check", "[copulas][frechet]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0, 1);
  const auto m = CopulaSpec::comonotone(3);
  for (int k = 0; k < 100; ++k) {
    const V u{unif(rng), unif(rng), unif(rng)};
    const auto r = frechet_hoeffding_check(m, u);
    CHECK(r.ok);
    CHECK(r.value == r.upper);
  }
  InstanceGenerator gen(12);
  for (std::size_t d : {2U, 3U, 4U}) {
    const auto c = gen.copula(7, d);
    for (int k = 0; k < 1000; ++k) CHECK(frechet_hoeffding_check(c, gen.unit_point(d)).ok);
  }
  auto corrupted = [](std::span<const double> u) { return u[0] * u[1] + 0.5; };
  const auto bad = frechet_hoeffding_check(corrupted, V{.9, .9}, 1e-12);
  CHECK_FALSE(bad.ok);
  CHECK(bad.value == Approx(1.31));
  CHECK(bad.upper == 0.9);
}

TEST_CASE("raw step estimator can break the lower bound", "[copulas][frechet]") {
  // a comonotone sample: at u just below the top the step count misses by 1/n
  const auto c = CopulaSpec::empirical({{0.5, 0.5}, {1.0, 1.0}});
  const V u{0.99, 0.99};
  CHECK(c.step_count(u) == 0.5);
  CHECK(eval_W(u) == Approx(0.98));
  CHECK(c(u) == Approx((1 + 0.98 * 0.98) / 2));
  CHECK(c(u) >= eval_W(u));
}

TEST_CASE("copulas are d-increasing", "[copulas][property]") {
  InstanceGenerator gen(21);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unif(0, 1);
  for (int k = 0; k < 300; ++k) {
    const std::size_t d = gen.integer(2, 4);
    const auto c = (k % 5 == 0) ? CopulaSpec::comonotone(d)
                 : (k % 5 == 1 && d == 2) ? CopulaSpec::lower_frechet_hoeffding(2)
                                           : gen.copula(gen.integer(2, 9), d);
    V lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double a = unif(rng), b = unif(rng);
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
    }
    CHECK(copula_volume(c, lo, hi) >= -1e-12);
  }
  const V zero(3, 0.0), one(3, 1.0);
  CHECK(copula_volume(gen.copula(5, 3), zero, one) == Approx(1.0).margin(1e-14));
}

TEST_CASE("empirical copula has near-uniform margins", "[copulas][property]") {
  InstanceGenerator gen(31);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = gen.integer(2, 12);
    const auto c = gen.copula(n, 3);
    for (double t : {0.1, 0.33, 0.5, 0.9}) {
      CHECK(std::abs(c(V{t, 1, 1}) - t) <= c.margin_slack() + 1e-12);
      CHECK(c(V{0, t, 1}) == 0.0);
    }
  }
}

TEST_CASE("Sklar assembly", "[copulas][sklar]") {
  auto m = std::make_shared<const CopulaSpec>(CopulaSpec::comonotone(2));
  const JointSpec uu({Distribution1D::uniform(0, 1), Distribution1D::uniform(0, 1)}, m);
  CHECK(sklar_joint_cdf(uu, V{0.4, 0.6}) == Approx(0.4));
  CHECK(sklar_joint_cdf(uu, V{-INFINITY, 0.6}) == 0.0);
  CHECK(sklar_joint_cdf(uu, V{0.3, INFINITY}) == Approx(0.3));
  const JointSpec ee({two_atoms(), two_atoms()}, m);
  CHECK(sklar_joint_cdf(ee, V{0, 5}) == 0.5);
  CHECK_THROWS_AS(sklar_joint_cdf(ee, V{NAN, 0}), DomainError);
  CHECK_THROWS_AS(sklar_joint_cdf(ee, V{0}), DomainError);
  auto anti = std::make_shared<const CopulaSpec>(
      CopulaSpec::empirical({{.25, .75}, {.75, .25}}));
  const JointSpec ea({two_atoms(), skewed()}, anti);
  CHECK(sklar_joint_cdf(ea, V{-1e300, 0}) == 0.0);
  // margins are recovered when the other coordinate goes to +inf
  for (double x : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    CHECK(sklar_joint_cdf(ea, V{x, INFINITY}) == Approx(cdf(two_atoms(), x)).margin(1e-12));
  }
}

TEST_CASE("joint spec validation", "[copulas][errors]") {
  auto w3 = std::make_shared<const CopulaSpec>(CopulaSpec::lower_frechet_hoeffding(3));
  const std::vector<Distribution1D> three(3, two_atoms());
  CHECK_THROWS_AS(JointSpec(three, w3), DomainError);
  auto m2 = std::make_shared<const CopulaSpec>(CopulaSpec::comonotone(2));
  CHECK_THROWS_AS(JointSpec(three, m2), DomainError);
  CHECK_THROWS_AS(JointSpec(three, nullptr), DomainError);
}

TEST_CASE("comonotone coupling of atomic laws", "[copulas][coupling]") {
  {
    const auto pr = comonotone_coupling(two_atoms(), two_atoms());
    REQUIRE(pr.size() == 2);
    CHECK(pr.pairs[0] == std::pair<double, double>{0, 0});
    CHECK(pr.pairs[1] == std::pair<double, double>{1, 1});
    CHECK(pr.masses == V{.5, .5});
  }
  {
    const auto pr = comonotone_coupling(Distribution1D::empirical({{0, 1}}),
                                        Distribution1D::empirical({{3, 1}}));
    REQUIRE(pr.size() == 1);
    CHECK(pr.pairs[0] == std::pair<double, double>{0, 3});
    CHECK(pr.masses[0] == 1.0);
  }
  {
    const auto pr = comonotone_coupling(two_atoms(), skewed());
    REQUIRE(pr.size() == 3);
    CHECK(pr.pairs[0] == std::pair<double, double>{0, 0});
    CHECK(pr.pairs[1] == std::pair<double, double>{0, 2});
    CHECK(pr.pairs[2] == std::pair<double, double>{1, 2});
    CHECK(pr.masses == V{.25, .25, .5});
  }
}

TEST_CASE("comonotone coupling reproduces the margins", "[copulas][coupling][property]") {
  InstanceGenerator gen(41);
  for (int k = 0; k < 300; ++k) {
    const auto f = gen.empirical();
    const auto g = gen.empirical();
    const auto pr = comonotone_coupling(f, g);
    for (std::size_t i = 1; i < pr.size(); ++i) {
      CHECK(pr.pairs[i - 1].first <= pr.pairs[i].first);
      CHECK(pr.pairs[i - 1].second <= pr.pairs[i].second);
    }
    for (const auto& a : f.atoms()) {
      double s = 0;
      for (std::size_t i = 0; i < pr.size(); ++i)
        if (pr.pairs[i].first == a.location) s += pr.masses[i];
      CHECK(s == Approx(a.weight).margin(1e-12));
    }
    for (const auto& a : g.atoms()) {
      double s = 0;
      for (std::size_t i = 0; i < pr.size(); ++i)
        if (pr.pairs[i].second == a.location) s += pr.masses[i];
      CHECK(s == Approx(a.weight).margin(1e-12));
    }
  }
}

TEST_CASE("comonotone coupling of parametric laws uses a grid", "[copulas][coupling]") {
  const auto pr = comonotone_coupling(Distribution1D::uniform(0, 1),
                                      Distribution1D::uniform(0, 2), GridSpec::uniform(4));
  REQUIRE(pr.size() == 4);
  CHECK(pr.pairs[1].first == Approx(0.375));
  CHECK(pr.pairs[1].second == Approx(0.75));
  CHECK(pr.masses[3] == 0.25);
  CHECK_THROWS_AS(comonotone_coupling(Distribution1D::normal(0, 1), two_atoms(),
                                      GridSpec::adaptive()),
                  DomainError);
  CHECK_THROWS_AS(comonotone_coupling(Distribution1D::normal(0, 1), two_atoms(),
                                      GridSpec::uniform(1)),
                  DomainError);
}

TEST_CASE("expectation along the comonotone coupling", "[copulas][coupling]") {
  auto one = [](double, double) { return 1.0; };
  auto dist = [](double x, double y) { return std::abs(x - y); };
  CHECK(expect_comonotone(two_atoms(), skewed(), one).value == 1.0);
  CHECK(expect_comonotone(two_atoms(), two_atoms(), dist).value == 0.0);
  CHECK(expect_comonotone(two_atoms(), skewed(), dist).value == Approx(1.0).margin(1e-15));
  const auto n = Distribution1D::normal(0, 1);
  CHECK(expect_comonotone(n, n, one).value == Approx(1.0).margin(1e-9));
  const auto e = expect_comonotone(Distribution1D::uniform(0, 1),
                                   Distribution1D::uniform(0, 2),
                                   [](double x, double y) { return (x - y) * (x - y); });
  CHECK(e.value == Approx(1.0 / 3).margin(1e-9));
  const auto grid = expect_comonotone(Distribution1D::uniform(0, 1),
                                      Distribution1D::uniform(0, 2),
                                      [](double x, double y) { return (x - y) * (x - y); },
                                      GridSpec::uniform(1000));
  CHECK(grid.value == Approx(1.0 / 3).margin(1e-6));
  CHECK_THROWS_AS(
      expect_comonotone(two_atoms(), skewed(), [](double, double) { return NAN; }),
      DomainError);
}

TEST_CASE("shared copula construction", "[copulas][shared]") {
  auto m = std::make_shared<const CopulaSpec>(CopulaSpec::comonotone(2));
  const auto [jf, jg] = shared_copula_build(m, {two_atoms(), skewed()},
                                            {skewed(), two_atoms()});
  CHECK(jf.copula == jg.copula);
  CHECK(jf.copula->kind() == CopulaSpec::Kind::Comonotone);

  auto anti = std::make_shared<const CopulaSpec>(
      CopulaSpec::empirical({{.25, .75}, {.75, .25}}));
  const std::vector<Distribution1D> u01(2, Distribution1D::uniform(0, 1));
  const std::vector<Distribution1D> u02(2, Distribution1D::uniform(0, 2));
  {
    const auto [a, b] = shared_copula_build(anti, u01, u01);
    CHECK(discretize_joint(a) == discretize_joint(b));
  }
  {
    const auto [a, b] = shared_copula_build(anti, u01, u02);
    const auto xs = discretize_joint(a);
    const auto ys = discretize_joint(b);
    REQUIRE(xs.size() == 2);
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (std::size_t i = 0; i < 2; ++i) CHECK(ys[j][i] == 2 * xs[j][i]);
    CHECK(xs[0] == V{.25, .75});
  }
  CHECK_THROWS_AS(shared_copula_build(anti, u01, {Distribution1D::uniform(0, 1)}),
                  DomainError);
  CHECK_THROWS_AS(shared_copula_build(nullptr, u01, u01), DomainError);
  const auto [ca, cb] = shared_copula_build(m, u01, u01);
  CHECK_THROWS_AS(discretize_joint(ca), DomainError);
}
