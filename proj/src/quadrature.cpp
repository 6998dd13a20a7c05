#include "wassercop/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <string>
#include <vector>

#include "wassercop/errors.hpp"

namespace wassercop {

namespace {

// Kronrod 15-point abscissae on [0, 1); the odd entries are the 7-point
// Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxPanels = 4000;

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a,
                       double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[k] * sum;
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

Estimate integrate_mapped(const std::function<double(double)>& f,
                          std::vector<double> knots, double tol) {
  std::priority_queue<Panel> panels;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    panels.push(gauss_kronrod_15(f, knots[k], knots[k + 1]));
  }
  auto totals = [&] {
    Estimate e;
    auto copy = panels;
    while (!copy.empty()) {
      e.value += copy.top().value;
      e.error += copy.top().error;
      copy.pop();
    }
    return e;
  };

  Estimate total = totals();
  int count = static_cast<int>(panels.size());
  while (total.error > tol * std::max(1.0, std::abs(total.value)) &&
         count < kMaxPanels) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    const Panel left = gauss_kronrod_15(f, worst.a, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.b);
    total.value += left.value + right.value - worst.value;
    total.error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed the drift of incremental updates.
  total = totals();
  if (!std::isfinite(total.value) || !std::isfinite(total.error)) {
    throw NumericalError("adaptive quadrature produced a non-finite result");
  }
  return total;
}

}  // namespace

Estimate integrate_adaptive(const std::function<double(double)>& f, double a,
                            double b, double tol,
                            std::span<const double> breaks) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_adaptive: invalid interval");
  }
  if (!(tol > 0.0)) throw DomainError("integrate_adaptive: tol must be > 0");
  if (a == b) return {};

  std::vector<double> knots{a};
  for (double t : breaks) {
    if (t > a && t < b) knots.push_back(t);
  }
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return integrate_mapped(f, std::move(knots), tol);
}

Estimate integrate_upper_tail(const std::function<double(double)>& f, double a,
                              double tol) {
  if (!std::isfinite(a)) throw DomainError("integrate_upper_tail: a not finite");
  // x = a + t / (1 - t), t in [0, 1).
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    const double fx = f(a + t / s);
    return fx == 0.0 ? 0.0 : fx / (s * s);
  };
  return integrate_mapped(mapped, {0.0, 0.5, 0.9, 0.99, 1.0}, tol);
}

Estimate integrate_lower_tail(const std::function<double(double)>& f, double b,
                              double tol) {
  return integrate_upper_tail([&](double t) { return f(2.0 * b - t); }, b,
                              tol);
}

double default_grid_tolerance() {
  if (const char* env = std::getenv("WASSERCOP_GRID_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end != env && *end == '\0' && tol > 0.0 && std::isfinite(tol)) {
      return tol;
    }
  }
  return kDefaultQuadratureTol;
}

}  // namespace wassercop
