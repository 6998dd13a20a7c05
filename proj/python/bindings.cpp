#include <optional>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wassercop/copulas.hpp"
#include "wassercop/distributions.hpp"
#include "wassercop/errors.hpp"
#include "wassercop/ot_oracle.hpp"
#include "wassercop/verification.hpp"
#include "wassercop/wasserstein.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace wassercop;

namespace {

GridSpec grid_of(const std::string& text) { return GridSpec::parse(text); }

std::vector<std::pair<double, double>> atoms_of(const Distribution1D& d) {
  std::vector<std::pair<double, double>> out;
  for (const Atom& a : d.atoms()) out.emplace_back(a.location, a.weight);
  return out;
}

DiscreteMeasureND measure_of(std::vector<std::vector<double>> points,
                             std::optional<std::vector<double>> weights) {
  if (!weights) return DiscreteMeasureND::uniform(std::move(points));
  return DiscreteMeasureND::from_weights(std::move(points), *weights);
}

py::dict solve(std::vector<std::vector<double>> x, std::vector<std::vector<double>> y,
               double p, std::optional<double> q, std::optional<std::vector<double>> wx,
               std::optional<std::vector<double>> wy, std::size_t cap, bool fast_path) {
  const auto mu = measure_of(std::move(x), std::move(wx));
  const auto nu = measure_of(std::move(y), std::move(wy));
  OtOptions opt;
  opt.cap = cap;
  opt.assignment_fast_path = fast_path;
  const CostFunction cost = q ? q_norm_power_cost(p, *q) : p_norm_power_cost(p);
  OtSolution sol;
  {
    py::gil_scoped_release release;
    sol = solve_ot(mu, nu, cost, opt);
  }
  py::list entries;
  for (const auto& e : sol.witness.entries)
    entries.append(py::make_tuple(e.i, e.j, e.mass.convert_to<double>()));
  return py::dict("value"_a = sol.value, "coupling"_a = entries,
                  "pivots"_a = sol.pivots, "used_assignment"_a = sol.used_assignment,
                  "certificate_gap"_a = optimality_certificate_gap(mu, nu, cost, sol));
}

}  // namespace

PYBIND11_MODULE(_wassercop, m) {
  m.doc() = "Wasserstein distances via quantile integrals, comonotone couplings "
            "and shared copulas, with an exact discrete OT oracle";

  py::register_exception<MomentError>(m, "MomentError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
  // DomainError derives from std::domain_error and arrives as ValueError

  py::class_<Distribution1D>(m, "Distribution")
      .def_static("empirical",
                  [](const std::vector<std::pair<double, double>>& atoms) {
                    std::vector<Atom> a;
                    for (const auto& [x, w] : atoms) a.push_back({x, w});
                    return Distribution1D::empirical(std::move(a));
                  },
                  "atoms"_a)
      .def_static("point_mass", &Distribution1D::point_mass, "location"_a)
      .def_static("uniform", &Distribution1D::uniform, "a"_a, "b"_a)
      .def_static("normal", &Distribution1D::normal, "mean"_a, "stddev"_a)
      .def_static("exponential", &Distribution1D::exponential, "rate"_a)
      .def("cdf", &Distribution1D::cdf, "x"_a)
      .def("quantile", &Distribution1D::quantile, "u"_a, "eps"_a = kDefaultClampEps)
      .def_property_readonly("atoms", &atoms_of)
      .def_property_readonly("is_atomic", &Distribution1D::is_atomic)
      .def("__repr__", &Distribution1D::describe);

  m.def("empirical_from_samples",
        [](const std::vector<double>& xs, std::optional<std::vector<double>> ws) {
          if (!ws) return empirical_from_samples(xs);
          return empirical_from_samples(xs, std::span<const double>(*ws));
        },
        "xs"_a, "ws"_a = py::none());
  m.def("moment", [](const Distribution1D& d, double p) { return moment(d, p).bound; },
        "d"_a, "p"_a);

  py::class_<CopulaSpec>(m, "Copula")
      .def_static("comonotone", &CopulaSpec::comonotone, "dim"_a)
      .def_static("lower_frechet_hoeffding", &CopulaSpec::lower_frechet_hoeffding, "dim"_a)
      .def_static("empirical", &CopulaSpec::empirical, "rows"_a)
      .def_static("from_data", &CopulaSpec::empirical_from_data, "data"_a)
      .def_property_readonly("dim", &CopulaSpec::dim)
      .def_property_readonly("is_copula", &CopulaSpec::is_copula)
      .def("__call__", [](const CopulaSpec& c, const std::vector<double>& u) { return c(u); });

  m.def("eval_M", [](const std::vector<double>& u) { return eval_M(u); }, "u"_a);
  m.def("eval_W", [](const std::vector<double>& u) { return eval_W(u); }, "u"_a);
  m.def("frechet_hoeffding_check",
        [](const CopulaSpec& c, const std::vector<double>& u) {
          const auto r = frechet_hoeffding_check(c, u);
          return py::dict("lower"_a = r.lower, "value"_a = r.value, "upper"_a = r.upper,
                          "ok"_a = r.ok);
        },
        "c"_a, "u"_a);
  m.def("comonotone_coupling",
        [](const Distribution1D& f, const Distribution1D& g, const std::string& grid) {
          const auto pr = comonotone_coupling(f, g, grid_of(grid));
          std::vector<std::tuple<double, double, double>> out;
          for (std::size_t k = 0; k < pr.size(); ++k)
            out.emplace_back(pr.pairs[k].first, pr.pairs[k].second, pr.masses[k]);
          return out;
        },
        "f"_a, "g"_a, "grid"_a = "uniform:1000");

  py::class_<DistanceReport>(m, "DistanceReport")
      .def_readonly("p", &DistanceReport::p)
      .def_readonly("q", &DistanceReport::q)
      .def_readonly("value", &DistanceReport::value)
      .def_readonly("power_value", &DistanceReport::power_value)
      .def_readonly("error_estimate", &DistanceReport::error_estimate)
      .def_readonly("bounds", &DistanceReport::bounds)
      .def_readonly("copula", &DistanceReport::copula)
      .def_property_readonly("method", [](const DistanceReport& r) { return to_string(r.method); })
      .def("__repr__", [](const DistanceReport& r) {
        return "DistanceReport(method=" + to_string(r.method) +
               ", value=" + std::to_string(r.value) + ")";
      });

  m.def("w1_cdf", [](const Distribution1D& f, const Distribution1D& g) { return w1_cdf(f, g); },
        "f"_a, "g"_a);
  m.def("wp_quantile",
        [](const Distribution1D& f, const Distribution1D& g, double p, const std::string& grid) {
          return wp_quantile(f, g, p, grid_of(grid));
        },
        "f"_a, "g"_a, "p"_a, "grid"_a = "adaptive");
  m.def("wp_via_M",
        [](const Distribution1D& f, const Distribution1D& g, double p, const std::string& grid) {
          return wp_via_M(f, g, p, grid_of(grid));
        },
        "f"_a, "g"_a, "p"_a, "grid"_a = "adaptive");
  m.def("wp_shared_nd",
        [](const CopulaSpec& c, const std::vector<Distribution1D>& mf,
           const std::vector<Distribution1D>& mg, double p, const std::string& grid) {
          return wp_shared_nd(c, mf, mg, p, grid_of(grid));
        },
        "copula"_a, "margins_f"_a, "margins_g"_a, "p"_a, "grid"_a = "adaptive");
  m.def("wpq_bounds",
        [](const CopulaSpec& c, const std::vector<Distribution1D>& mf,
           const std::vector<Distribution1D>& mg, double p, double q, const std::string& grid) {
          return wpq_bounds(c, mf, mg, p, q, grid_of(grid));
        },
        "copula"_a, "margins_f"_a, "margins_g"_a, "p"_a, "q"_a, "grid"_a = "adaptive");
  m.def("wp_lower_bound_nd",
        [](const std::vector<Distribution1D>& mf, const std::vector<Distribution1D>& mg,
           double p) { return wp_lower_bound_nd(mf, mg, p); },
        "margins_f"_a, "margins_g"_a, "p"_a);

  m.def("solve_ot", &solve, "x"_a, "y"_a, "p"_a = 1.0, "q"_a = py::none(),
        "x_weights"_a = py::none(), "y_weights"_a = py::none(), "cap"_a = 64,
        "fast_path"_a = true,
        "Exact OT between point clouds; cost ||x - y||_p^p, or ||x - y||_q^p when q is given.");
  m.def("solve_assignment",
        [](std::vector<std::vector<double>> x, std::vector<std::vector<double>> y, double p) {
          const auto r = solve_assignment(DiscreteMeasureND::uniform(std::move(x)),
                                          DiscreteMeasureND::uniform(std::move(y)),
                                          p_norm_power_cost(p));
          return py::make_tuple(r.value, r.permutation);
        },
        "x"_a, "y"_a, "p"_a = 1.0);

  m.def("suite_names", &suite_names);
  m.def("run_suite",
        [](const std::string& name, std::uint64_t seed) {
          SuiteResult r;
          {
            py::gil_scoped_release release;
            r = run_suite(name, seed);
          }
          return py::dict("name"_a = r.name, "passed"_a = r.passed, "max_gap"_a = r.max_gap,
                          "instances"_a = r.instances, "notes"_a = r.notes);
        },
        "name"_a, "seed"_a = 20240531);
}
