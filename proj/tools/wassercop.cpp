// wassercop: Wasserstein distances through comonotone couplings, quantile
// integrals and shared copulas, with an exact discrete OT oracle.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
// 3 moment gate failure, 4 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wassercop/copulas.hpp"
#include "wassercop/errors.hpp"
#include "wassercop/io.hpp"
#include "wassercop/ot_oracle.hpp"
#include "wassercop/verification.hpp"
#include "wassercop/wasserstein.hpp"

namespace {

using namespace wassercop;

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kMomentGate = 3,
  kNumerical = 4,
};

struct RunConfig {
  double p = 1.0;
  std::optional<double> q;
  std::vector<std::string> inputs;
  std::string copula_path;
  std::string ranks = "none";
  std::vector<std::string> margins_f;
  std::vector<std::string> margins_g;
  std::string grid = "adaptive";
  std::string method = "quantile";
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 20240531;
  std::vector<std::string> suites;
  std::string corrupt;
  std::size_t cap = 64;
  bool no_fast_path = false;
};

void emit_report(const DistanceReport& r, const std::string& format) {
  if (format == "json") {
    std::cout << io::report_to_json(r).dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << io::report_to_csv(r);
  } else {
    std::cout << io::report_to_human(r);
  }
}

std::vector<Distribution1D> read_all(const std::vector<std::string>& paths) {
  std::vector<Distribution1D> out;
  for (const auto& path : paths) out.push_back(io::read_distribution(path));
  return out;
}

struct SharedInputs {
  std::shared_ptr<const CopulaSpec> copula;
  std::vector<Distribution1D> margins_f;
  std::vector<Distribution1D> margins_g;
};

SharedInputs read_shared(const RunConfig& cfg) {
  SharedInputs in;
  in.copula = std::make_shared<const CopulaSpec>(
      io::read_copula(cfg.copula_path, cfg.ranks == "auto"));
  in.margins_f = read_all(cfg.margins_f);
  in.margins_g = read_all(cfg.margins_g);
  if (in.margins_f.size() != in.copula->dim() ||
      in.margins_g.size() != in.copula->dim()) {
    throw ParseError("copula has " + std::to_string(in.copula->dim()) +
                     " columns but " + std::to_string(in.margins_f.size()) +
                     " / " + std::to_string(in.margins_g.size()) +
                     " margins were given");
  }
  return in;
}

void require_two_inputs(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) {
    throw ParseError("expected two distribution files (F G)");
  }
}

int cmd_compute(const RunConfig& cfg) {
  const GridSpec grid = GridSpec::parse(cfg.grid);
  if (!cfg.copula_path.empty()) {
    const SharedInputs in = read_shared(cfg);
    emit_report(wp_shared_nd(*in.copula, in.margins_f, in.margins_g, cfg.p, grid),
                cfg.format);
    return kOk;
  }
  require_two_inputs(cfg);
  const auto f = io::read_distribution(cfg.inputs[0]);
  const auto g = io::read_distribution(cfg.inputs[1]);
  DistanceReport r;
  if (cfg.method == "cdf") {
    if (cfg.p != 1.0) throw DomainError("--method cdf computes W_1 only (use --p 1)");
    r = w1_cdf(f, g, grid.kind == GridSpec::Kind::AdaptiveQuadrature
                         ? grid.tol
                         : default_grid_tolerance());
  } else if (cfg.method == "copula") {
    r = wp_via_M(f, g, cfg.p, grid);
  } else {
    r = wp_quantile(f, g, cfg.p, grid);
  }
  emit_report(r, cfg.format);
  return kOk;
}

int cmd_bounds(const RunConfig& cfg) {
  if (!cfg.q) throw DomainError("bounds needs --q");
  const GridSpec grid = GridSpec::parse(cfg.grid);
  DistanceReport r;
  if (!cfg.copula_path.empty()) {
    const SharedInputs in = read_shared(cfg);
    r = wpq_bounds(*in.copula, in.margins_f, in.margins_g, cfg.p, *cfg.q, grid);
  } else {
    require_two_inputs(cfg);
    const std::vector<Distribution1D> f{io::read_distribution(cfg.inputs[0])};
    const std::vector<Distribution1D> g{io::read_distribution(cfg.inputs[1])};
    r = wpq_bounds(CopulaSpec::comonotone(1), f, g, cfg.p, *cfg.q, grid);
  }
  emit_report(r, cfg.format);
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions options;
  if (cfg.corrupt == "formula") options.formula_offset = 1e-3;
  std::vector<std::string> suites = cfg.suites;
  if (suites.empty() || (suites.size() == 1 && suites.front() == "all")) {
    suites = suite_names();
  }
  bool all_passed = true;
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& name : suites) {
    const SuiteResult r = run_suite(name, cfg.seed, options);
    all_passed = all_passed && r.passed;
    if (cfg.format == "json") {
      summary.push_back({{"suite", r.name},
                         {"passed", r.passed},
                         {"instances", r.instances},
                         {"max_gap", r.max_gap},
                         {"notes", r.notes}});
    } else {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name
                << " instances=" << r.instances << " max_gap=" << r.max_gap
                << '\n';
      for (const auto& note : r.notes) std::cout << "  " << note << '\n';
    }
  }
  if (cfg.format == "json") {
    std::cout << nlohmann::json{{"seed", cfg.seed}, {"passed", all_passed},
                                {"suites", summary}}
                     .dump(2)
              << '\n';
  }
  return all_passed ? kOk : kVerifyFailed;
}

int cmd_sample(const RunConfig& cfg) {
  require_two_inputs(cfg);
  const auto f = io::read_distribution(cfg.inputs[0]);
  const auto g = io::read_distribution(cfg.inputs[1]);
  const GridSpec grid = cfg.grid == "adaptive" ? GridSpec::uniform(100)
                                               : GridSpec::parse(cfg.grid);
  const std::string csv = io::comonotone_pair_to_csv(comonotone_coupling(f, g, grid));
  if (cfg.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + cfg.out_path);
    out << csv;
  }
  return kOk;
}

int cmd_oracle(const RunConfig& cfg) {
  require_two_inputs(cfg);
  const auto mu = io::read_measure(cfg.inputs[0]);
  const auto nu = io::read_measure(cfg.inputs[1]);
  OtOptions options;
  options.cap = cfg.cap;
  options.assignment_fast_path = !cfg.no_fast_path;
  const CostFunction cost =
      cfg.q ? q_norm_power_cost(cfg.p, *cfg.q) : p_norm_power_cost(cfg.p);
  const OtSolution s = solve_ot(mu, nu, cost, options);
  nlohmann::json j = io::coupling_to_json(mu, nu, s);
  j["p"] = cfg.p;
  j["q"] = cfg.q ? nlohmann::json(*cfg.q) : nlohmann::json(nullptr);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

void add_exponent_options(CLI::App* cmd, RunConfig& cfg, bool with_q) {
  cmd->add_option("--p", cfg.p, "Exponent p >= 1")->check(CLI::Range(1.0, 1e300));
  if (with_q) {
    cmd->add_option("--q", cfg.q, "Norm exponent q >= 1 on R^d")
        ->check(CLI::Range(1.0, 1e300));
  }
}

void add_shared_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--copula", cfg.copula_path, "Empirical copula rows (CSV)");
  cmd->add_option("--ranks", cfg.ranks, "auto: copula CSV holds raw data to rank")
      ->check(CLI::IsMember({"auto", "none"}));
  cmd->add_option("--margins-f", cfg.margins_f, "Margin files of the first law");
  cmd->add_option("--margins-g", cfg.margins_g, "Margin files of the second law");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein distances via copulas and quantile functions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* compute = app.add_subcommand("compute", "Compute W_p between two laws");
  add_exponent_options(compute, cfg, false);
  compute->add_option("inputs", cfg.inputs, "F and G (CSV or JSON)");
  add_shared_options(compute, cfg);
  compute->add_option("--method", cfg.method, "quantile | copula | cdf")
      ->check(CLI::IsMember({"quantile", "copula", "cdf"}));
  compute->add_option("--grid", cfg.grid, "exact | uniform:N | adaptive[:TOL]");
  compute->add_option("--format", cfg.format, "json | csv | human")
      ->check(CLI::IsMember({"json", "csv", "human"}));

  auto* bounds = app.add_subcommand("bounds", "Bounds on W_{p,q}^p for a shared copula");
  add_exponent_options(bounds, cfg, true);
  bounds->add_option("inputs", cfg.inputs, "F and G for d = 1");
  add_shared_options(bounds, cfg);
  bounds->add_option("--grid", cfg.grid, "exact | uniform:N | adaptive[:TOL]");
  bounds->add_option("--format", cfg.format, "json | csv | human")
      ->check(CLI::IsMember({"json", "csv", "human"}));

  auto* verify = app.add_subcommand("verify", "Run the oracle verification suites");
  verify->add_option("--seed", cfg.seed, "Seed of all randomized suites");
  verify->add_option("--suite", cfg.suites, "Suite name(s) or 'all'");
  verify->add_option("--corrupt", cfg.corrupt, "Debug: perturb formula values")
      ->check(CLI::IsMember({"formula"}));
  verify->add_option("--format", cfg.format, "human | json")
      ->check(CLI::IsMember({"human", "json"}));

  auto* sample = app.add_subcommand("sample", "Write the comonotone coupling atoms");
  sample->add_option("inputs", cfg.inputs, "F and G (CSV or JSON)");
  sample->add_option("--grid", cfg.grid, "uniform:N for parametric margins");
  sample->add_option("--out", cfg.out_path, "Output CSV (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Exact discrete OT between two measures");
  add_exponent_options(oracle, cfg, true);
  oracle->add_option("inputs", cfg.inputs, "Measure CSVs: x1..xd[,w]");
  oracle->add_option("--cap", cfg.cap, "Maximum atoms per measure");
  oracle->add_flag("--no-fast-path", cfg.no_fast_path,
                   "Always use the transportation simplex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (verify->parsed() && cfg.format == "json" && verify->count("--format") == 0) {
    cfg.format = "human";
  }

  try {
    if (compute->parsed()) return cmd_compute(cfg);
    if (bounds->parsed()) return cmd_bounds(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (sample->parsed()) return cmd_sample(cfg);
    if (oracle->parsed()) return cmd_oracle(cfg);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const MomentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMomentGate;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
