#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wassercop/copulas.hpp"
#include "wassercop/distributions.hpp"
#include "wassercop/ot_oracle.hpp"

namespace wassercop {

/// Seeded instance generators shared by the verification suites and tests.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  /// Empirical law with 1..max_atoms atoms, locations on a 1e-3 lattice in
  /// [-5, 5] and integer weights 1..9 (so weights are rational).
  Distribution1D empirical(std::size_t max_atoms = 12);

  /// Pseudo-observations rank/n of n random rows in dimension d. About a
  /// third of the instances are perfectly comonotone.
  CopulaSpec copula(std::size_t n, std::size_t d);

  /// Arbitrary discrete measure on R^d with rational masses.
  DiscreteMeasureND measure(std::size_t max_atoms, std::size_t d);

  /// Equal-mass measure with exactly n atoms in R^d on the lattice Z/64, so
  /// integer-power costs and their sums are exact in double precision.
  DiscreteMeasureND uniform_measure(std::size_t n, std::size_t d);

  std::vector<double> unit_point(std::size_t d);

  std::size_t integer(std::size_t lo, std::size_t hi);
  double real(double lo, double hi);

 private:
  std::mt19937_64 rng_;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  double max_gap = 0.0;
  std::size_t instances = 0;
  std::vector<std::string> notes;
};

/// Suite names in run order.
const std::vector<std::string>& suite_names();

/// Runs one named suite; throws DomainError for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      const VerifyOptions& options = {});

}  // namespace wassercop
