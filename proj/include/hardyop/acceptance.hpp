#pragma once

// Verification suite: fixed experiments with pinned parameters and
// tolerances, shared by the acceptance runner and `hardyop reproduce`.
//
//   1  conjugation identity residual (N = 128, then smaller at N = 256)
//   2  K_0 has numerical rank <= n
//   3  unweighted bracket contains grid-sup|a|, width <= 4%
//   4  weighted upper estimates within 2% of the unweighted one, shrinking
//   5  closed-form A_p test agrees with grid-arc growth
//   6  outer function of |t - 1| is 1 - z
//   7  theoretical bound constants at p = 2 and p = 4

#include <complex>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace hardyop {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct ApCheckRow {
  double p = 0.0;
  double exponent = 0.0;
  bool closed_form = false;
  std::vector<std::size_t> grids;
  std::vector<double> values;
  /// values[k+1] / values[k] - 1
  std::vector<double> growth;
  bool agrees = false;
};

struct IdentityRow {
  long n = 0;
  double exponent = 0.0;
  std::size_t N = 0;
  double residual = 0.0;
  double sigma_ratio = 0.0;  ///< sigma_{n+1} / sigma_1 of K_0
  std::size_t rank = 0;
};

struct EssnormRow {
  std::string symbol;
  std::string weight;  ///< "none" for the unweighted operator
  std::size_t N = 0;
  double lower = 0.0;
  double upper = 0.0;
  double grid_sup = 0.0;
  /// |upper - unweighted upper| / grid_sup at the same N
  double deviation = 0.0;
};

struct OuterRow {
  std::string quantity;
  std::size_t grid = 0;
  std::complex<double> computed;
  std::complex<double> expected;
  double error = 0.0;
  double tolerance = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::vector<ApCheckRow> ap_check;
  std::vector<IdentityRow> identity;
  std::vector<EssnormRow> essnorm;
  std::vector<OuterRow> outer;

  bool all_passed() const;
};

/// Runs the selected criteria (all when `only` is empty). Deterministic.
AcceptanceReport run_acceptance(const std::set<int>& only = {});

/// One line per criterion: "PASS  [3] name: detail (1.2 s / 30 s)".
std::string format_result(const CriterionResult& r);

}  // namespace hardyop
