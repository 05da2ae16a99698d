#include "hardyop/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>

#include "hardyop/estimation.hpp"
#include "hardyop/operators.hpp"
#include "hardyop/weights.hpp"

namespace hardyop {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Uniform on [-1, 1) from the raw 64-bit stream, so the draws do not depend
// on the standard library's distribution implementation.
double unit_draw(std::mt19937_64& rng) {
  return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

struct NamedSymbol {
  std::string name;
  SymbolSpec symbol;
};

std::vector<NamedSymbol> bracket_symbols() {
  return {
      {"e_-1", SymbolSpec::laurent(CoeffVector(-1, {1.0}))},
      {"e_-1+0.5e_2", SymbolSpec::laurent(CoeffVector(-1, {1.0, 0.0, 0.0, 0.5}))},
      {"2e_-2+e_1+0.3e_3", SymbolSpec::laurent(CoeffVector(-2, {2.0, 0.0, 0.0, 1.0, 0.0, 0.3}))},
  };
}

struct NamedWeight {
  std::string name;
  PowerWeight weight;
};

std::vector<NamedWeight> bracket_weights() {
  return {
      {"0:-0.3", PowerWeight::single(-0.3)},
      {"0:0", PowerWeight::single(0.0)},
      {"0:0.3", PowerWeight::single(0.3)},
      {"0:0.25,pi:-0.25", PowerWeight({{0.0, 0.25}, {std::numbers::pi, -0.25}})},
  };
}

constexpr std::size_t kSupGrid = 1 << 16;
constexpr double kBracketSlack = 1e-9;

// ---------------------------------------------------------------------------
// 1, 2: conjugation identity and the rank of K_0

std::vector<IdentityRow> identity_sweep() {
  std::mt19937_64 rng(20240607);
  std::vector<IdentityRow> rows;
  for (long n = 1; n <= 3; ++n) {
    std::vector<cplx> h(5);
    for (cplx& z : h) z = cplx(unit_draw(rng), unit_draw(rng));
    const CoeffVector hv(0, h);
    const SymbolSpec a = SymbolSpec::shifted_analytic(n, hv);
    for (double lambda : {-0.3, 0.3}) {
      for (std::size_t N : {std::size_t{128}, std::size_t{256}}) {
        const OuterPair W = outer_pair(PowerWeight::single(lambda), IndexWindow(0, 4 * static_cast<long>(N) - 1));
        const OperatorMatrix C = conjugated_toeplitz_matrix(a, W, N);
        const OperatorMatrix K = k0_matrix(n, hv, W, N);
        const OperatorMatrix T = toeplitz_matrix(a, N);
        const double residual = (C - (T + K)).frobenius_norm() / T.frobenius_norm();
        const std::vector<double> s = singular_values(K);
        const double ratio = s.front() > 0.0 ? s[static_cast<std::size_t>(n)] / s.front() : 0.0;
        rows.push_back(IdentityRow{n, lambda, N, residual, ratio, numerical_rank(K)});
      }
    }
  }
  return rows;
}

CriterionResult judge_identity(const std::vector<IdentityRow>& rows, double seconds) {
  double worst = 0.0;
  std::size_t not_smaller = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    worst = std::max(worst, rows[i].residual);
    if (!(rows[i + 1].residual < rows[i].residual)) ++not_smaller;
  }
  CriterionResult r;
  r.id = 1;
  r.name = "conjugation identity";
  r.budget_seconds = 10.0;
  r.seconds = seconds;
  r.passed = worst <= 1e-6 && not_smaller == 0 && seconds <= r.budget_seconds;
  r.detail = "max residual at N=128 " + fmt("%.3g", worst) + " (<= 1e-6); not smaller at N=256 in " +
             std::to_string(not_smaller) + "/" + std::to_string(rows.size() / 2) + " cases";
  return r;
}

CriterionResult judge_finite_rank(const std::vector<IdentityRow>& rows, double seconds) {
  double worst = 0.0;
  for (const IdentityRow& row : rows) worst = std::max(worst, row.sigma_ratio);
  CriterionResult r;
  r.id = 2;
  r.name = "finite rank of K_0";
  r.budget_seconds = 10.0;
  r.seconds = seconds;
  r.passed = worst <= 1e-8 && seconds <= r.budget_seconds;
  r.detail = "max sigma_{n+1}/sigma_1 " + fmt("%.3g", worst) + " (<= 1e-8)";
  return r;
}

// ---------------------------------------------------------------------------
// 3, 4: essential-norm brackets

std::vector<EssnormRow> unweighted_rows(std::size_t N) {
  std::vector<EssnormRow> rows;
  for (const NamedSymbol& s : bracket_symbols()) {
    const NormEstimate e = essential_bracket(s.symbol, nullptr, BracketParams{N, 64, 64, 256});
    rows.push_back(EssnormRow{s.name, "none", N, e.lower, e.upper, grid_sup(s.symbol.coefficients(), kSupGrid), 0.0});
  }
  return rows;
}

std::vector<EssnormRow> weighted_rows(std::size_t N, const std::vector<EssnormRow>& unweighted) {
  std::vector<EssnormRow> rows;
  const std::vector<NamedSymbol> symbols = bracket_symbols();
  for (const NamedWeight& w : bracket_weights()) {
    const OuterPair W = outer_pair(w.weight, IndexWindow(0, 2 * static_cast<long>(N) - 1));
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const NormEstimate e = essential_bracket(symbols[i].symbol, &W, BracketParams{N, 64, 64, 256});
      const EssnormRow& base = unweighted[i];
      rows.push_back(EssnormRow{symbols[i].name, w.name, N, e.lower, e.upper, base.grid_sup,
                                std::abs(e.upper - base.upper) / base.grid_sup});
    }
  }
  return rows;
}

CriterionResult judge_unweighted(const std::vector<EssnormRow>& rows, double seconds) {
  std::size_t missed = 0;
  double widest = 0.0;
  double worst_gap = 0.0;
  for (const EssnormRow& row : rows) {
    const bool contains = row.lower <= row.grid_sup + kBracketSlack && row.grid_sup <= row.upper + kBracketSlack;
    if (!contains) ++missed;
    worst_gap = std::max(worst_gap, std::max(row.lower - row.grid_sup, row.grid_sup - row.upper) / row.grid_sup);
    widest = std::max(widest, (row.upper - row.lower) / row.grid_sup);
  }
  CriterionResult r;
  r.id = 3;
  r.name = "unweighted essential norm";
  r.budget_seconds = 30.0;
  r.seconds = seconds;
  r.passed = missed == 0 && widest <= 0.04 && seconds <= r.budget_seconds;
  r.detail = "bracket misses grid-sup in " + std::to_string(missed) + "/" + std::to_string(rows.size()) +
             " symbols (largest relative gap " + fmt("%.3g", std::max(worst_gap, 0.0)) + "); max width " +
             fmt("%.3g", widest) + " of sup (<= 0.04)";
  return r;
}

CriterionResult judge_weights(const std::vector<EssnormRow>& coarse, const std::vector<EssnormRow>& fine,
                              double seconds) {
  double dev_coarse = 0.0;
  double dev_fine = 0.0;
  for (const EssnormRow& row : coarse) dev_coarse = std::max(dev_coarse, row.deviation);
  for (const EssnormRow& row : fine) dev_fine = std::max(dev_fine, row.deviation);
  CriterionResult r;
  r.id = 4;
  r.name = "weight independence";
  r.budget_seconds = 60.0;
  r.seconds = seconds;
  r.passed = dev_coarse <= 0.02 && dev_fine < dev_coarse && seconds <= r.budget_seconds;
  r.detail = "max deviation " + fmt("%.3g", dev_coarse) + " at N=1024 (<= 0.02), " + fmt("%.3g", dev_fine) +
             " at N=2048 (must be smaller)";
  return r;
}

// ---------------------------------------------------------------------------
// 5: A_p lattice

std::vector<ApCheckRow> ap_sweep() {
  const std::vector<std::size_t> grids{256, 512, 1024};
  std::vector<ApCheckRow> rows;
  for (double p : {2.0, 4.0}) {
    for (double lambda : {-0.6, -0.45, 0.0, 0.45, 0.55, 0.9}) {
      const PowerWeight w = PowerWeight::single(lambda);
      ApCheckRow row;
      row.p = p;
      row.exponent = lambda;
      row.closed_form = khvedelidze_ap_check(w, p);
      row.grids = grids;
      for (std::size_t M : grids) row.values.push_back(ap_characteristic(w.sample(M), p, M));
      for (std::size_t k = 0; k + 1 < row.values.size(); ++k)
        row.growth.push_back(row.values[k + 1] / row.values[k] - 1.0);
      const bool slow = std::all_of(row.growth.begin(), row.growth.end(), [](double g) { return g < 0.25; });
      const bool fast = std::all_of(row.growth.begin(), row.growth.end(), [](double g) { return g > 0.25; });
      row.agrees = row.closed_form ? slow : fast;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CriterionResult judge_ap(const std::vector<ApCheckRow>& rows, double seconds) {
  std::string off;
  std::size_t bad = 0;
  for (const ApCheckRow& row : rows) {
    if (row.agrees) continue;
    ++bad;
    off += (off.empty() ? "" : ", ") + fmt("(p=%g", row.p) + fmt(", %g)", row.exponent);
  }
  CriterionResult r;
  r.id = 5;
  r.name = "A_p classification";
  r.budget_seconds = 20.0;
  r.seconds = seconds;
  r.passed = bad == 0 && seconds <= r.budget_seconds;
  r.detail = std::to_string(rows.size() - bad) + "/" + std::to_string(rows.size()) + " lattice points agree";
  if (bad > 0) r.detail += "; disagree: " + off;
  return r;
}

// ---------------------------------------------------------------------------
// 6: outer function of |t - 1|

std::vector<OuterRow> outer_sweep() {
  std::vector<OuterRow> rows;
  const PowerWeight w = PowerWeight::single(1.0);
  const std::size_t M = 1024;
  const OuterPair pair = outer_pair(w, IndexWindow(0, static_cast<long>(M / 2) - 1));

  double coeff_err = 0.0;
  for (long k = 0; k <= pair.w_coeffs.hi(); ++k) {
    const cplx expected = k == 0 ? 1.0 : (k == 1 ? -1.0 : 0.0);
    coeff_err = std::max(coeff_err, std::abs(pair.w_coeffs[k] - expected));
  }
  rows.push_back(OuterRow{"W coefficient 0", M, pair.w_coeffs[0], 1.0, std::abs(pair.w_coeffs[0] - 1.0), 1e-6});
  rows.push_back(OuterRow{"W coefficient 1", M, pair.w_coeffs[1], -1.0, std::abs(pair.w_coeffs[1] + 1.0), 1e-6});
  rows.push_back(OuterRow{"max W coefficient error", M, coeff_err, 0.0, coeff_err, 1e-6});
  rows.push_back(OuterRow{"reciprocal residual", M, pair.residual, 0.0, pair.residual, 1e-8});

  const std::size_t fine = std::size_t{1} << 22;
  const GridFunction samples = w.sample(fine);
  const std::vector<std::pair<std::string, cplx>> points{
      {"W(0)", cplx(0.0, 0.0)}, {"W(0.5)", cplx(0.5, 0.0)}, {"W(0.3i)", cplx(0.0, 0.3)}};
  for (const auto& [label, z] : points) {
    const cplx value = evaluate_outer(samples, z);
    rows.push_back(OuterRow{label, fine, value, 1.0 - z, std::abs(value - (1.0 - z)), 1e-6});
  }
  return rows;
}

CriterionResult judge_outer(const std::vector<OuterRow>& rows, double seconds) {
  std::size_t bad = 0;
  double worst_eval = 0.0;
  double coeff = 0.0;
  double recip = 0.0;
  for (const OuterRow& row : rows) {
    if (!(row.error <= row.tolerance)) ++bad;
    if (row.quantity.rfind("W(", 0) == 0) worst_eval = std::max(worst_eval, row.error);
    if (row.quantity == "max W coefficient error") coeff = row.error;
    if (row.quantity == "reciprocal residual") recip = row.error;
  }
  CriterionResult r;
  r.id = 6;
  r.name = "outer function";
  r.budget_seconds = 5.0;
  r.seconds = seconds;
  r.passed = bad == 0 && seconds <= r.budget_seconds;
  r.detail = "coefficient error " + fmt("%.3g", coeff) + ", evaluation error " + fmt("%.3g", worst_eval) +
             " (<= 1e-6); reciprocal residual " + fmt("%.3g", recip) + " (<= 1e-8)";
  return r;
}

// ---------------------------------------------------------------------------
// 7: bound constants

CriterionResult judge_bounds() {
  const auto t0 = Clock::now();
  const auto [lo2, hi2] = theoretical_bounds(2.0);
  const auto [lo4, hi4] = theoretical_bounds(4.0);
  const double err = std::max({std::abs(lo2 - 1.0), std::abs(hi2 - 1.0), std::abs(lo4 - 1.0),
                               std::abs(hi4 - std::numbers::sqrt2)});
  CriterionResult r;
  r.id = 7;
  r.name = "bound constants";
  r.budget_seconds = 1.0;
  r.seconds = since(t0);
  r.passed = err <= 1e-15;
  r.detail = "max error " + fmt("%.3g", err) + " (<= 1e-15)";
  return r;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& r) { return r.passed; });
}

AcceptanceReport run_acceptance(const std::set<int>& only) {
  const auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };
  AcceptanceReport report;

  if (wanted(1) || wanted(2)) {
    const auto t0 = Clock::now();
    report.identity = identity_sweep();
    const double t = since(t0);
    if (wanted(1)) report.criteria.push_back(judge_identity(report.identity, t));
    if (wanted(2)) report.criteria.push_back(judge_finite_rank(report.identity, t));
  }

  if (wanted(3) || wanted(4)) {
    auto t0 = Clock::now();
    const std::vector<EssnormRow> base = unweighted_rows(1024);
    const double t_base = since(t0);
    report.essnorm = base;
    if (wanted(3)) report.criteria.push_back(judge_unweighted(base, t_base));
    if (wanted(4)) {
      t0 = Clock::now();
      const std::vector<EssnormRow> coarse = weighted_rows(1024, base);
      const std::vector<EssnormRow> base_fine = unweighted_rows(2048);
      const std::vector<EssnormRow> fine = weighted_rows(2048, base_fine);
      report.criteria.push_back(judge_weights(coarse, fine, t_base + since(t0)));
      report.essnorm.insert(report.essnorm.end(), coarse.begin(), coarse.end());
      report.essnorm.insert(report.essnorm.end(), base_fine.begin(), base_fine.end());
      report.essnorm.insert(report.essnorm.end(), fine.begin(), fine.end());
    }
  }

  if (wanted(5)) {
    const auto t0 = Clock::now();
    report.ap_check = ap_sweep();
    report.criteria.push_back(judge_ap(report.ap_check, since(t0)));
  }

  if (wanted(6)) {
    const auto t0 = Clock::now();
    report.outer = outer_sweep();
    report.criteria.push_back(judge_outer(report.outer, since(t0)));
  }

  if (wanted(7)) report.criteria.push_back(judge_bounds());

  std::sort(report.criteria.begin(), report.criteria.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return report;
}

std::string format_result(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " (%.2f s / %.0f s)", r.seconds, r.budget_seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.name + ": " +
         r.detail + buf;
}

}  // namespace hardyop
