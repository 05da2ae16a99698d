#include "hardyop/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace hardyop {

namespace {

using Apply = std::function<void(std::span<const cplx>, std::span<cplx>)>;

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x.
std::size_t sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double top_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta, double lower) {
  double hi = lower;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double left = i == 0 ? 0.0 : std::abs(beta[i - 1]);
    const double right = i < beta.size() ? std::abs(beta[i]) : 0.0;
    hi = std::max(hi, alpha[i] + left + right);
  }
  double lo = lower;
  const std::size_t k = alpha.size();
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(alpha, beta, mid) < k)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double dot_re(std::span<const cplx> a, std::span<const cplx> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

double norm2(std::span<const cplx> a) { return std::sqrt(dot_re(a, a)); }

// Last component of the unit eigenvector of the tridiagonal (alpha, beta)
// for eigenvalue theta, by two steps of inverse iteration.
double ritz_tail(const std::vector<double>& alpha, const std::vector<double>& beta, double theta) {
  const std::size_t k = alpha.size();
  const double shift = theta + 1e-14 * std::max(1.0, std::abs(theta));
  std::vector<double> y(k, 1.0), c(k), d(k);
  for (int sweep = 0; sweep < 2; ++sweep) {
    // Thomas algorithm on (T - shift I) x = y.
    double denom = alpha[0] - shift;
    if (denom == 0.0) denom = 1e-300;
    c[0] = k > 1 ? beta[0] / denom : 0.0;
    d[0] = y[0] / denom;
    for (std::size_t i = 1; i < k; ++i) {
      denom = alpha[i] - shift - beta[i - 1] * c[i - 1];
      if (denom == 0.0) denom = 1e-300;
      c[i] = i + 1 < k ? beta[i] / denom : 0.0;
      d[i] = (y[i] - beta[i - 1] * d[i - 1]) / denom;
    }
    y[k - 1] = d[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
    double nrm = 0.0;
    for (double v : y) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : y) v /= nrm;
  }
  return std::abs(y[k - 1]);
}

// Lanczos on the Hermitian positive semidefinite Gram operator; returns the
// square root of its largest eigenvalue. Stops when the Ritz residual
// beta_k |s_k| of the top pair falls below rel_tol * theta.
double gram_top_singular_value(std::size_t n, const Apply& A, const Apply& Ah, const NormOptions& opts) {
  std::vector<cplx> q(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
  std::vector<cplx> q_prev(n), w(n), tmp(n);
  std::vector<double> alpha, beta;
  double theta = 0.0;
  double beta_prev = 0.0;

  for (std::size_t k = 0; k < opts.max_iterations; ++k) {
    A(q, tmp);
    Ah(tmp, w);
    const double a = dot_re(q, w);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * q[i] + beta_prev * q_prev[i];
    // One pass of local reorthogonalization keeps the recurrence stable.
    cplx drift{};
    for (std::size_t i = 0; i < n; ++i) drift += std::conj(q[i]) * w[i];
    for (std::size_t i = 0; i < n; ++i) w[i] -= drift * q[i];
    const double b = norm2(w);

    alpha.push_back(a + drift.real());
    theta = top_eigenvalue(alpha, beta, theta);

    if (b <= 1e-13 * std::max(theta, std::numeric_limits<double>::min())) return std::sqrt(theta);
    if (b * ritz_tail(alpha, beta, theta) <= opts.rel_tol * theta) return std::sqrt(theta);

    beta.push_back(b);
    beta_prev = b;
    q_prev.swap(q);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
  }
  throw ConvergenceError("operator_norm: no convergence after " + std::to_string(opts.max_iterations) +
                             " iterations",
                         std::sqrt(theta), opts.max_iterations);
}

SectionOperator section_for(const SymbolSpec& a, const OuterPair* W, std::size_t N) {
  return W == nullptr ? toeplitz_operator(a, N) : conjugated_toeplitz_operator(a, *W, N);
}

}  // namespace

double operator_norm(const OperatorMatrix& M, const NormOptions& opts) {
  const std::size_t n = M.n();
  if (n < opts.dense_below) return singular_values(M).front();

  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto en = static_cast<Eigen::Index>(n);
  const Eigen::Map<const RowMajor> dense(M.entries().data(), en, en);
  const Apply A = [&](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<Eigen::VectorXcd>(y.data(), en).noalias() =
        dense * Eigen::Map<const Eigen::VectorXcd>(x.data(), en);
  };
  const Apply Ah = [&](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<Eigen::VectorXcd>(y.data(), en).noalias() =
        dense.adjoint() * Eigen::Map<const Eigen::VectorXcd>(x.data(), en);
  };
  return gram_top_singular_value(n, A, Ah, opts);
}

double operator_norm(const SectionOperator& op, const NormOptions& opts) {
  if (op.n() < opts.dense_below) return operator_norm(op.to_matrix(), opts);
  const Apply A = [&](std::span<const cplx> x, std::span<cplx> y) { op.apply(x, y); };
  const Apply Ah = [&](std::span<const cplx> x, std::span<cplx> y) { op.apply_adjoint(x, y); };
  return gram_top_singular_value(op.n(), A, Ah, opts);
}

double essential_upper(const SymbolSpec& a, const OuterPair* W, std::size_t m, std::size_t N,
                       const NormOptions& opts) {
  if (m < 1 || 4 * m > N)
    throw std::invalid_argument("essential_upper: need 1 <= m <= N/4 (m = " + std::to_string(m) +
                                ", N = " + std::to_string(N) + ")");
  return operator_norm(section_for(a, W, N).with_zeroed_columns(m), opts);
}

double essential_lower_wavepacket(const SymbolSpec& a, const OuterPair* W, std::size_t L,
                                  std::size_t jmin, std::size_t thetas, std::size_t N) {
  if (L < 1 || thetas < 1) throw std::invalid_argument("essential_lower_wavepacket: L and thetas must be positive");
  const auto deg = static_cast<std::size_t>(a.degree());
  if (deg >= N || jmin + L > N - deg)
    throw std::invalid_argument("essential_lower_wavepacket: packet [" + std::to_string(jmin) + ", " +
                                std::to_string(jmin + L) + ") overflows the section (N = " +
                                std::to_string(N) + ", symbol degree " + std::to_string(deg) + ")");

  const SectionOperator op = section_for(a, W, N);
  std::vector<std::vector<cplx>> columns(L, std::vector<cplx>(N));
  std::vector<cplx> e(N);
  for (std::size_t l = 0; l < L; ++l) {
    e[jmin + l] = 1.0;
    op.apply(e, columns[l]);
    e[jmin + l] = 0.0;
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  std::vector<cplx> v(N);
  double best = 0.0;
  for (std::size_t t = 0; t < thetas; ++t) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(thetas);
    std::fill(v.begin(), v.end(), cplx{});
    for (std::size_t l = 0; l < L; ++l) {
      const cplx phase = std::polar(scale, static_cast<double>(l) * theta);
      for (std::size_t i = 0; i < N; ++i) v[i] += phase * columns[l][i];
    }
    best = std::max(best, norm2(v));
  }
  return best;
}

NormEstimate essential_bracket(const SymbolSpec& a, const OuterPair* W, const BracketParams& params,
                               const NormOptions& opts) {
  const double lower = essential_lower_wavepacket(a, W, params.L, params.m, params.thetas, params.N);
  const double upper = essential_upper(a, W, params.m, params.N, opts);
  return NormEstimate{lower, std::max(lower, upper), params.N, params.m, params.L, params.thetas};
}

std::pair<double, double> theoretical_bounds(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("theoretical_bounds: p must lie in (1, inf)");
  const double interpolated = std::pow(2.0, std::abs(1.0 - 2.0 / p));
  const double riesz_norm = 1.0 / std::sin(std::numbers::pi / p);
  return {1.0, std::min(interpolated, riesz_norm)};
}

}  // namespace hardyop
