#include "hardyop/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hardyop {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_p(double p, const char* who) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument(std::string(who) + ": p must lie in (1, inf)");
}

std::vector<double> positive_samples(const GridFunction& w, const char* who) {
  std::vector<double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const cplx s = w[k];
    if (!(s.real() > 0.0) || std::abs(s.imag()) > 1e-12 * s.real())
      throw std::invalid_argument(std::string(who) + ": weight sample " + std::to_string(k) +
                                  " is not strictly positive");
    out[k] = s.real();
  }
  return out;
}

// Taylor coefficients 0..K of exp(L) for an analytic series L, by
// F' = L' F, i.e. k F_k = sum_{j=1..k} j L_j F_{k-j}.
std::vector<cplx> exp_series(std::span<const cplx> log_series, std::size_t K) {
  std::vector<cplx> F(K + 1);
  F[0] = std::exp(log_series[0]);
  const std::size_t D = std::min(K, log_series.size() - 1);
  for (std::size_t k = 1; k <= K; ++k) {
    cplx acc{};
    const std::size_t top = std::min(k, D);
    for (std::size_t j = 1; j <= top; ++j) acc += static_cast<double>(j) * log_series[j] * F[k - j];
    F[k] = acc / static_cast<double>(k);
  }
  return F;
}

}  // namespace

// ---------------------------------------------------------------------------
// PowerWeight

PowerWeight::PowerWeight(std::vector<WeightPoint> points) : points_(std::move(points)) {
  for (const WeightPoint& p : points_) {
    if (!std::isfinite(p.angle) || p.angle < 0.0 || p.angle >= kTwoPi)
      throw std::invalid_argument("PowerWeight: angle must lie in [0, 2pi)");
    if (!std::isfinite(p.exponent)) throw std::invalid_argument("PowerWeight: non-finite exponent");
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (points_[i].angle == points_[j].angle)
        throw std::invalid_argument("PowerWeight: angles must be pairwise distinct");
}

PowerWeight PowerWeight::single(double exponent, double angle) {
  return PowerWeight({WeightPoint{angle, exponent}});
}

double PowerWeight::operator()(double theta) const {
  double v = 1.0;
  for (const WeightPoint& p : points_)
    v *= std::pow(std::abs(std::polar(1.0, theta) - std::polar(1.0, p.angle)), p.exponent);
  return v;
}

GridFunction PowerWeight::sample(std::size_t M) const {
  return GridFunction::sample(M, [this](double theta) { return cplx((*this)(theta)); });
}

CoeffVector PowerWeight::log_coefficients(long degree) const {
  if (degree < 0) throw std::invalid_argument("PowerWeight::log_coefficients: negative degree");
  CoeffVector c = CoeffVector::zeros(IndexWindow(-degree, degree));
  for (long n = 1; n <= degree; ++n) {
    cplx sum{};
    for (const WeightPoint& p : points_)
      sum += -p.exponent / (2.0 * static_cast<double>(n)) * std::polar(1.0, -static_cast<double>(n) * p.angle);
    c.at(n) = sum;
    c.at(-n) = std::conj(sum);
  }
  return c;
}

// ---------------------------------------------------------------------------
// A_p

bool khvedelidze_ap_check(const PowerWeight& w, double p) {
  require_p(p, "khvedelidze_ap_check");
  return std::all_of(w.points().begin(), w.points().end(), [p](const WeightPoint& pt) {
    return -1.0 / p < pt.exponent && pt.exponent < 1.0 - 1.0 / p;
  });
}

double ap_characteristic(const GridFunction& w, double p, std::size_t max_subdivisions) {
  require_p(p, "ap_characteristic");
  if (max_subdivisions == 0) throw std::invalid_argument("ap_characteristic: max_subdivisions must be positive");
  const std::vector<double> s = positive_samples(w, "ap_characteristic");
  const std::size_t M = s.size();
  const double q = p / (p - 1.0);

  std::vector<double> a(M), b(M);
  for (std::size_t k = 0; k < M; ++k) {
    a[k] = std::pow(s[k], p);
    b[k] = std::pow(s[k], -q);
  }

  const std::size_t step = (M + max_subdivisions - 1) / max_subdivisions;
  const std::size_t starts = (M + step - 1) / step;
  double best = 0.0;
  for (std::size_t i = 0; i < starts; ++i) {
    const std::size_t first = i * step;
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (std::size_t len = 1; len <= M; ++len) {
      const std::size_t k = (first + len - 1) % M;
      sum_a += a[k];
      sum_b += b[k];
      if (len % step != 0 && len != M) continue;
      const double n = static_cast<double>(len);
      const double v = std::pow(sum_a / n, 1.0 / p) * std::pow(sum_b / n, 1.0 / q);
      best = std::max(best, v);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Outer functions

OuterPair OuterPair::constant(double c, IndexWindow window) {
  if (!(c > 0.0)) throw std::invalid_argument("OuterPair::constant: weight must be positive");
  if (window.lo != 0) throw std::invalid_argument("OuterPair::constant: window must start at 0");
  CoeffVector w = CoeffVector::zeros(window);
  CoeffVector winv = CoeffVector::zeros(window);
  w.at(0) = c;
  winv.at(0) = 1.0 / c;
  const double residual = std::abs(c * (1.0 / c) - 1.0);
  return OuterPair{std::move(w), std::move(winv), residual};
}

OuterPair outer_pair_from_log(const CoeffVector& log_coeffs, IndexWindow win) {
  if (win.lo != 0) throw std::invalid_argument("outer_pair: window must start at index 0");
  const std::size_t K = static_cast<std::size_t>(win.hi);
  const long D = std::min<long>(log_coeffs.hi(), win.hi);

  // Schwarz completion of the real log-modulus: log W = u^(0) + 2 sum_{n>0} u^(n) z^n.
  std::vector<cplx> L(static_cast<std::size_t>(std::max(D, 0L)) + 1);
  L[0] = log_coeffs[0].real();
  for (long n = 1; n <= D; ++n) L[static_cast<std::size_t>(n)] = 2.0 * log_coeffs[n];

  std::vector<cplx> Lneg(L.size());
  for (std::size_t n = 0; n < L.size(); ++n) Lneg[n] = -L[n];

  CoeffVector w(0, exp_series(L, K));
  CoeffVector winv(0, exp_series(Lneg, K));

  const CoeffVector prod = multiply(w, winv).restricted(win);
  double residual = 0.0;
  for (long k = 0; k <= win.hi; ++k)
    residual = std::max(residual, std::abs(prod[k] - (k == 0 ? cplx(1.0) : cplx{})));
  return OuterPair{std::move(w), std::move(winv), residual};
}

OuterPair outer_pair(const GridFunction& w, IndexWindow win) {
  const std::vector<double> s = positive_samples(w, "outer_pair");
  std::vector<cplx> u(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) u[k] = std::log(s[k]);
  const long half = static_cast<long>(s.size() / 2);
  const CoeffVector uhat = analyze(GridFunction(std::move(u)), IndexWindow(-(half - 1), half - 1));
  return outer_pair_from_log(uhat, win);
}

OuterPair outer_pair(const PowerWeight& w, IndexWindow win) {
  if (win.lo != 0) throw std::invalid_argument("outer_pair: window must start at index 0");
  return outer_pair_from_log(w.log_coefficients(win.hi), win);
}

cplx evaluate_outer(const GridFunction& w, cplx z) {
  if (!(std::abs(z) <= 0.99)) throw std::invalid_argument("evaluate_outer: |z| must not exceed 0.99");
  const std::vector<double> s = positive_samples(w, "evaluate_outer");
  const std::size_t M = s.size();
  cplx acc{};
  for (std::size_t k = 0; k < M; ++k) {
    const cplx t = std::polar(1.0, w.angle(k));
    acc += (t + z) / (t - z) * std::log(s[k]);
  }
  return std::exp(acc / static_cast<double>(M));
}

cplx evaluate_series(const CoeffVector& c, cplx z) {
  if (c.lo() < 0) throw std::invalid_argument("evaluate_series: coefficients must be analytic");
  cplx acc{};
  for (long n = c.hi(); n >= c.lo(); --n) acc = acc * z + c[n];
  for (long n = 0; n < c.lo(); ++n) acc *= z;
  return acc;
}

}  // namespace hardyop
