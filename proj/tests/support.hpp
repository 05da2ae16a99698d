#pragma once

// Shared helpers for the unit tests: seeded random data and independent
// reference computations.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "hardyop/operators.hpp"
#include "hardyop/spectral.hpp"

namespace testing {

using hardyop::CoeffVector;
using hardyop::cplx;

inline double uniform(std::mt19937_64& rng) { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; }

inline CoeffVector random_coeffs(std::mt19937_64& rng, long lo, long hi) {
  std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
  for (cplx& z : c) z = cplx(uniform(rng), uniform(rng));
  return CoeffVector(lo, std::move(c));
}

/// Double-loop Cauchy product.
inline CoeffVector brute_convolve(const CoeffVector& a, const CoeffVector& b) {
  std::vector<cplx> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return CoeffVector(a.lo() + b.lo(), std::move(out));
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// (1/2pi) int_0^{2pi} f(theta) exp(-i n theta) dtheta by composite Gauss-Legendre.
template <class F>
cplx fourier_integral(F&& f, long n, int panels = 32, int order = 20) {
  const auto [x, w] = gauss_legendre(order);
  const double h = 2.0 * std::numbers::pi / panels;
  cplx acc{};
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double t = mid + 0.5 * h * x[k];
      acc += w[k] * f(t) * std::polar(1.0, -static_cast<double>(n) * t);
    }
  }
  return acc * (0.5 * h) / (2.0 * std::numbers::pi);
}

inline double max_diff(const CoeffVector& a, const CoeffVector& b) {
  const long lo = std::min(a.lo(), b.lo());
  const long hi = std::max(a.hi(), b.hi());
  double m = 0.0;
  for (long n = lo; n <= hi; ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

inline double max_diff(const hardyop::OperatorMatrix& a, const hardyop::OperatorMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace testing
