#pragma once

// Muckenhoupt A_p classification and the outer function W of a weight,
//
//   W(z) = exp( (1/2pi) int (e^{it} + z)/(e^{it} - z) log w(e^{it}) dt ),
//
// which carries the weighted Hardy space isometrically onto the unweighted
// one (f -> W f).

#include <vector>

#include "hardyop/spectral.hpp"

namespace hardyop {

struct WeightPoint {
  double angle = 0.0;     ///< position t_j = exp(i*angle), radians in [0, 2pi)
  double exponent = 0.0;  ///< lambda_j
};

/// Khvedelidze weight prod_j |t - t_j|^{lambda_j}. An empty list is w = 1.
class PowerWeight {
 public:
  PowerWeight() = default;
  explicit PowerWeight(std::vector<WeightPoint> points);

  /// |t - 1|^lambda
  static PowerWeight single(double exponent, double angle = 0.0);

  const std::vector<WeightPoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  double operator()(double theta) const;

  /// Samples on the offset grid of size M.
  GridFunction sample(std::size_t M) const;

  /// Exact Fourier coefficients of log w on [-degree, degree]:
  /// log|t - t_j| has coefficients -exp(-i n phi_j) / (2|n|) for n != 0 and 0
  /// at n = 0.
  CoeffVector log_coefficients(long degree) const;

 private:
  std::vector<WeightPoint> points_;
};

/// Closed-form A_p membership: -1/p < lambda_j < 1 - 1/p for every j.
bool khvedelidze_ap_check(const PowerWeight& w, double p);

/// Largest grid-arc value of (avg w^p)^{1/p} (avg w^{-p'})^{1/p'}, averages
/// by the midpoint rule. Arc endpoints are restricted to every
/// ceil(M / max_subdivisions)-th grid point, so at most max_subdivisions^2
/// arcs are scanned. A lower bound for the A_p constant.
double ap_characteristic(const GridFunction& w, double p, std::size_t max_subdivisions = 512);

/// Boundary Taylor coefficients of W and 1/W on a window [0, K].
struct OuterPair {
  CoeffVector w_coeffs;
  CoeffVector winv_coeffs;
  /// max_k |(W * W^{-1})^(k) - delta_k| over the window.
  double residual = 0.0;

  /// The pair (c, 1/c) for a constant weight c > 0.
  static OuterPair constant(double c, IndexWindow window);
};

/// Outer pair from grid samples of w: log w is analyzed on the grid, completed
/// to an analytic series by the Schwarz kernel (keep n = 0, double n > 0), and
/// exponentiated. win.lo must be 0.
OuterPair outer_pair(const GridFunction& w, IndexWindow win);

/// Outer pair of a power weight from its exact log coefficients; the result
/// is the Taylor expansion of prod_j (1 - conj(t_j) z)^{lambda_j} on win.
OuterPair outer_pair(const PowerWeight& w, IndexWindow win);

/// Outer pair from the Fourier coefficients of a real log-modulus u
/// (u^(-n) = conj(u^(n))). Exposed for custom weights.
OuterPair outer_pair_from_log(const CoeffVector& log_coeffs, IndexWindow win);

/// W(z) by midpoint quadrature of the Schwarz integral; requires |z| <= 0.99.
cplx evaluate_outer(const GridFunction& w, cplx z);

/// Power-series value sum_n c(n) z^n for an analytic coefficient vector.
cplx evaluate_series(const CoeffVector& c, cplx z);

}  // namespace hardyop
