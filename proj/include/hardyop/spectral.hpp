#pragma once

// Fourier analysis on the unit circle and the coefficient-level projections
// (Riesz projection P, Cauchy singular operator S = 2P - I, and P_n).
//
// Functions on the circle are carried either as a finite window of Laurent
// coefficients (CoeffVector) or as samples on the offset grid
// theta_k = 2*pi*(k + 1/2)/M (GridFunction).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hardyop {

using cplx = std::complex<double>;

/// Closed range [lo, hi] of Fourier indices.
struct IndexWindow {
  long lo = 0;
  long hi = 0;

  IndexWindow() = default;
  IndexWindow(long lo_, long hi_);

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  bool contains(long n) const { return n >= lo && n <= hi; }

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

/// Laurent coefficients f^(n) for n in a window; indices outside the window
/// are zero.
class CoeffVector {
 public:
  /// The zero polynomial on window [0, 0].
  CoeffVector();
  CoeffVector(long lo, std::vector<cplx> coeffs);

  static CoeffVector zeros(IndexWindow window);
  /// value * e_n
  static CoeffVector monomial(long n, cplx value = 1.0);

  const IndexWindow& window() const { return window_; }
  long lo() const { return window_.lo; }
  long hi() const { return window_.hi; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Coefficient at index n (zero outside the window).
  cplx operator[](long n) const {
    return window_.contains(n) ? coeffs_[static_cast<std::size_t>(n - window_.lo)] : cplx{};
  }

  /// Writable coefficient; n must lie in the window.
  cplx& at(long n);

  /// Multiplication by e_k (an exact index shift).
  CoeffVector shifted(long k) const;

  /// Coefficients restricted (or zero-extended) to a new window.
  CoeffVector restricted(IndexWindow window) const;

  /// Largest |coefficient|.
  double max_abs() const;

  /// Mathematical equality: same Laurent polynomial, compared bitwise over
  /// the union of both windows.
  friend bool operator==(const CoeffVector& a, const CoeffVector& b);

  friend CoeffVector operator+(const CoeffVector& a, const CoeffVector& b);
  friend CoeffVector operator-(const CoeffVector& a, const CoeffVector& b);
  friend CoeffVector operator*(cplx s, const CoeffVector& a);

 private:
  IndexWindow window_;
  std::vector<cplx> coeffs_;
};

/// Samples on the offset grid theta_k = 2*pi*(k + 1/2)/M, M a power of two.
class GridFunction {
 public:
  explicit GridFunction(std::vector<cplx> samples);

  template <class F>
  static GridFunction sample(std::size_t M, F&& f) {
    std::vector<cplx> s(M);
    for (std::size_t k = 0; k < M; ++k) s[k] = f(angle(k, M));
    return GridFunction(std::move(s));
  }

  static double angle(std::size_t k, std::size_t M);

  std::size_t size() const { return samples_.size(); }
  double angle(std::size_t k) const { return angle(k, samples_.size()); }
  std::span<const cplx> samples() const { return samples_; }
  cplx operator[](std::size_t k) const { return samples_[k]; }

 private:
  std::vector<cplx> samples_;
};

bool is_power_of_two(std::size_t n);

/// In-place radix-2 transform. Forward uses exp(-2*pi*i*jk/n); the inverse is
/// unnormalized.
void fft(std::span<cplx> data, bool inverse = false);

/// Trapezoid-rule Fourier coefficients on the offset grid for indices in win.
/// Throws std::invalid_argument when win is wider than the grid.
CoeffVector analyze(const GridFunction& f, IndexWindow win);

/// Evaluates sum c(n) e_n on the offset grid of size M. The window must fit
/// the Nyquist range: length <= M and |n| <= M/2.
GridFunction synthesize(const CoeffVector& c, std::size_t M);

/// P: keeps indices n >= 0. Output window [max(lo,0), max(hi,0)].
CoeffVector riesz_project(const CoeffVector& c);

/// S = 2P - I: negates the coefficients at n < 0.
CoeffVector cauchy_singular(const CoeffVector& c);

/// P_n: keeps indices 0..n-1.
CoeffVector truncate_pn(const CoeffVector& c, long n);

/// Linear (non-circular) convolution of coefficient sequences.
CoeffVector multiply(const CoeffVector& a, const CoeffVector& b);

/// Fejer (Cesaro) mean of order d: weights max(0, 1 - |n|/(d+1)).
CoeffVector fejer_mean(const CoeffVector& c, long d);

/// max_k |f(theta_k)| over the offset grid of size M.
double grid_sup(const CoeffVector& c, std::size_t M);

}  // namespace hardyop
