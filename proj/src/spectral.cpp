#include "hardyop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hardyop {

namespace {

// Products where both factors fit in this many coefficients use the exact
// double loop; larger ones go through a zero-padded FFT.
constexpr std::size_t kDirectConvolutionLimit = 512;
// A factor this short is always convolved directly.
constexpr std::size_t kShortFactor = 32;

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

const std::vector<cplx>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> t(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    t[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return cache.emplace(n, std::move(t)).first->second;
}

// Index n taken modulo M into [0, M).
std::size_t wrap(long n, std::size_t M) {
  const long m = static_cast<long>(M);
  long r = n % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

}  // namespace

IndexWindow::IndexWindow(long lo_, long hi_) : lo(lo_), hi(hi_) {
  if (lo > hi)
    throw std::invalid_argument("IndexWindow: lo (" + std::to_string(lo) + ") > hi (" +
                                std::to_string(hi) + ")");
}

// ---------------------------------------------------------------------------
// CoeffVector

CoeffVector::CoeffVector() : window_(0, 0), coeffs_(1) {}

CoeffVector::CoeffVector(long lo, std::vector<cplx> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("CoeffVector: empty coefficient array");
  if (!all_finite(coeffs)) throw std::invalid_argument("CoeffVector: non-finite coefficient");
  window_ = IndexWindow(lo, lo + static_cast<long>(coeffs.size()) - 1);
  coeffs_ = std::move(coeffs);
}

CoeffVector CoeffVector::zeros(IndexWindow window) {
  return CoeffVector(window.lo, std::vector<cplx>(window.size()));
}

CoeffVector CoeffVector::monomial(long n, cplx value) { return CoeffVector(n, {value}); }

cplx& CoeffVector::at(long n) {
  if (!window_.contains(n)) throw std::out_of_range("CoeffVector::at: index outside window");
  return coeffs_[static_cast<std::size_t>(n - window_.lo)];
}

CoeffVector CoeffVector::shifted(long k) const {
  CoeffVector out = *this;
  out.window_ = IndexWindow(window_.lo + k, window_.hi + k);
  return out;
}

CoeffVector CoeffVector::restricted(IndexWindow window) const {
  std::vector<cplx> out(window.size());
  const long lo = std::max(window.lo, window_.lo);
  const long hi = std::min(window.hi, window_.hi);
  for (long n = lo; n <= hi; ++n)
    out[static_cast<std::size_t>(n - window.lo)] = coeffs_[static_cast<std::size_t>(n - window_.lo)];
  return CoeffVector(window.lo, std::move(out));
}

double CoeffVector::max_abs() const {
  double m = 0.0;
  for (const cplx& z : coeffs_) m = std::max(m, std::abs(z));
  return m;
}

bool operator==(const CoeffVector& a, const CoeffVector& b) {
  const long lo = std::min(a.lo(), b.lo());
  const long hi = std::max(a.hi(), b.hi());
  for (long n = lo; n <= hi; ++n)
    if (a[n] != b[n]) return false;
  return true;
}

CoeffVector operator+(const CoeffVector& a, const CoeffVector& b) {
  const IndexWindow w(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
  CoeffVector out = a.restricted(w);
  for (long n = b.lo(); n <= b.hi(); ++n) out.at(n) += b[n];
  return out;
}

CoeffVector operator-(const CoeffVector& a, const CoeffVector& b) { return a + cplx(-1.0) * b; }

CoeffVector operator*(cplx s, const CoeffVector& a) {
  std::vector<cplx> out(a.coeffs().begin(), a.coeffs().end());
  for (cplx& z : out) z *= s;
  return CoeffVector(a.lo(), std::move(out));
}

// ---------------------------------------------------------------------------
// GridFunction

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

GridFunction::GridFunction(std::vector<cplx> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2 || !is_power_of_two(samples_.size()))
    throw std::invalid_argument("GridFunction: size must be a power of two >= 2, got " +
                                std::to_string(samples_.size()));
  if (!all_finite(samples_)) throw std::invalid_argument("GridFunction: non-finite sample");
}

double GridFunction::angle(std::size_t k, std::size_t M) {
  return 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(M);
}

// ---------------------------------------------------------------------------
// Transforms

void fft(std::span<cplx> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const std::vector<cplx>& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = tw[k * stride];
        if (inverse) w = std::conj(w);
        const cplx u = data[start + k];
        const cplx v = data[start + k + half];
        // Written out to avoid the NaN-recovery path of operator* on complex.
        const cplx t(w.real() * v.real() - w.imag() * v.imag(),
                     w.real() * v.imag() + w.imag() * v.real());
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

CoeffVector analyze(const GridFunction& f, IndexWindow win) {
  const std::size_t M = f.size();
  if (win.size() > M)
    throw std::invalid_argument("analyze: window of length " + std::to_string(win.size()) +
                                " is wider than the grid (" + std::to_string(M) + ")");
  std::vector<cplx> spec(f.samples().begin(), f.samples().end());
  fft(spec);
  // f^(n) = (1/M) sum_k f_k exp(-i n theta_k) = exp(-i pi n / M) F[n mod M] / M.
  std::vector<cplx> out(win.size());
  const double scale = 1.0 / static_cast<double>(M);
  for (long n = win.lo; n <= win.hi; ++n) {
    const cplx twist = std::polar(scale, -std::numbers::pi * static_cast<double>(n) / static_cast<double>(M));
    out[static_cast<std::size_t>(n - win.lo)] = twist * spec[wrap(n, M)];
  }
  return CoeffVector(win.lo, std::move(out));
}

GridFunction synthesize(const CoeffVector& c, std::size_t M) {
  if (!is_power_of_two(M) || M < 2)
    throw std::invalid_argument("synthesize: grid size must be a power of two >= 2");
  const long half = static_cast<long>(M / 2);
  if (c.window().size() > M || c.lo() < -half || c.hi() > half)
    throw std::invalid_argument("synthesize: window [" + std::to_string(c.lo()) + ", " +
                                std::to_string(c.hi()) + "] exceeds the Nyquist range of M = " +
                                std::to_string(M));
  std::vector<cplx> bins(M);
  for (long n = c.lo(); n <= c.hi(); ++n) {
    const cplx twist = std::polar(1.0, std::numbers::pi * static_cast<double>(n) / static_cast<double>(M));
    bins[wrap(n, M)] += twist * c[n];
  }
  fft(bins, /*inverse=*/true);
  return GridFunction(std::move(bins));
}

// ---------------------------------------------------------------------------
// Projections

CoeffVector riesz_project(const CoeffVector& c) {
  return c.restricted(IndexWindow(std::max(c.lo(), 0L), std::max(c.hi(), 0L)));
}

CoeffVector cauchy_singular(const CoeffVector& c) {
  std::vector<cplx> out(c.coeffs().begin(), c.coeffs().end());
  for (long n = c.lo(); n < 0 && n <= c.hi(); ++n) out[static_cast<std::size_t>(n - c.lo())] *= -1.0;
  return CoeffVector(c.lo(), std::move(out));
}

CoeffVector truncate_pn(const CoeffVector& c, long n) {
  if (n < 1) throw std::invalid_argument("truncate_pn: n must be >= 1");
  const long lo = std::max(c.lo(), 0L);
  const long hi = std::min(c.hi(), n - 1);
  if (lo > hi) return CoeffVector();
  return c.restricted(IndexWindow(lo, hi));
}

CoeffVector multiply(const CoeffVector& a, const CoeffVector& b) {
  const std::size_t la = a.size();
  const std::size_t lb = b.size();
  const std::size_t len = la + lb - 1;
  const long lo = a.lo() + b.lo();
  std::vector<cplx> out(len);

  if (std::max(la, lb) <= kDirectConvolutionLimit || std::min(la, lb) <= kShortFactor) {
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    for (std::size_t i = 0; i < la; ++i) {
      const cplx x = ca[i];
      if (x == cplx{}) continue;
      for (std::size_t j = 0; j < lb; ++j) out[i + j] += x * cb[j];
    }
    return CoeffVector(lo, std::move(out));
  }

  const std::size_t n = next_power_of_two(len);
  std::vector<cplx> fa(n), fb(n);
  std::copy(a.coeffs().begin(), a.coeffs().end(), fa.begin());
  std::copy(b.coeffs().begin(), b.coeffs().end(), fb.begin());
  fft(fa);
  fft(fb);
  for (std::size_t k = 0; k < n; ++k) fa[k] *= fb[k];
  fft(fa, /*inverse=*/true);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < len; ++k) out[k] = fa[k] * scale;
  return CoeffVector(lo, std::move(out));
}

CoeffVector fejer_mean(const CoeffVector& c, long d) {
  if (d < 0) throw std::invalid_argument("fejer_mean: order must be nonnegative");
  const long lo = std::max(c.lo(), -d);
  const long hi = std::min(c.hi(), d);
  if (lo > hi) return CoeffVector();
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
  for (long n = lo; n <= hi; ++n) {
    const double weight = 1.0 - static_cast<double>(std::abs(n)) / static_cast<double>(d + 1);
    out[static_cast<std::size_t>(n - lo)] = weight * c[n];
  }
  return CoeffVector(lo, std::move(out));
}

double grid_sup(const CoeffVector& c, std::size_t M) {
  const GridFunction g = synthesize(c, M);
  double m = 0.0;
  for (const cplx& z : g.samples()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace hardyop
