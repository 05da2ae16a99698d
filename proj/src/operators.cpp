#include "hardyop/operators.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hardyop {

namespace {

void require_analytic(const CoeffVector& c, const char* who, const char* what) {
  if (c.lo() < 0) throw std::invalid_argument(std::string(who) + ": " + what + " must be analytic");
}

// f~(k) = conj(f(-k)); multiplication by f~ is the adjoint of multiplication by f.
CoeffVector conj_reversed(const CoeffVector& f) {
  const auto c = f.coeffs();
  std::vector<cplx> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = std::conj(c[c.size() - 1 - k]);
  return CoeffVector(-f.hi(), std::move(out));
}

IndexWindow head(long hi) { return IndexWindow(0, hi); }

}  // namespace

// ---------------------------------------------------------------------------
// SymbolSpec

SymbolSpec SymbolSpec::laurent(CoeffVector coeffs) {
  return SymbolSpec(Kind::laurent, 0, CoeffVector(), std::move(coeffs));
}

SymbolSpec SymbolSpec::shifted_analytic(long n, CoeffVector h) {
  if (n < 1) throw std::invalid_argument("SymbolSpec: shift n must be >= 1");
  require_analytic(h, "SymbolSpec", "h");
  CoeffVector hn = h.restricted(head(h.hi()));
  CoeffVector full = hn.shifted(-n);
  return SymbolSpec(Kind::shifted_analytic, n, std::move(hn), std::move(full));
}

long SymbolSpec::degree() const { return std::max(std::abs(laurent_.lo()), std::abs(laurent_.hi())); }

SymbolSpec operator*(cplx s, const SymbolSpec& a) {
  if (a.kind_ == SymbolSpec::Kind::shifted_analytic) return SymbolSpec::shifted_analytic(a.n_, s * a.h_);
  return SymbolSpec::laurent(s * a.laurent_);
}

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(std::size_t n) : n_(n), entries_(n * n) {
  if (n == 0) throw std::invalid_argument("OperatorMatrix: size must be positive");
}

OperatorMatrix::OperatorMatrix(std::size_t n, std::vector<cplx> row_major)
    : n_(n), entries_(std::move(row_major)) {
  if (n == 0 || entries_.size() != n * n)
    throw std::invalid_argument("OperatorMatrix: expected " + std::to_string(n * n) + " entries");
  for (const cplx& z : entries_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("OperatorMatrix: non-finite entry");
}

void OperatorMatrix::set_column(std::size_t j, const CoeffVector& c) {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = c[static_cast<long>(i)];
}

OperatorMatrix OperatorMatrix::with_zeroed_columns(std::size_t m) const {
  OperatorMatrix out = *this;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < std::min(m, n_); ++j) out(i, j) = 0.0;
  return out;
}

double OperatorMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("OperatorMatrix: size mismatch");
  OperatorMatrix out = a;
  for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += b.entries_[k];
  return out;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("OperatorMatrix: size mismatch");
  OperatorMatrix out = a;
  for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] -= b.entries_[k];
  return out;
}

// ---------------------------------------------------------------------------
// SectionOperator

SectionOperator::SectionOperator(std::size_t n, std::vector<Stage> stages, std::size_t zeroed_columns)
    : n_(n), stages_(std::move(stages)), zeroed_(std::min(zeroed_columns, n)) {
  if (n == 0) throw std::invalid_argument("SectionOperator: size must be positive");
  if (stages_.empty() || stages_.back().out_hi != static_cast<long>(n) - 1)
    throw std::invalid_argument("SectionOperator: last stage must end at N - 1");
  for (const Stage& s : stages_) {
    if (s.out_hi < 0) throw std::invalid_argument("SectionOperator: negative stage window");
    adjoint_symbols_.push_back(conj_reversed(s.symbol));
  }
}

void SectionOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("SectionOperator::apply: size mismatch");
  std::vector<cplx> v(x.begin(), x.end());
  std::fill(v.begin(), v.begin() + static_cast<long>(zeroed_), cplx{});
  CoeffVector c(0, std::move(v));
  for (const Stage& s : stages_) c = multiply(s.symbol, c).restricted(head(s.out_hi));
  for (std::size_t i = 0; i < n_; ++i) y[i] = c[static_cast<long>(i)];
}

void SectionOperator::apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != n_ || y.size() != n_)
    throw std::invalid_argument("SectionOperator::apply_adjoint: size mismatch");
  CoeffVector c(0, std::vector<cplx>(x.begin(), x.end()));
  for (std::size_t k = stages_.size(); k-- > 0;) {
    const long in_hi = k == 0 ? static_cast<long>(n_) - 1 : stages_[k - 1].out_hi;
    c = multiply(adjoint_symbols_[k], c).restricted(head(in_hi));
  }
  for (std::size_t i = 0; i < n_; ++i) y[i] = i < zeroed_ ? cplx{} : c[static_cast<long>(i)];
}

SectionOperator SectionOperator::with_zeroed_columns(std::size_t m) const {
  SectionOperator out = *this;
  out.zeroed_ = std::min(m, n_);
  return out;
}

OperatorMatrix SectionOperator::to_matrix() const {
  OperatorMatrix m(n_);
  for (std::size_t j = zeroed_; j < n_; ++j) {
    CoeffVector c = CoeffVector::monomial(static_cast<long>(j));
    for (const Stage& s : stages_) c = multiply(s.symbol, c).restricted(head(s.out_hi));
    m.set_column(j, c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Sections

OperatorMatrix toeplitz_matrix(const SymbolSpec& a, std::size_t N) {
  if (N == 0) throw std::invalid_argument("toeplitz_matrix: N must be positive");
  const CoeffVector& c = a.coefficients();
  OperatorMatrix m(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m(i, j) = c[static_cast<long>(i) - static_cast<long>(j)];
  return m;
}

CoeffVector apply_special_toeplitz(long n, const CoeffVector& h, const CoeffVector& f) {
  if (n < 1) throw std::invalid_argument("apply_special_toeplitz: n must be >= 1");
  require_analytic(h, "apply_special_toeplitz", "h");
  require_analytic(f, "apply_special_toeplitz", "f");
  const CoeffVector hf = multiply(h, f);
  if (hf.hi() < n) return CoeffVector();
  // (I - P_n) keeps the indices >= n; e_{-n} moves them down to >= 0.
  return hf.restricted(IndexWindow(std::max(hf.lo(), n), hf.hi())).shifted(-n);
}

OperatorMatrix k0_matrix(long n, const CoeffVector& h, const OuterPair& W, std::size_t N) {
  if (n < 1) throw std::invalid_argument("k0_matrix: n must be >= 1");
  if (N == 0) throw std::invalid_argument("k0_matrix: N must be positive");
  require_analytic(h, "k0_matrix", "h");
  const IndexWindow internal = head(4 * static_cast<long>(N) - 1);
  const CoeffVector one = CoeffVector::monomial(0);
  const CoeffVector w = W.w_coeffs.restricted(internal);
  const CoeffVector h_winv = multiply(h, W.winv_coeffs).restricted(internal);

  OperatorMatrix m(N);
  for (std::size_t j = 0; j < N; ++j) {
    const CoeffVector ej = CoeffVector::monomial(static_cast<long>(j));
    const CoeffVector first = apply_special_toeplitz(n, one, truncate_pn(multiply(h, ej), n));
    const CoeffVector inner = truncate_pn(multiply(h_winv, ej).restricted(internal), n);
    const CoeffVector second = apply_special_toeplitz(n, one, multiply(w, inner).restricted(internal));
    m.set_column(j, first - second);
  }
  return m;
}

OperatorMatrix conjugated_toeplitz_matrix(const SymbolSpec& a, const OuterPair& W, std::size_t N) {
  if (N == 0) throw std::invalid_argument("conjugated_toeplitz_matrix: N must be positive");
  const long internal_hi = 4 * static_cast<long>(N) - 1;
  const IndexWindow internal = head(internal_hi);
  std::vector<SectionOperator::Stage> stages{
      {W.winv_coeffs.restricted(internal), internal_hi},
      {a.coefficients(), internal_hi},
      {W.w_coeffs.restricted(internal), static_cast<long>(N) - 1},
  };
  return SectionOperator(N, std::move(stages)).to_matrix();
}

SectionOperator toeplitz_operator(const SymbolSpec& a, std::size_t N) {
  return SectionOperator(N, {{a.coefficients(), static_cast<long>(N) - 1}});
}

SectionOperator conjugated_toeplitz_operator(const SymbolSpec& a, const OuterPair& W, std::size_t N) {
  const long last = static_cast<long>(N) - 1;
  const long reach = last + a.negative_reach();
  std::vector<SectionOperator::Stage> stages{
      {W.winv_coeffs.restricted(head(reach)), reach},
      {a.coefficients(), last},
      {W.w_coeffs.restricted(head(last)), last},
  };
  return SectionOperator(N, std::move(stages));
}

std::pair<long, CoeffVector> csa_decompose(const SymbolSpec& a, const CoeffVector* plus_tail) {
  CoeffVector total = a.coefficients();
  if (plus_tail != nullptr) {
    require_analytic(*plus_tail, "csa_decompose", "tail");
    total = total + *plus_tail;
  }
  const long n = std::max(1L, -a.coefficients().lo());
  CoeffVector h = total.shifted(n);
  return {n, h.restricted(head(h.hi()))};
}

// ---------------------------------------------------------------------------
// Spectral data

std::vector<double> singular_values(const OperatorMatrix& m) {
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(m.n());
  const Eigen::MatrixXcd dense = Eigen::Map<const RowMajor>(m.entries().data(), n, n);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
  const Eigen::VectorXd& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::size_t numerical_rank(const OperatorMatrix& m, double rel_tol) {
  const std::vector<double> s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double v : s)
    if (v > rel_tol * s.front()) ++r;
  return r;
}

}  // namespace hardyop
