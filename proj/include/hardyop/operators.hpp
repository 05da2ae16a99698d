#pragma once

// Finite sections of Toeplitz operators T(a) f = P(a f) on span{e_0..e_{N-1}},
// the shifted-analytic symbols e_{-n} h, the finite-rank correction
//
//   K_0 = T(e_{-n}) P_n M_h - T(e_{-n}) M_W P_n M_{h W^{-1}},
//
// and the conjugated operator M_W T(e_{-n} h) M_{W^{-1}} = T(e_{-n} h) + K_0.

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hardyop/spectral.hpp"
#include "hardyop/weights.hpp"

namespace hardyop {

/// Symbol a of a Toeplitz operator: a Laurent polynomial, or e_{-n} h with
/// n >= 1 and h analytic.
class SymbolSpec {
 public:
  enum class Kind { laurent, shifted_analytic };

  static SymbolSpec laurent(CoeffVector coeffs);
  static SymbolSpec shifted_analytic(long n, CoeffVector h);

  Kind kind() const { return kind_; }
  /// Shift n (shifted_analytic only).
  long shift() const { return n_; }
  /// Analytic factor h (shifted_analytic only).
  const CoeffVector& analytic_factor() const { return h_; }

  /// Full Laurent coefficient sequence of the symbol.
  const CoeffVector& coefficients() const { return laurent_; }

  /// max(|lo|, |hi|) of the Laurent coefficients.
  long degree() const;

  /// Number of negative frequencies that can reach index 0: max(0, -lo).
  long negative_reach() const { return std::max(0L, -laurent_.lo()); }

  friend SymbolSpec operator*(cplx s, const SymbolSpec& a);

 private:
  SymbolSpec(Kind kind, long n, CoeffVector h, CoeffVector laurent)
      : kind_(kind), n_(n), h_(std::move(h)), laurent_(std::move(laurent)) {}

  Kind kind_;
  long n_ = 0;
  CoeffVector h_;
  CoeffVector laurent_;
};

/// Dense N x N compression P_N A P_N; column j is the image of e_j. Stored
/// row-major.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(std::size_t n);
  OperatorMatrix(std::size_t n, std::vector<cplx> row_major);

  std::size_t n() const { return n_; }
  cplx operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  std::span<const cplx> entries() const { return entries_; }

  /// Sets column j from the coefficient window [0, N-1] of c.
  void set_column(std::size_t j, const CoeffVector& c);

  /// Copy with columns 0..m-1 set to zero.
  OperatorMatrix with_zeroed_columns(std::size_t m) const;

  double frobenius_norm() const;

  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  std::size_t n_;
  std::vector<cplx> entries_;
};

/// Matrix-free composition Pi_k M_{f_k} ... Pi_1 M_{f_1} on coefficient
/// vectors supported in [0, N-1], where Pi_i keeps indices [0, out_hi_i].
/// The final stage must end at out_hi = N - 1. Columns 0..zeroed_columns-1
/// of the represented matrix are zero.
class SectionOperator {
 public:
  struct Stage {
    CoeffVector symbol;
    long out_hi;
  };

  SectionOperator(std::size_t n, std::vector<Stage> stages, std::size_t zeroed_columns = 0);

  std::size_t n() const { return n_; }
  std::size_t zeroed_columns() const { return zeroed_; }

  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  void apply_adjoint(std::span<const cplx> x, std::span<cplx> y) const;

  SectionOperator with_zeroed_columns(std::size_t m) const;

  /// Dense copy, column by column.
  OperatorMatrix to_matrix() const;

 private:
  std::size_t n_;
  std::vector<Stage> stages_;
  std::vector<CoeffVector> adjoint_symbols_;
  std::size_t zeroed_;
};

OperatorMatrix toeplitz_matrix(const SymbolSpec& a, std::size_t N);

/// T(e_{-n} h) f = e_{-n} (I - P_n)(h f) for analytic h and f.
CoeffVector apply_special_toeplitz(long n, const CoeffVector& h, const CoeffVector& f);

/// K_0 compressed to N x N. Intermediate products are kept on [0, 4N - 1].
OperatorMatrix k0_matrix(long n, const CoeffVector& h, const OuterPair& W, std::size_t N);

/// Column j = window [0, N-1] of P(W P(a P(W^{-1} e_j))), intermediate
/// products on [0, 4N - 1].
OperatorMatrix conjugated_toeplitz_matrix(const SymbolSpec& a, const OuterPair& W, std::size_t N);

/// Matrix-free forms of the two sections above, equal to them entrywise up to
/// rounding. Intermediate windows are the shortest that leave rows 0..N-1
/// exact.
SectionOperator toeplitz_operator(const SymbolSpec& a, std::size_t N);
SectionOperator conjugated_toeplitz_operator(const SymbolSpec& a, const OuterPair& W, std::size_t N);

/// Writes a Laurent symbol (plus an optional analytic tail) as e_{-n} h with
/// n = max(1, -lo).
std::pair<long, CoeffVector> csa_decompose(const SymbolSpec& a, const CoeffVector* plus_tail = nullptr);

/// Singular values in descending order (full decomposition).
std::vector<double> singular_values(const OperatorMatrix& m);

/// Number of singular values above rel_tol * sigma_1 (0 for the zero matrix).
std::size_t numerical_rank(const OperatorMatrix& m, double rel_tol = 1e-8);

}  // namespace hardyop
