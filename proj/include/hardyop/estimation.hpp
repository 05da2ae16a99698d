#pragma once

// Operator norms of finite sections and bracketed estimates of essential
// norms of Toeplitz operators on H^2 and on weighted H^2(w).
//
// upper: sigma_max of the section with its first m columns zeroed, i.e.
//        ||A (I - P_m)|| restricted to span{e_0..e_{N-1}}.
// lower: max over theta of ||A u_theta|| for unit wave packets
//        u_theta = L^{-1/2} sum_{l<L} exp(i l theta) e_{jmin+l}.
//
// The weighted operator is measured through M_W T(a) M_{W^{-1}} on the
// unweighted section, which carries the same norms.

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "hardyop/operators.hpp"
#include "hardyop/weights.hpp"

namespace hardyop {

struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t N = 0;
  std::size_t m = 0;
  std::size_t L = 0;
  std::size_t thetas = 0;
};

/// Thrown when the norm iteration hits its cap; carries the last estimate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, std::size_t iterations)
      : std::runtime_error(what), last_estimate_(last_estimate), iterations_(iterations) {}

  double last_estimate() const { return last_estimate_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double last_estimate_;
  std::size_t iterations_;
};

struct NormOptions {
  std::size_t max_iterations = 10000;
  double rel_tol = 1e-10;
  /// Sections smaller than this go through a full SVD.
  std::size_t dense_below = 64;
};

/// Largest singular value. Below opts.dense_below a full SVD is used;
/// otherwise Lanczos on the Gram operator A^* A seeded with the normalized
/// all-ones vector.
double operator_norm(const OperatorMatrix& M, const NormOptions& opts = {});
double operator_norm(const SectionOperator& A, const NormOptions& opts = {});

/// sigma_max of the (conjugated when W != nullptr) section with its first m
/// columns zeroed. Requires 1 <= m <= N/4.
double essential_upper(const SymbolSpec& a, const OuterPair* W, std::size_t m, std::size_t N,
                       const NormOptions& opts = {});

/// Wave-packet lower bound for ||A (I - P_jmin)||. Requires
/// jmin + L <= N - a.degree(), L >= 1, thetas >= 1.
double essential_lower_wavepacket(const SymbolSpec& a, const OuterPair* W, std::size_t L,
                                  std::size_t jmin, std::size_t thetas, std::size_t N);

struct BracketParams {
  std::size_t N = 1024;
  std::size_t m = 64;
  std::size_t L = 64;
  std::size_t thetas = 256;
};

/// Lower and upper estimates at matched truncation (jmin = m). The upper end
/// is raised to the lower end if the iteration fell short of it.
NormEstimate essential_bracket(const SymbolSpec& a, const OuterPair* W, const BracketParams& params = {},
                               const NormOptions& opts = {});

/// Coefficients (c_lo, c_hi) with c_lo ||a|| <= ||T(a)||_{e, H^p} <= c_hi ||a||
/// for a in C + H^inf: (1, min{2^{|1-2/p|}, 1/sin(pi/p)}).
std::pair<double, double> theoretical_bounds(double p);

}  // namespace hardyop
