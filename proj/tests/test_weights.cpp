#include <catch_amalgamated.hpp>

#include "hardyop/weights.hpp"
#include "support.hpp"

using namespace hardyop;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Taylor coefficients of (1 - z)^lambda: c_0 = 1, c_k = c_{k-1} (k - 1 - lambda) / k.
std::vector<double> binomial_series(double lambda, std::size_t K) {
  std::vector<double> c(K + 1);
  c[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) c[k] = c[k - 1] * (static_cast<double>(k) - 1.0 - lambda) / static_cast<double>(k);
  return c;
}

GridFunction constant_grid(std::size_t M, double c) {
  return GridFunction::sample(M, [c](double) { return cplx(c); });
}

}  // namespace

TEST_CASE("PowerWeight validates its points", "[weights]") {
  CHECK_THROWS_AS(PowerWeight({{-0.1, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(PowerWeight({{2.0 * std::numbers::pi, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(PowerWeight({{1.0, 0.2}, {1.0, 0.3}}), std::invalid_argument);
  CHECK_THROWS_AS(PowerWeight({{1.0, NAN}}), std::invalid_argument);
  CHECK(PowerWeight().empty());
  CHECK_THAT(PowerWeight()(1.234), WithinAbs(1.0, 0.0));
  CHECK_THAT(PowerWeight::single(1.0)(std::numbers::pi), WithinRel(2.0, 1e-15));
  const PowerWeight two({{0.0, 0.5}, {std::numbers::pi, 1.0}});
  CHECK_THAT(two(std::numbers::pi / 2.0), WithinRel(std::pow(2.0, 0.25) * std::sqrt(2.0), 1e-14));
}

TEST_CASE("log_coefficients match quadrature of log w", "[weights]") {
  // A weight that is smooth on the circle away from its points; the oracle
  // integrates log w directly, panels avoiding the singularities at 0 and pi.
  const PowerWeight w({{0.0, 0.3}, {std::numbers::pi, -0.2}});
  const CoeffVector c = w.log_coefficients(6);
  for (long n = -6; n <= 6; ++n) {
    const cplx oracle = testing::fourier_integral([&](double t) { return cplx(std::log(w(t))); }, n, 512, 30);
    CHECK(std::abs(c[n] - oracle) <= 1e-4);
  }
  CHECK(c[0] == cplx(0.0));
  CHECK(std::abs(c[3] - cplx(-0.3 / 6.0 + 0.2 / 6.0 * std::cos(3.0 * std::numbers::pi), 0.0)) <= 1e-15);
}

TEST_CASE("khvedelidze_ap_check uses the open interval", "[weights]") {
  CHECK(khvedelidze_ap_check(PowerWeight::single(0.4), 2.0));
  CHECK_FALSE(khvedelidze_ap_check(PowerWeight::single(0.6), 2.0));
  CHECK_FALSE(khvedelidze_ap_check(PowerWeight::single(0.5), 2.0));
  CHECK_FALSE(khvedelidze_ap_check(PowerWeight::single(-0.5), 2.0));
  CHECK(khvedelidze_ap_check(PowerWeight(), 1.01));
  CHECK(khvedelidze_ap_check(PowerWeight(), 50.0));
  CHECK_FALSE(khvedelidze_ap_check(PowerWeight({{0.0, 0.1}, {1.0, 0.9}}), 2.0));
  CHECK_THROWS_AS(khvedelidze_ap_check(PowerWeight(), 1.0), std::invalid_argument);
}

TEST_CASE("khvedelidze_ap_check is interval-monotone in p", "[weights][property]") {
  for (double lambda = -0.95; lambda <= 0.951; lambda += 0.05) {
    for (double p = 1.05; p <= 8.0; p += 0.05) {
      const bool direct = -1.0 / p < lambda && lambda < 1.0 - 1.0 / p;
      REQUIRE(khvedelidze_ap_check(PowerWeight::single(lambda), p) == direct);
      if (!direct) continue;
      // Larger p widens the right end of the interval, smaller p the left.
      const double q = lambda >= 0.0 ? p + 0.5 : std::max(1.0001, p - 0.5);
      const bool widened = lambda >= 0.0 ? lambda < 1.0 - 1.0 / q : -1.0 / q < lambda;
      if (widened) REQUIRE(khvedelidze_ap_check(PowerWeight::single(lambda), q));
    }
  }
}

TEST_CASE("ap_characteristic of constant weights is 1", "[weights]") {
  CHECK_THAT(ap_characteristic(constant_grid(64, 1.0), 3.0), WithinAbs(1.0, 0.0));
  CHECK_THAT(ap_characteristic(constant_grid(64, 7.5), 2.0), WithinRel(1.0, 1e-15));
  CHECK_THROWS_AS(ap_characteristic(constant_grid(64, 1.0), 1.0), std::invalid_argument);
  std::vector<cplx> s(8, 1.0);
  s[3] = 0.0;
  CHECK_THROWS_AS(ap_characteristic(GridFunction(s), 2.0), std::invalid_argument);
  s[3] = -1.0;
  CHECK_THROWS_AS(ap_characteristic(GridFunction(s), 2.0), std::invalid_argument);
}

TEST_CASE("ap_characteristic matches a brute-force arc scan", "[weights]") {
  std::mt19937_64 rng(43);
  std::vector<cplx> s(32);
  for (cplx& z : s) z = 0.2 + 1.5 * (testing::uniform(rng) + 1.0);
  const GridFunction w(s);
  const double p = 3.0;
  const double q = p / (p - 1.0);
  double best = 0.0;
  for (std::size_t start = 0; start < 32; ++start) {
    for (std::size_t len = 1; len <= 32; ++len) {
      double a = 0.0, b = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        a += std::pow(s[(start + k) % 32].real(), p);
        b += std::pow(s[(start + k) % 32].real(), -q);
      }
      best = std::max(best, std::pow(a / len, 1.0 / p) * std::pow(b / len, 1.0 / q));
    }
  }
  CHECK_THAT(ap_characteristic(w, p, 32), WithinRel(best, 1e-13));
  // A coarser endpoint lattice scans a subset of arcs.
  CHECK(ap_characteristic(w, p, 8) <= best * (1.0 + 1e-13));
}

TEST_CASE("ap_characteristic is scale invariant and at least 1", "[weights][property]") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> s(64);
    for (cplx& z : s) z = std::exp(2.0 * testing::uniform(rng));
    const double p = 1.5 + 3.0 * (testing::uniform(rng) + 1.0);
    const double v = ap_characteristic(GridFunction(s), p);
    CHECK(v >= 1.0 - 1e-14);
    std::vector<cplx> scaled = s;
    for (cplx& z : scaled) z *= 13.7;
    CHECK_THAT(ap_characteristic(GridFunction(scaled), p), WithinRel(v, 1e-12));
  }
}

TEST_CASE("ap_characteristic growth separates |t-1|^0.45 from |t-1|^0.55 at p = 2", "[weights]") {
  const auto growth = [](double lambda) {
    const PowerWeight w = PowerWeight::single(lambda);
    std::vector<double> v;
    for (std::size_t M : {256, 512, 1024}) v.push_back(ap_characteristic(w.sample(M), 2.0, M));
    return std::make_pair(v[1] / v[0] - 1.0, v[2] / v[1] - 1.0);
  };
  const auto [g1, g2] = growth(0.45);
  CHECK(std::isfinite(g1));
  CHECK(g1 < 0.25);
  CHECK(g2 < 0.25);
  // For 0.55 the values grow without bound but only by 2^{0.05} - 1 (about
  // 3.5%) per doubling asymptotically; they still grow faster than at 0.45.
  const auto [h1, h2] = growth(0.55);
  CHECK(h1 > g1);
  CHECK(h2 > g2);
}

TEST_CASE("outer pair of a constant weight", "[weights]") {
  const OuterPair pair = outer_pair(constant_grid(64, 4.0), IndexWindow(0, 15));
  CHECK_THAT(std::abs(pair.w_coeffs[0] - 4.0), WithinAbs(0.0, 1e-14));
  CHECK_THAT(std::abs(pair.winv_coeffs[0] - 0.25), WithinAbs(0.0, 1e-15));
  for (long k = 1; k <= 15; ++k) {
    CHECK(std::abs(pair.w_coeffs[k]) <= 1e-14);
    CHECK(std::abs(pair.winv_coeffs[k]) <= 1e-15);
  }
  CHECK(pair.residual <= 1e-14);
  CHECK_THROWS_AS(outer_pair(constant_grid(64, 4.0), IndexWindow(1, 15)), std::invalid_argument);
  CHECK_THROWS_AS(outer_pair(constant_grid(64, 0.0), IndexWindow(0, 15)), std::invalid_argument);

  const OuterPair c = OuterPair::constant(4.0, IndexWindow(0, 7));
  CHECK(c.w_coeffs == CoeffVector::monomial(0, 4.0));
  CHECK(c.winv_coeffs == CoeffVector::monomial(0, 0.25));
}

TEST_CASE("outer pair of |t - 1| is 1 - z", "[weights]") {
  const OuterPair pair = outer_pair(PowerWeight::single(1.0), IndexWindow(0, 511));
  CHECK(std::abs(pair.w_coeffs[0] - 1.0) <= 1e-6);
  CHECK(std::abs(pair.w_coeffs[1] + 1.0) <= 1e-6);
  for (long k = 2; k <= 511; ++k) REQUIRE(std::abs(pair.w_coeffs[k]) <= 1e-6);
  // 1 / (1 - z) = 1 + z + z^2 + ...
  for (long k = 0; k <= 511; ++k) REQUIRE(std::abs(pair.winv_coeffs[k] - 1.0) <= 1e-12);
  CHECK(pair.residual <= 1e-8);
}

TEST_CASE("outer pair of |t - 1|^lambda matches the binomial series", "[weights]") {
  for (double lambda : {-0.3, 0.3, 0.45}) {
    const OuterPair pair = outer_pair(PowerWeight::single(lambda), IndexWindow(0, 255));
    const std::vector<double> w = binomial_series(lambda, 255);
    const std::vector<double> winv = binomial_series(-lambda, 255);
    for (long k = 0; k <= 255; ++k) {
      REQUIRE(std::abs(pair.w_coeffs[k] - w[static_cast<std::size_t>(k)]) <= 1e-13);
      REQUIRE(std::abs(pair.winv_coeffs[k] - winv[static_cast<std::size_t>(k)]) <= 1e-13);
    }
    // Reciprocal property by an independent double-loop convolution.
    const CoeffVector prod = testing::brute_convolve(pair.w_coeffs, pair.winv_coeffs);
    double defect = 0.0;
    for (long k = 0; k <= 255; ++k) defect = std::max(defect, std::abs(prod[k] - (k == 0 ? 1.0 : 0.0)));
    CHECK(defect <= 1e-8);
    CHECK(defect <= pair.residual + 1e-15);
  }
}

TEST_CASE("outer pair of a rotated point", "[weights]") {
  // |t - e^{i phi}| has outer function 1 - e^{-i phi} z.
  const double phi = 2.0;
  const OuterPair pair = outer_pair(PowerWeight::single(1.0, phi), IndexWindow(0, 31));
  CHECK(std::abs(pair.w_coeffs[0] - 1.0) <= 1e-14);
  CHECK(std::abs(pair.w_coeffs[1] + std::polar(1.0, -phi)) <= 1e-14);
  for (long k = 2; k <= 31; ++k) CHECK(std::abs(pair.w_coeffs[k]) <= 1e-14);
}

TEST_CASE("grid outer pair of a polynomial modulus", "[weights]") {
  // w = |(1 - 0.5 z)(1 + 0.3i z)| with zeros off the closed disk; W is the
  // polynomial itself, and the grid route is exact up to aliasing of log w.
  const CoeffVector poly = multiply(CoeffVector(0, {1.0, -0.5}), CoeffVector(0, {1.0, cplx(0.0, 0.3)}));
  const std::size_t M = 256;
  const GridFunction samples = synthesize(poly, M);
  std::vector<cplx> modulus(M);
  for (std::size_t k = 0; k < M; ++k) modulus[k] = std::abs(samples[k]);
  const GridFunction w(modulus);
  const OuterPair pair = outer_pair(w, IndexWindow(0, 63));

  CHECK(testing::max_diff(pair.w_coeffs, poly) <= 1e-12);
  CHECK(std::abs(pair.w_coeffs[0].imag()) < 1e-12);
  CHECK(pair.w_coeffs[0].real() > 0.0);
  CHECK(pair.residual <= 1e-12);

  const GridFunction back = synthesize(pair.w_coeffs, M);
  for (std::size_t k = 0; k < M; ++k) REQUIRE(std::abs(std::abs(back[k]) - modulus[k].real()) <= 1e-6 * modulus[k].real());
}

TEST_CASE("grid outer pair is normalized and reciprocal for power weights", "[weights][property]") {
  for (double lambda : {-0.3, 0.3}) {
    const OuterPair pair = outer_pair(PowerWeight::single(lambda).sample(1024), IndexWindow(0, 511));
    CHECK(pair.w_coeffs[0].real() > 0.0);
    CHECK(std::abs(pair.w_coeffs[0].imag()) < 1e-12);
    CHECK(pair.residual <= 1e-8);
  }
}

TEST_CASE("evaluate_outer", "[weights]") {
  CHECK(std::abs(evaluate_outer(constant_grid(64, 1.0), cplx(0.3, 0.1)) - 1.0) <= 1e-15);
  CHECK(std::abs(evaluate_outer(constant_grid(64, std::numbers::e), 0.0) - std::numbers::e) <= 1e-14);
  CHECK_THROWS_AS(evaluate_outer(constant_grid(64, 1.0), cplx(0.995, 0.0)), std::invalid_argument);

  // Midpoint quadrature of log|t - 1| converges like log(2)/M.
  const GridFunction w = PowerWeight::single(1.0).sample(std::size_t{1} << 22);
  CHECK(std::abs(evaluate_outer(w, 0.5) - 0.5) <= 1e-6);
  CHECK(std::abs(evaluate_outer(w, 0.0) - 1.0) <= 1e-6);
  CHECK(std::abs(evaluate_outer(w, cplx(0.0, 0.3)) - cplx(1.0, -0.3)) <= 1e-6);
}

TEST_CASE("evaluate_outer agrees with the power series of the grid outer pair", "[weights]") {
  const CoeffVector poly(0, {1.0, cplx(0.2, -0.4), 0.1});
  const std::size_t M = 512;
  const GridFunction samples = synthesize(poly, M);
  std::vector<cplx> modulus(M);
  for (std::size_t k = 0; k < M; ++k) modulus[k] = std::abs(samples[k]);
  const GridFunction w(modulus);
  const OuterPair pair = outer_pair(w, IndexWindow(0, 127));
  for (cplx z : {cplx(0.0), cplx(0.5), cplx(-0.3, 0.4), cplx(0.0, 0.5)})
    CHECK(std::abs(evaluate_outer(w, z) - evaluate_series(pair.w_coeffs, z)) <= 1e-6);
}

TEST_CASE("evaluate_series is Horner evaluation", "[weights]") {
  const CoeffVector c(0, {1.0, 2.0, 3.0});
  CHECK(std::abs(evaluate_series(c, 0.5) - 2.75) <= 1e-15);
  CHECK(std::abs(evaluate_series(CoeffVector(2, {1.0}), 0.5) - 0.25) <= 1e-15);
  CHECK_THROWS_AS(evaluate_series(CoeffVector(-1, {1.0}), 0.5), std::invalid_argument);
}
