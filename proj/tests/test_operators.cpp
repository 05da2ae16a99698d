#include <catch_amalgamated.hpp>

#include "hardyop/operators.hpp"
#include "support.hpp"

using namespace hardyop;

namespace {

OperatorMatrix identity(std::size_t N) {
  OperatorMatrix m(N);
  for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("SymbolSpec kinds", "[operators]") {
  CHECK_THROWS_AS(SymbolSpec::shifted_analytic(0, CoeffVector::monomial(0)), std::invalid_argument);
  CHECK_THROWS_AS(SymbolSpec::shifted_analytic(1, CoeffVector::monomial(-1)), std::invalid_argument);
  const SymbolSpec a = SymbolSpec::shifted_analytic(2, CoeffVector(0, {1.0, 0.0, 3.0}));
  CHECK(a.coefficients() == CoeffVector(-2, {1.0, 0.0, 3.0}));
  CHECK(a.degree() == 2);
  CHECK(a.negative_reach() == 2);
  CHECK(SymbolSpec::laurent(CoeffVector(1, {1.0})).negative_reach() == 0);
  const SymbolSpec b = cplx(2.0) * a;
  CHECK(b.kind() == SymbolSpec::Kind::shifted_analytic);
  CHECK(b.analytic_factor() == CoeffVector(0, {2.0, 0.0, 6.0}));
}

TEST_CASE("OperatorMatrix", "[operators]") {
  CHECK_THROWS_AS(OperatorMatrix(0), std::invalid_argument);
  CHECK_THROWS_AS(OperatorMatrix(2, std::vector<cplx>(3)), std::invalid_argument);
  CHECK_THROWS_AS(OperatorMatrix(1, {cplx(NAN)}), std::invalid_argument);
  const OperatorMatrix m(2, {1.0, 2.0, 3.0, 4.0});
  CHECK(m(0, 1) == cplx(2.0));
  CHECK(m(1, 0) == cplx(3.0));
  CHECK(std::abs(m.frobenius_norm() - std::sqrt(30.0)) <= 1e-15);
  const OperatorMatrix z = m.with_zeroed_columns(1);
  CHECK(z(0, 0) == cplx(0.0));
  CHECK(z(1, 0) == cplx(0.0));
  CHECK(z(1, 1) == cplx(4.0));
  CHECK((m - m).frobenius_norm() == 0.0);
}

TEST_CASE("toeplitz_matrix examples", "[operators]") {
  const OperatorMatrix sub = toeplitz_matrix(SymbolSpec::laurent(CoeffVector::monomial(1)), 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(sub(i, j) == cplx(i == j + 1 ? 1.0 : 0.0));

  CHECK(testing::max_diff(toeplitz_matrix(SymbolSpec::laurent(CoeffVector::monomial(0)), 5), identity(5)) == 0.0);
  const SymbolSpec e0 = SymbolSpec::shifted_analytic(2, CoeffVector(0, {0.0, 0.0, 1.0}));
  CHECK(testing::max_diff(toeplitz_matrix(e0, 4), identity(4)) == 0.0);
}

TEST_CASE("toeplitz_matrix is diagonal-constant and nested", "[operators][property]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, -static_cast<long>(rng() % 6), static_cast<long>(rng() % 6)));
    const std::size_t N = 8 + rng() % 24;
    const OperatorMatrix t = toeplitz_matrix(a, N);
    const OperatorMatrix t2 = toeplitz_matrix(a, 2 * N);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        REQUIRE(t(i, j) == a.coefficients()[static_cast<long>(i) - static_cast<long>(j)]);
        REQUIRE(t(i, j) == t2(i, j));
        if (i + 1 < N && j + 1 < N) REQUIRE(t(i, j) == t(i + 1, j + 1));
      }
    }
  }
}

TEST_CASE("apply_special_toeplitz examples", "[operators]") {
  const CoeffVector one = CoeffVector::monomial(0);
  CHECK(apply_special_toeplitz(1, one, one) == CoeffVector());
  CHECK(apply_special_toeplitz(1, one, CoeffVector::monomial(1)) == one);
  const CoeffVector lin(0, {1.0, 1.0});
  CHECK(apply_special_toeplitz(2, lin, lin) == one);
  CHECK_THROWS_AS(apply_special_toeplitz(1, CoeffVector::monomial(-1), one), std::invalid_argument);
  CHECK_THROWS_AS(apply_special_toeplitz(1, one, CoeffVector::monomial(-1)), std::invalid_argument);
  CHECK_THROWS_AS(apply_special_toeplitz(0, one, one), std::invalid_argument);
}

TEST_CASE("apply_special_toeplitz equals P(e_{-n} h f)", "[operators][property]") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    const long n = 1 + static_cast<long>(rng() % 5);
    const CoeffVector h = testing::random_coeffs(rng, 0, static_cast<long>(rng() % 9));
    const CoeffVector f = testing::random_coeffs(rng, static_cast<long>(rng() % 3), static_cast<long>(3 + rng() % 12));
    const CoeffVector oracle = riesz_project(multiply(h.shifted(-n), f));
    REQUIRE(apply_special_toeplitz(n, h, f) == oracle);
    REQUIRE(apply_special_toeplitz(n, h, f).lo() >= 0);
  }
}

TEST_CASE("toeplitz columns are special Toeplitz images of e_j", "[operators][property]") {
  std::mt19937_64 rng(61);
  const long n = 3;
  const CoeffVector h = testing::random_coeffs(rng, 0, 6);
  const SymbolSpec a = SymbolSpec::shifted_analytic(n, h);
  const std::size_t N = 24;
  const OperatorMatrix t = toeplitz_matrix(a, N);
  for (std::size_t j = 0; j < N; ++j) {
    const CoeffVector col = apply_special_toeplitz(n, h, CoeffVector::monomial(static_cast<long>(j)));
    for (std::size_t i = 0; i < N; ++i) REQUIRE(std::abs(t(i, j) - col[static_cast<long>(i)]) <= 1e-12);
  }
}

TEST_CASE("K_0 vanishes for a constant weight", "[operators]") {
  std::mt19937_64 rng(67);
  const CoeffVector h = testing::random_coeffs(rng, 0, 4);
  const OperatorMatrix k = k0_matrix(2, h, OuterPair::constant(1.0, IndexWindow(0, 127)), 32);
  CHECK(k.frobenius_norm() == 0.0);
  CHECK(numerical_rank(k) == 0);
}

TEST_CASE("K_0 has rank at most n", "[operators]") {
  {
    const OuterPair W = outer_pair(PowerWeight::single(0.3), IndexWindow(0, 255));
    const std::vector<double> s = singular_values(k0_matrix(1, CoeffVector::monomial(0), W, 64));
    CHECK(s[2] <= 1e-8 * s[0]);
    CHECK(s[1] <= 1e-8 * s[0]);
  }
  std::mt19937_64 rng(71);
  for (double lambda : {-0.3, 0.3}) {
    const OuterPair W = outer_pair(PowerWeight::single(lambda), IndexWindow(0, 511));
    const CoeffVector h = testing::random_coeffs(rng, 0, 4);
    const OperatorMatrix k = k0_matrix(3, h, W, 128);
    CHECK(numerical_rank(k) <= 3);
    CHECK(numerical_rank(k) >= 1);
    // K_0 lives in the first n columns.
    for (std::size_t i = 0; i < 128; ++i)
      for (std::size_t j = 3; j < 128; ++j) REQUIRE(k(i, j) == cplx(0.0));
  }
}

TEST_CASE("conjugation by a constant pair is the identity map", "[operators]") {
  std::mt19937_64 rng(73);
  const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, -3, 4));
  const OperatorMatrix c = conjugated_toeplitz_matrix(a, OuterPair::constant(2.5, IndexWindow(0, 127)), 32);
  CHECK(testing::max_diff(c, toeplitz_matrix(a, 32)) <= 1e-15);
}

TEST_CASE("conjugated section of the unit symbol is the identity", "[operators]") {
  for (double lambda : {-0.3, 0.3}) {
    const OuterPair W = outer_pair(PowerWeight::single(lambda), IndexWindow(0, 255));
    const OperatorMatrix c = conjugated_toeplitz_matrix(SymbolSpec::laurent(CoeffVector::monomial(0)), W, 64);
    CHECK(testing::max_diff(c, identity(64)) <= 1e-8);
  }
}

TEST_CASE("conjugation identity on random shifted symbols", "[operators][property]") {
  std::mt19937_64 rng(79);
  const std::vector<PowerWeight> weights{PowerWeight::single(-0.3), PowerWeight::single(0.3),
                                         PowerWeight({{0.0, 0.25}, {std::numbers::pi, -0.25}}),
                                         PowerWeight({{1.0, 0.4}, {4.0, -0.4}})};
  for (int trial = 0; trial < 6; ++trial) {
    const long n = 1 + static_cast<long>(rng() % 4);
    const CoeffVector h = testing::random_coeffs(rng, 0, static_cast<long>(rng() % 9));
    const SymbolSpec a = SymbolSpec::shifted_analytic(n, h);
    const PowerWeight& w = weights[static_cast<std::size_t>(trial) % weights.size()];
    const std::size_t N = 128;
    const OuterPair W = outer_pair(w, IndexWindow(0, 4 * static_cast<long>(N) - 1));
    const OperatorMatrix T = toeplitz_matrix(a, N);
    const OperatorMatrix K = k0_matrix(n, h, W, N);
    const OperatorMatrix C = conjugated_toeplitz_matrix(a, W, N);
    CHECK((C - (T + K)).frobenius_norm() / T.frobenius_norm() <= 1e-6);
    const std::vector<double> s = singular_values(K);
    CHECK(s[static_cast<std::size_t>(n)] <= 1e-8 * s[0]);
  }
}

TEST_CASE("matrix-free sections equal the dense ones", "[operators]") {
  std::mt19937_64 rng(83);
  const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, -3, 5));
  const std::size_t N = 48;
  CHECK(testing::max_diff(toeplitz_operator(a, N).to_matrix(), toeplitz_matrix(a, N)) <= 1e-14);

  const OuterPair W = outer_pair(PowerWeight::single(0.3), IndexWindow(0, 4 * 48 - 1));
  const OperatorMatrix dense = conjugated_toeplitz_matrix(a, W, N);
  const SectionOperator op = conjugated_toeplitz_operator(a, W, N);
  CHECK(testing::max_diff(op.to_matrix(), dense) <= 1e-13);
  CHECK(testing::max_diff(op.with_zeroed_columns(5).to_matrix(), dense.with_zeroed_columns(5)) <= 1e-13);
}

TEST_CASE("SectionOperator adjoint", "[operators][property]") {
  std::mt19937_64 rng(89);
  const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, -2, 3));
  const OuterPair W = outer_pair(PowerWeight::single(-0.3), IndexWindow(0, 127));
  const SectionOperator op = conjugated_toeplitz_operator(a, W, 40).with_zeroed_columns(3);
  const OperatorMatrix m = op.to_matrix();
  std::vector<cplx> x(40), y(40), ax(40), ahy(40);
  for (cplx& z : x) z = cplx(testing::uniform(rng), testing::uniform(rng));
  for (cplx& z : y) z = cplx(testing::uniform(rng), testing::uniform(rng));
  op.apply(x, ax);
  op.apply_adjoint(y, ahy);
  cplx lhs{}, rhs{};
  for (std::size_t i = 0; i < 40; ++i) {
    lhs += std::conj(y[i]) * ax[i];
    rhs += std::conj(ahy[i]) * x[i];
  }
  CHECK(std::abs(lhs - rhs) <= 1e-12);
  // The adjoint is the conjugate transpose of the dense copy.
  for (std::size_t i = 0; i < 40; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < 40; ++j) acc += std::conj(m(j, i)) * y[j];
    REQUIRE(std::abs(acc - ahy[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(op.apply(std::vector<cplx>(3), ax), std::invalid_argument);
  CHECK_THROWS_AS(SectionOperator(4, {{CoeffVector::monomial(0), 2}}), std::invalid_argument);
}

TEST_CASE("csa_decompose", "[operators]") {
  const SymbolSpec a = SymbolSpec::laurent(CoeffVector(-2, {1.0, 0.0, 0.0, 3.0}));
  const auto [n, h] = csa_decompose(a);
  CHECK(n == 2);
  CHECK(h == CoeffVector(0, {1.0, 0.0, 0.0, 3.0}));
  CHECK(SymbolSpec::shifted_analytic(n, h).coefficients() == a.coefficients());

  const SymbolSpec analytic = SymbolSpec::laurent(CoeffVector(0, {2.0, 1.0}));
  const auto [n1, h1] = csa_decompose(analytic);
  CHECK(n1 == 1);
  CHECK(h1 == CoeffVector(1, {2.0, 1.0}));

  const CoeffVector tail(0, {0.0, 0.0, 0.0, 0.0, 0.0, 0.5});
  const auto [n2, h2] = csa_decompose(a, &tail);
  CHECK(SymbolSpec::shifted_analytic(n2, h2).coefficients() == a.coefficients() + tail);
  const CoeffVector bad = CoeffVector::monomial(-1);
  CHECK_THROWS_AS(csa_decompose(a, &bad), std::invalid_argument);
}

TEST_CASE("csa_decompose round trip is bit-exact", "[operators][property]") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 30; ++trial) {
    const long lo = static_cast<long>(rng() % 9) - 6;
    const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, lo, lo + static_cast<long>(rng() % 8)));
    const auto [n, h] = csa_decompose(a);
    REQUIRE(h.lo() >= 0);
    REQUIRE(SymbolSpec::shifted_analytic(n, h).coefficients() == a.coefficients());
  }
}

TEST_CASE("singular values and numerical rank", "[operators]") {
  const OperatorMatrix d(3, {3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5});
  const std::vector<double> s = singular_values(d);
  CHECK(std::abs(s[0] - 3.0) <= 1e-15);
  CHECK(std::abs(s[1] - 1.0) <= 1e-15);
  CHECK(std::abs(s[2] - 0.5) <= 1e-15);
  CHECK(numerical_rank(d) == 3);
  CHECK(numerical_rank(OperatorMatrix(4)) == 0);

  // Rank-2 outer-product sum.
  std::mt19937_64 rng(101);
  std::vector<cplx> u1(10), v1(10), u2(10), v2(10);
  for (auto* vec : {&u1, &v1, &u2, &v2})
    for (cplx& z : *vec) z = cplx(testing::uniform(rng), testing::uniform(rng));
  OperatorMatrix r(10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) r(i, j) = u1[i] * std::conj(v1[j]) + u2[i] * std::conj(v2[j]);
  CHECK(numerical_rank(r) == 2);
}

TEST_CASE("finite sections never exceed the grid sup on H^2", "[operators][property]") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 8; ++trial) {
    const SymbolSpec a = SymbolSpec::laurent(testing::random_coeffs(rng, -4, 4));
    const double sup = grid_sup(a.coefficients(), 1 << 16);
    for (std::size_t N : {8, 32, 96}) CHECK(singular_values(toeplitz_matrix(a, N)).front() <= sup + 1e-9);
  }
}
