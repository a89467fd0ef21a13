#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qcqpkit/symmat.hpp"
#include "test_util.hpp"

using namespace qcqpkit;

TEST_CASE("inner product basics") {
  CHECK(inner(SymMatrix::identity(3), SymMatrix::identity(3)) == 3.0);

  const std::vector<double> x = {2.0, 1.0, 1.0};
  CHECK(inner(SymMatrix::diag({0, 0, 1}), SymMatrix::outer(x)) == 1.0);

  // Benchmark row 1: B1 . X at the rank-1 optimum (2, 1).
  const SymMatrix b1 = SymMatrix::from_rows(3, {0, 0, 1, 0, -1, 0, 1, 0, 2});
  CHECK(inner(b1, SymMatrix::outer(x)) == Catch::Approx(5.0).margin(1e-12));

  CHECK_THROWS_AS(inner(SymMatrix::identity(2), SymMatrix::identity(3)), std::invalid_argument);
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const SymMatrix a = testutil::random_symmetric(rng, n);
    const SymMatrix b = testutil::random_symmetric(rng, n);
    const SymMatrix x = testutil::random_symmetric(rng, n);
    const double scale = 1.0 + std::abs(inner(a, x)) + std::abs(inner(b, x));
    CHECK(std::abs(inner(a, x) - inner(x, a)) <= 1e-12 * scale);
    CHECK(std::abs(inner(a + b, x) - inner(a, x) - inner(b, x)) <= 1e-12 * scale);
  }
}

TEST_CASE("inner of two PSD matrices is nonnegative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const SymMatrix x = testutil::random_psd(rng, n, 1 + static_cast<int>(rng() % n));
    const SymMatrix y = testutil::random_psd(rng, n, 1 + static_cast<int>(rng() % n));
    CHECK(inner(y, x) >= -1e-10 * y.frobenius_norm() * x.frobenius_norm());
  }
}

TEST_CASE("eig on diagonal and zero matrices") {
  const EigenDecomposition d = eig(SymMatrix::diag({1, 1, -1}));
  CHECK(d.values[0] == Catch::Approx(1.0));
  CHECK(d.values[1] == Catch::Approx(1.0));
  CHECK(d.values[2] == Catch::Approx(-1.0));

  const EigenDecomposition z = eig(SymMatrix(4));
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("eig of a hyperbola-family pair sum") {
  // B(2,1) + B(1,1) = [[4.5,-3,0],[-3,2,0],[0,0,2]]. Its characteristic
  // polynomial factors as (lambda^2 - 6.5 lambda)(lambda - 2): spectrum
  // {6.5, 2, 0}, all nonnegative.
  const SymMatrix sum = SymMatrix::from_rows(3, {4.5, -3, 0, -3, 2, 0, 0, 0, 2});
  const EigenDecomposition d = eig(sum);
  CHECK(d.values[0] == Catch::Approx(6.5).margin(1e-12));
  CHECK(d.values[1] == Catch::Approx(2.0).margin(1e-12));
  CHECK(d.values[2] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("eig reconstruction and orthonormality invariants") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const SymMatrix a = testutil::random_symmetric(rng, n, -5.0, 5.0);
    const EigenDecomposition d = eig(a);

    SymMatrix rebuilt(n);
    for (int k = 0; k < n; ++k) {
      std::vector<double> v(n);
      for (int i = 0; i < n; ++i) v[i] = d.vectors(i, k);
      rebuilt += d.values[k] * SymMatrix::outer(v);
    }
    CHECK((rebuilt - a).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));

    const Matrix vtv = d.vectors.transposed() * d.vectors;
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) err += std::pow(vtv(i, j) - (i == j ? 1.0 : 0.0), 2);
    CHECK(std::sqrt(err) <= 1e-10);

    for (int k = 0; k + 1 < n; ++k) CHECK(d.values[k] >= d.values[k + 1]);
  }
}

TEST_CASE("is_psd basics") {
  CHECK(is_psd(SymMatrix::identity(4), 1e-9));
  CHECK_FALSE(is_psd(SymMatrix::diag({1, -1}), 1e-9));
  CHECK(is_psd(SymMatrix(3), 1e-9));
  CHECK_THROWS_AS(is_psd(SymMatrix::identity(2), -1.0), std::invalid_argument);
}

TEST_CASE("parabola-family pair sums are PSD for distinct integer slopes") {
  // Instance family with entries [[a^2,-a,-1/2],[-a,1,0],[-1/2,0,r]], r >= 1.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const long a1 = static_cast<long>(rng() % 9) - 4;
    long a2 = static_cast<long>(rng() % 9) - 4;
    if (a1 == a2) a2 += 1;
    std::uniform_real_distribution<double> rd(1.0, 3.0);
    auto member = [](long a, double r) {
      const double ad = static_cast<double>(a);
      return SymMatrix::from_rows(3, {ad * ad, -ad, -0.5, -ad, 1, 0, -0.5, 0, r});
    };
    CHECK(is_psd(member(a1, rd(rng)) + member(a2, rd(rng)), 1e-9));
  }
}

TEST_CASE("rank1_factors on simple inputs") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const Rank1Decomposition one = rank1_factors(SymMatrix::outer(x));
  REQUIRE(one.count() == 1);
  const double sign = one.factors[0][0] > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 3; ++i) CHECK(one.factors[0][i] == Catch::Approx(sign * x[i]).margin(1e-10));

  const Rank1Decomposition two = rank1_factors(SymMatrix::identity(2));
  REQUIRE(two.count() == 2);
  double dot = 0.0;
  for (int i = 0; i < 2; ++i) dot += two.factors[0][i] * two.factors[1][i];
  CHECK(std::abs(dot) <= 1e-12);
  CHECK((two.sum(2) - SymMatrix::identity(2)).frobenius_norm() <= 1e-12);

  CHECK_THROWS_AS(rank1_factors(SymMatrix::diag({1, -1})), std::invalid_argument);
}

TEST_CASE("rank1_factors reconstructs 1000 random PSD matrices") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const int rank = 1 + static_cast<int>(rng() % n);
    const SymMatrix x = testutil::random_psd(rng, n, rank);
    const Rank1Decomposition d = rank1_factors(x);
    CHECK(d.count() <= rank);
    CHECK((d.sum(n) - x).frobenius_norm() <= 1e-8 * (1.0 + x.frobenius_norm()));
  }
}

TEST_CASE("congruence matches the explicit triple product") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % 5);
    const SymMatrix a = testutil::random_symmetric(rng, n);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix l(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) l(i, j) = dist(rng);
    const SymMatrix got = a.congruence(l);
    const SymMatrix want = SymMatrix::symmetrized(l.transposed() * a.to_dense() * l);
    CHECK((got - want).frobenius_norm() <= 1e-12 * (1.0 + want.frobenius_norm()));
  }
}
