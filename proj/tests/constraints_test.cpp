#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qcqpkit/constraints.hpp"
#include "qcqpkit/instances.hpp"
#include "qcqpkit/table1.hpp"
#include "test_util.hpp"

using namespace qcqpkit;

namespace {

double eval(const Constraint& c, double u1, double u2) {
  const double u[2] = {u1, u2};
  return evaluate(c, u);
}

Transform3 random_affine(std::mt19937_64& rng, int pieces = 3) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.3, 2.5);
  Transform3 m = Transform3::identity();
  for (int k = 0; k < pieces; ++k) {
    switch (rng() % 3) {
      case 0: m = m * scaling(pos(rng), pos(rng)); break;
      case 1: m = m * rotation(dist(rng)); break;
      default: m = m * translation(dist(rng), dist(rng)); break;
    }
  }
  return m;
}

}  // namespace

TEST_CASE("basic constraint matrices match the displayed forms") {
  CHECK(disk(1.5).matrix == SymMatrix::from_rows(3, {1, 0, 0, 0, 1, 0, 0, 0, -2.25}));
  CHECK(hyperbola(2).matrix == SymMatrix::from_rows(3, {-1, 0, 0, 0, 1, 0, 0, 0, 4}));
  CHECK(parabola(1).matrix == SymMatrix::from_rows(3, {0, 0, -0.5, 0, 1, 0, -0.5, 0, 1}));
  CHECK(line(1).matrix == SymMatrix::from_rows(3, {0, 0, 0.5, 0, 0, 0, 0.5, 0, -1}));

  CHECK_THROWS_AS(disk(0.0), std::invalid_argument);
  CHECK_THROWS_AS(hyperbola(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(parabola(-1.0), std::invalid_argument);
}

TEST_CASE("basic constraint evaluations") {
  CHECK(eval(disk(1), 0, 0) == -1.0);
  CHECK(eval(disk(2), 2, 0) == 0.0);
  CHECK(eval(hyperbola(1), 0, 0) == 1.0);
  CHECK(eval(hyperbola(0), 1, 1) == 0.0);
  CHECK(eval(hyperbola(1), 2, 0) == -3.0);
  CHECK(eval(parabola(1), 0, 0) == 1.0);
  CHECK(eval(parabola(2), 2, 0) == 0.0);
  CHECK(eval(parabola(1), 3, 1) == -1.0);
  CHECK(eval(line(0), 1, 0) == 1.0);
  CHECK(eval(line(1), 1, 5) == 0.0);
  CHECK(eval(line(1), 0, 0) == -1.0);
  CHECK(eval({SymMatrix(3), "zero"}, 0.7, -3.1) == 0.0);
}

TEST_CASE("transform builders") {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(scaling(1, 1).matrix()(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(rotation(0).matrix()(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(translation(0, 0).matrix()(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(std::abs(rotation(2 * std::numbers::pi).matrix()(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
  CHECK_THROWS_AS(scaling(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Transform3(Matrix(3, 3)), std::invalid_argument);
}

TEST_CASE("rotations are orthogonal") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix r = rotation(dist(rng)).matrix();
    const Matrix g = r.transposed() * r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("squeezed parabola reproduces the scaled matrix") {
  // S((1, 0.2))^T E^p(2) S((1, 0.2)) has the middle entry scaled by (1/0.2)^2.
  const Constraint b1 = conjugate(parabola(2), scaling(1.0, 0.2));
  const SymMatrix want = SymMatrix::from_rows(3, {0, 0, -0.5, 0, 25, 0, -0.5, 0, 2});
  CHECK((b1.matrix - want).frobenius_norm() <= 1e-12);
}

TEST_CASE("rotated half-plane") {
  // R(pi/4)^T E^l(0) R(pi/4) shades the side of the diagonal u1 + u2 < 0.
  const Constraint b1 = conjugate(line(0), rotation(std::numbers::pi / 4));
  CHECK(eval(b1, -1, 1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(eval(b1, 1, 1) == Catch::Approx(std::numbers::sqrt2).margin(1e-12));
  CHECK(eval(b1, -1, -1) < 0.0);
}

TEST_CASE("translated disk zone sits at +p") {
  const Constraint moved = conjugate(disk(0.5), translation(1.0, 0.0));
  CHECK(eval(moved, 1, 0) == Catch::Approx(-0.25).margin(1e-12));   // zone center
  CHECK(eval(moved, -1, 0) == Catch::Approx(3.75).margin(1e-12));   // far side
  CHECK(eval(moved, 1.5, 0) == Catch::Approx(0.0).margin(1e-12));   // boundary
}

TEST_CASE("scaling maps the unit circle boundary outward") {
  // Under S((2,3)) the point v = (2,0) pulls back to u = (1,0), on the
  // boundary of the unit disk zone.
  const Constraint scaled = conjugate(disk(1), scaling(2.0, 3.0));
  CHECK(eval(scaled, 2, 0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(eval(scaled, 0, 3) == Catch::Approx(0.0).margin(1e-12));
  CHECK(eval(scaled, 1, 0) < 0.0);
}

TEST_CASE("chained conjugations compose like the stacked product") {
  const Transform3 s = scaling(1.0, 0.2), r = rotation(std::numbers::pi / 4), p = translation(-1.0, -2.0);
  const Constraint chained = conjugate(conjugate(conjugate(parabola(2), s), r), p);
  const Constraint direct = conjugate(parabola(2), s * r * p);
  CHECK((chained.matrix - direct.matrix).frobenius_norm() <= 1e-12);

  // Swapping the order changes the zone.
  const Constraint swapped = conjugate(conjugate(conjugate(parabola(2), p), r), s);
  CHECK((swapped.matrix - direct.matrix).frobenius_norm() > 1e-3);
}

TEST_CASE("conjugation by the identity is the identity") {
  std::mt19937_64 rng(5);
  const SymMatrix b = testutil::random_symmetric(rng, 3);
  const Constraint c = conjugate({b, "b"}, Transform3::identity());
  CHECK((c.matrix - b).frobenius_norm() == 0.0);
}

TEST_CASE("conjugation implements the change of variables") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Constraint b{testutil::random_symmetric(rng, 3), "b"};
    const Transform3 m = random_affine(rng);
    const std::vector<double> v = {dist(rng), dist(rng)};
    const std::vector<double> u = m.map_point(v);
    const double lhs = evaluate(conjugate(b, m), v);
    const double rhs = evaluate(b, u);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("conjugating back with the inverse restores the constraint") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.4, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Constraint b{testutil::random_symmetric(rng, 3), "b"};
    const double s1 = pos(rng), s2 = pos(rng), th = dist(rng), p1 = dist(rng), p2 = dist(rng);
    const Transform3 m = scaling(s1, s2) * rotation(th) * translation(p1, p2);
    const Transform3 minv = translation(-p1, -p2) * rotation(-th) * scaling(1.0 / s1, 1.0 / s2);
    const Constraint back = conjugate(conjugate(b, m), minv);
    CHECK((back.matrix - b.matrix).frobenius_norm() <= 1e-10 * (1.0 + b.matrix.frobenius_norm()));
  }
}

TEST_CASE("benchmark constraint evaluations") {
  const ConstraintSet set = table1_constraints();
  CHECK(eval(set.constraints[0], 0, 0) == 2.0);   // 2u1 - u2^2 + 2
  CHECK(eval(set.constraints[2], 1, 0) == -1.0);  // (u1-1)^2 + u2^2 - 1
}

TEST_CASE("is_feasible over the strip") {
  const ConstraintSet set = strip();
  const double in[2] = {0.0, 0.0};
  const double out[2] = {3.0, 3.0};
  CHECK(is_feasible(set, in));
  CHECK_FALSE(is_feasible(set, out));
  const ConstraintSet empty;
  CHECK(is_feasible(empty, out));
}
