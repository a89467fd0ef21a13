#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qcqpkit/io.hpp"
#include "qcqpkit/sdp.hpp"
#include "qcqpkit/table1.hpp"
#include "qcqpkit/verify.hpp"
#include "test_util.hpp"

using namespace qcqpkit;

TEST_CASE("kkt residuals of a hand-built exact solution are zero") {
  // No constraints, H pinning the last coordinate, Q = diag(1,0,0):
  // X = e3 e3^T, t = 0, Y = Q is an exact stationary pair.
  QcqpInstance inst{3, SymMatrix::diag({1, 0, 0}), last_axis_homogenizer(3), ConstraintSet{}};
  SdpSolution sol;
  sol.status = SolveStatus::optimal;
  const std::vector<double> e3 = {0.0, 0.0, 1.0};
  sol.X = SymMatrix::outer(e3);
  sol.t = 0.0;
  sol.Y = inst.Q;
  const KktResiduals r = kkt_residuals(inst, sol);
  CHECK(r.primal_eq == 0.0);
  CHECK(r.primal_ineq == 0.0);
  CHECK(r.dual == 0.0);
  CHECK(r.comp_y == 0.0);
  CHECK(r.comp_Y == 0.0);

  // Perturbing X by 0.1 I bumps the equality residual by exactly 0.1.
  sol.X += 0.1 * SymMatrix::identity(3);
  CHECK(kkt_residuals(inst, sol).primal_eq == Catch::Approx(0.1));
}

TEST_CASE("solving the unconstrained homogenized problem") {
  QcqpInstance inst{3, SymMatrix::diag({1, 0, 0}), last_axis_homogenizer(3), ConstraintSet{}};
  const SdpSolution sol = solve_relaxation(inst);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(0.0).margin(1e-7));
  CHECK(sol.residuals.max() <= 1e-7);
  CHECK(active_set(inst, sol).empty());
}

TEST_CASE("objective equal to the normalizer is identically one") {
  QcqpInstance inst{3, last_axis_homogenizer(3), last_axis_homogenizer(3), disk_ring(0.5)};
  const SdpSolution sol = solve_relaxation(inst);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("benchmark row 2 solves to the known optimum") {
  QcqpInstance inst{3, table1_objectives()[1], last_axis_homogenizer(3), table1_constraints()};
  const SdpSolution sol = solve_relaxation(inst);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(4.0).margin(1e-5));

  const std::vector<double> expected = {0.0, 6.0, 3.0};
  for (int k = 0; k < 3; ++k)
    CHECK(inner(inst.set.constraints[k].matrix, sol.X) == Catch::Approx(expected[k]).margin(1e-4));

  // Returned residuals are small and recomputable.
  const KktResiduals r = kkt_residuals(inst, sol);
  CHECK(r.max() <= 1e-7);

  // Weak duality at the reported pair.
  CHECK(sol.t <= sol.objective + 1e-7 * (1.0 + std::abs(sol.objective)));

  // B1 is the active constraint.
  const std::vector<int> k0 = active_set(inst, sol);
  REQUIRE(k0.size() == 1);
  CHECK(k0[0] == 0);
}

TEST_CASE("benchmark row 1 has no active constraint") {
  QcqpInstance inst{3, table1_objectives()[0], last_axis_homogenizer(3), table1_constraints()};
  const SdpSolution sol = solve_relaxation(inst);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(0.0).margin(1e-5));
  CHECK(active_set(inst, sol).empty());
}

TEST_CASE("the two-zone strip with the concave objective is unbounded") {
  QcqpInstance inst{3, strip_unbounded_objective(), last_axis_homogenizer(3), strip()};
  const SdpSolution sol = solve_relaxation(inst);
  CHECK(sol.status == SolveStatus::unbounded);
}

TEST_CASE("the one-zone strip attains -4") {
  QcqpInstance inst{3, strip_unbounded_objective(), last_axis_homogenizer(3), strip_single()};
  const SdpSolution sol = solve_relaxation(inst);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == Catch::Approx(-4.0).margin(1e-5));
}

TEST_CASE("a positive definite normalizer keeps every corpus solve optimal") {
  std::mt19937_64 rng(61);
  for (const auto& [name, set] : testutil::condition_d_corpus()) {
    INFO(name);
    const int n = set.dim();
    QcqpInstance inst{n, testutil::random_symmetric(rng, n), SymMatrix::identity(n), set};
    const SdpSolution sol = solve_relaxation(inst);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.t <= sol.objective + 1e-7 * (1.0 + std::abs(sol.objective)));
  }
}

TEST_CASE("solves are deterministic") {
  QcqpInstance inst{3, table1_objectives()[4], last_axis_homogenizer(3), table1_constraints()};
  const SdpSolution a = solve_relaxation(inst);
  const SdpSolution b = solve_relaxation(inst);
  CHECK(a.iterations == b.iterations);
  CHECK(solution_to_json(a).dump() == solution_to_json(b).dump());
}

TEST_CASE("solver rejects a zero normalizer") {
  QcqpInstance inst{3, SymMatrix::identity(3), SymMatrix(3), ConstraintSet{}};
  CHECK_THROWS_AS(solve_relaxation(inst), std::invalid_argument);
}

TEST_CASE("an empty feasible cone is reported infeasible") {
  // -I.X >= 0 forces X = 0, which cannot meet H.X = 1; the dual objective
  // runs away instead.
  ConstraintSet set;
  set.constraints.push_back({-1.0 * SymMatrix::identity(3), "none"});
  QcqpInstance inst{3, SymMatrix::identity(3), last_axis_homogenizer(3), set};
  const SdpSolution sol = solve_relaxation(inst);
  CHECK(sol.status == SolveStatus::infeasible);
}
