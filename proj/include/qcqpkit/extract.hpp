#ifndef QCQPKIT_EXTRACT_HPP_
#define QCQPKIT_EXTRACT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qcqpkit/sdp.hpp"
#include "qcqpkit/symmat.hpp"

namespace qcqpkit {

/// A rank-1 point of the relaxation recovered from the solved optimum.
struct ExtractionResult {
  SymMatrix X_tilde;             // rank-1 optimum x x^T / tau
  std::optional<std::vector<double>> u;  // recovered point when H pins the last coordinate
  double tau = 0.0;              // H-weight of the selected factor
  std::string case_path;         // "i", "ii" or "ii_then_i"
  double objective = 0.0;        // Q.X_tilde
  int split_count = 0;           // pairwise rotations performed
};

struct FallbackNeeded {
  SymMatrix X_hat;  // convex combination with a newly active constraint
  int chosen_factor = -1;
};

namespace detail {

struct SplitStats {
  int rotations = 0;
};

inline double split_scale(const SymMatrix& b, const SymMatrix& x) {
  return std::max(1.0, b.frobenius_norm() * x.frobenius_norm());
}

}  // namespace detail

/// Rotates factor pairs with opposite-sign values of B . x x^T until every
/// factor annihilates B, preserving the factor sum exactly. Each rotation
/// solves a scalar quadratic with roots of opposite signs and keeps the root
/// of smaller magnitude. Requires B . sum x_i x_i^T = 0 within tolerance;
/// the per-factor values can never drop below that input residual.
inline Rank1Decomposition sturm_split(const Rank1Decomposition& decomp, const SymMatrix& b,
                                      detail::SplitStats* stats = nullptr) {
  if (decomp.factors.empty()) return decomp;
  const int n = static_cast<int>(decomp.factors.front().size());
  for (const auto& f : decomp.factors)
    if (static_cast<int>(f.size()) != n) throw std::invalid_argument("sturm_split: mixed factor sizes");
  if (b.dim() != n) throw std::invalid_argument("sturm_split: dimension mismatch");

  const int r = decomp.count();
  const SymMatrix total_matrix = decomp.sum(n);
  const double scale = detail::split_scale(b, total_matrix);
  const double total = inner(b, total_matrix);
  if (std::abs(total) > 1e-5 * scale)
    throw std::invalid_argument("sturm_split: B . X is nonzero beyond tolerance");
  const double tol = 1e-8 * scale;

  Rank1Decomposition out = decomp;
  std::vector<double> value(r);
  auto bdot = [&b, n](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += x[i] * b(i, j) * y[j];
    return s;
  };
  for (int i = 0; i < r; ++i) value[i] = bdot(out.factors[i], out.factors[i]);

  const int cap = r * r;
  int rotations = 0;
  while (true) {
    int lo = 0, hi = 0;
    for (int i = 1; i < r; ++i) {
      if (value[i] < value[lo]) lo = i;
      if (value[i] > value[hi]) hi = i;
    }
    if (!(value[lo] < -tol && value[hi] > tol)) break;  // no opposite-sign pair beyond tolerance
    if (rotations >= cap) throw std::runtime_error("sturm_split: rotation cap exceeded");

    const double a = value[lo];
    const double c = value[hi];
    const double bc = bdot(out.factors[lo], out.factors[hi]);
    // a s^2 + 2 bc s + c = 0 with a c < 0: two real roots of opposite signs.
    const double disc = std::sqrt(bc * bc - a * c);
    const double qv = -(bc + (bc >= 0.0 ? disc : -disc));
    const double root1 = qv / a;
    const double root2 = c / qv;
    const double sbar = std::abs(root1) <= std::abs(root2) ? root1 : root2;

    const double denom = std::sqrt(sbar * sbar + 1.0);
    std::vector<double> f1(n), f2(n);
    for (int i = 0; i < n; ++i) {
      f1[i] = (sbar * out.factors[lo][i] + out.factors[hi][i]) / denom;
      f2[i] = (-out.factors[lo][i] + sbar * out.factors[hi][i]) / denom;
    }
    out.factors[lo] = std::move(f1);
    out.factors[hi] = std::move(f2);
    value[lo] = 0.0;
    value[hi] = a + c;  // the pair total migrates to the second factor
    ++rotations;
  }
  if (stats) stats->rotations = rotations;
  return out;
}

namespace detail {

/// Largest-tau factor of the decomposition; by pigeonhole on H.X = 1 the
/// winner has tau >= 1/r.
inline int select_factor(const Rank1Decomposition& decomp, const SymMatrix& h) {
  int best = -1;
  double best_tau = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < decomp.count(); ++j) {
    const double tau = h.quad(decomp.factors[j]);
    if (tau > best_tau) {
      best_tau = tau;
      best = j;
    }
  }
  return best;
}

inline std::optional<std::vector<double>> recover_point(const QcqpInstance& inst, const SymMatrix& h,
                                                        std::vector<double> x, double tau) {
  if (!is_last_axis_homogenizer(h)) return std::nullopt;
  const int n = inst.n;
  const double root = std::sqrt(tau);
  for (double& v : x) v /= root;
  if (std::abs(x[n - 1]) < 1e-9) return std::nullopt;
  if (x[n - 1] < 0.0)
    for (double& v : x) v = -v;  // the two signs carry the same rank-1 matrix
  std::vector<double> u(n - 1);
  for (int i = 0; i < n - 1; ++i) u[i] = x[i] / x[n - 1];
  return u;
}

inline ExtractionResult finish(const QcqpInstance& inst, const SdpSolution& sol,
                               const Rank1Decomposition& decomp, int j, const std::string& path,
                               int split_count) {
  const double tau = inst.H.quad(decomp.factors[j]);
  const int r = decomp.count();
  if (tau < 1.0 / r - 1e-6)
    throw std::runtime_error("extract: selected factor has tau below 1/r; residuals too large");
  ExtractionResult out;
  out.X_tilde = (1.0 / tau) * SymMatrix::outer(decomp.factors[j]);
  out.tau = tau;
  out.case_path = path;
  out.objective = inner(inst.Q, out.X_tilde);
  out.split_count = split_count;
  out.u = recover_point(inst, inst.H, decomp.factors[j], tau);

  // Surface violations instead of hiding them: the route only produces a
  // QCQP optimum when the constraint family really has the claimed geometry.
  const double xn = out.X_tilde.frobenius_norm();
  for (const Constraint& c : inst.set.constraints) {
    const double margin = inner(c.matrix, out.X_tilde);
    if (margin < -1e-7 * std::max(1.0, c.matrix.frobenius_norm() * xn))
      throw std::runtime_error("extract: recovered point violates '" + c.label +
                               "'; the constraint family does not support rank-1 recovery here");
  }
  if (std::abs(inner(inst.H, out.X_tilde) - 1.0) > 1e-7 * std::max(1.0, inst.H.frobenius_norm() * xn))
    throw std::runtime_error("extract: recovered point misses the normalization");
  if (std::abs(out.objective - sol.objective) > 1e-6 * (1.0 + std::abs(sol.objective)))
    throw std::runtime_error("extract: objective drifted from the relaxation value");
  return out;
}

}  // namespace detail

/// Case with an active constraint: split the factors against B^k so each one
/// annihilates it, then normalize the heaviest factor.
inline ExtractionResult extract_case_i(const QcqpInstance& inst, const SdpSolution& sol, int k,
                                       const std::string& path = "i", double rank_tol = kRankTol) {
  if (k < 0 || k >= inst.set.size()) throw std::invalid_argument("extract_case_i: bad constraint index");
  const Rank1Decomposition decomp = rank1_factors(sol.X, rank_tol);
  if (decomp.count() == 0) throw std::runtime_error("extract_case_i: zero matrix has no factors");
  detail::SplitStats stats;
  const Rank1Decomposition split = sturm_split(decomp, inst.set.constraints[k].matrix, &stats);
  const int j = detail::select_factor(split, inst.H);
  return detail::finish(inst, sol, split, j, path, stats.rotations);
}

/// Case with no active constraint: the optimum also solves the single
/// equality problem, every eigenfactor annihilates the dual slack, and the
/// heaviest factor is optimal there. If it violates some B^k, step back along
/// the segment to X until one constraint becomes active and report that
/// matrix for the active-constraint route.
inline std::variant<ExtractionResult, FallbackNeeded> extract_case_ii(const QcqpInstance& inst,
                                                                      const SdpSolution& sol,
                                                                      double rank_tol = kRankTol) {
  const Rank1Decomposition decomp = rank1_factors(sol.X, rank_tol);
  if (decomp.count() == 0) throw std::runtime_error("extract_case_ii: zero matrix has no factors");

  const double comp = std::abs(inner(sol.Y, sol.X));
  const double comp_scale = 1.0 + sol.Y.frobenius_norm() * sol.X.frobenius_norm();
  int j = -1;
  if (comp <= 1e-6 * comp_scale) {
    j = detail::select_factor(decomp, inst.H);
  } else {
    // Complementarity too loose to trust Y: try factors directly against the
    // stationarity of the single-equality problem, Q - tH PSD-orthogonal to
    // the candidate.
    SymMatrix ybar = inst.Q;
    ybar -= sol.t * inst.H;
    const int r = decomp.count();
    double best_tau = -std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < r; ++cand) {
      const double tau = inst.H.quad(decomp.factors[cand]);
      if (tau < 1.0 / r - 1e-9) continue;
      const double resid = std::abs(ybar.quad(decomp.factors[cand])) / (1.0 + ybar.frobenius_norm());
      if (resid <= 1e-5 && tau > best_tau) {
        best_tau = tau;
        j = cand;
      }
    }
    if (j < 0) throw std::runtime_error("extract_case_ii: no factor satisfies the reduced stationarity");
  }

  const double tau = inst.H.quad(decomp.factors[j]);
  if (tau < 1.0 / decomp.count() - 1e-6)
    throw std::runtime_error("extract_case_ii: selected factor has tau below 1/r");
  const SymMatrix x_tilde = (1.0 / tau) * SymMatrix::outer(decomp.factors[j]);

  double theta = 1.0;
  bool violated = false;
  for (const Constraint& c : inst.set.constraints) {
    const double at_tilde = inner(c.matrix, x_tilde);
    if (at_tilde >= -1e-9 * std::max(1.0, c.matrix.frobenius_norm() * x_tilde.frobenius_norm())) continue;
    violated = true;
    const double at_bar = std::max(inner(c.matrix, sol.X), 0.0);
    theta = std::min(theta, at_bar / (at_bar - at_tilde));  // step where this zone activates
  }
  if (!violated) return detail::finish(inst, sol, decomp, j, "ii", 0);
  SymMatrix x_hat = (1.0 - theta) * sol.X + theta * x_tilde;
  return FallbackNeeded{std::move(x_hat), j};
}

/// Driver over the two routes. Dispatches on the active set of the solved
/// optimum; an infeasible direct factor is repaired by the convex-combination
/// fallback, which lands in the active-constraint case by construction.
inline ExtractionResult extract_solution(const QcqpInstance& inst, const SdpSolution& sol,
                                         double act_tol = 1e-6, double rank_tol = kRankTol) {
  inst.validate();
  if (sol.status != SolveStatus::optimal)
    throw std::invalid_argument("extract_solution: relaxation status is not optimal");
  // Recovery leans on the stationarity of the pair; refuse to certify from
  // a sloppy one (indefinite H offers no repair route).
  const KktResiduals res = kkt_residuals(inst, sol);
  if (res.max() > 1e-4 * (1.0 + std::abs(sol.objective) + sol.X.frobenius_norm()))
    throw std::invalid_argument("extract_solution: stationarity residuals too large to trust");

  const std::vector<int> k0 = active_set(inst, sol, act_tol);
  if (!k0.empty()) return extract_case_i(inst, sol, k0.front(), "i", rank_tol);

  auto outcome = extract_case_ii(inst, sol, rank_tol);
  if (std::holds_alternative<ExtractionResult>(outcome)) return std::get<ExtractionResult>(outcome);

  SdpSolution repaired = sol;
  repaired.X = std::get<FallbackNeeded>(outcome).X_hat;
  repaired.objective = inner(inst.Q, repaired.X);
  const std::vector<int> k1 = active_set(inst, repaired, act_tol);
  if (k1.empty()) throw std::runtime_error("extract_solution: fallback produced no active constraint");
  return extract_case_i(inst, repaired, k1.front(), "ii_then_i", rank_tol);
}

}  // namespace qcqpkit

#endif  // QCQPKIT_EXTRACT_HPP_
