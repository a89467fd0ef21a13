#ifndef QCQPKIT_SDP_HPP_
#define QCQPKIT_SDP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcqpkit/instances.hpp"
#include "qcqpkit/symmat.hpp"

namespace qcqpkit {

enum class SolveStatus { optimal, unbounded, infeasible, max_iter };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

/// Stationarity residuals of a primal/dual pair, each recomputable from the
/// problem data alone.
struct KktResiduals {
  double primal_eq = 0.0;    // |H.X - 1|
  double primal_ineq = 0.0;  // max(0, -min_k B^k.X)
  double dual = 0.0;         // ||Q - H t - sum_k y_k B^k - Y||_F
  double comp_y = 0.0;       // max_k |y_k (B^k.X)|
  double comp_Y = 0.0;       // |Y.X|

  double max() const { return std::max({primal_eq, primal_ineq, dual, comp_y, comp_Y}); }
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
  double unbounded_threshold = 1e8;
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::max_iter;
  SymMatrix X;
  double t = 0.0;             // multiplier of H.X = 1
  std::vector<double> y;      // multipliers of B^k.X >= 0, nonnegative
  SymMatrix Y;                // dual slack
  double objective = 0.0;     // Q.X at the returned iterate
  KktResiduals residuals;
  int iterations = 0;
};

/// Recomputes every stationarity residual from scratch, independent of any
/// solver internals.
inline KktResiduals kkt_residuals(const QcqpInstance& inst, const SdpSolution& sol) {
  inst.validate();
  if (sol.X.dim() != inst.n || sol.Y.dim() != inst.n || static_cast<int>(sol.y.size()) != inst.set.size())
    throw std::invalid_argument("kkt_residuals: dimension mismatch");
  KktResiduals r;
  r.primal_eq = std::abs(inner(inst.H, sol.X) - 1.0);
  SymMatrix d = inst.Q;
  d -= sol.t * inst.H;
  for (int k = 0; k < inst.set.size(); ++k) {
    const double bx = inner(inst.set.constraints[k].matrix, sol.X);
    r.primal_ineq = std::max(r.primal_ineq, -bx);
    r.comp_y = std::max(r.comp_y, std::abs(sol.y[k] * bx));
    d -= sol.y[k] * inst.set.constraints[k].matrix;
  }
  r.primal_ineq = std::max(r.primal_ineq, 0.0);
  d -= sol.Y;
  r.dual = d.frobenius_norm();
  r.comp_Y = std::abs(inner(sol.Y, sol.X));
  return r;
}

/// Indices k with B^k.X = 0 up to a relative tolerance; drives the choice of
/// extraction route.
inline std::vector<int> active_set(const QcqpInstance& inst, const SdpSolution& sol, double act_tol = 1e-6) {
  std::vector<int> idx;
  const double xn = sol.X.frobenius_norm();
  for (int k = 0; k < inst.set.size(); ++k) {
    const double scale = 1.0 + inst.set.constraints[k].matrix.frobenius_norm() * xn;
    if (std::abs(inner(inst.set.constraints[k].matrix, sol.X)) <= act_tol * scale) idx.push_back(k);
  }
  return idx;
}

namespace detail {

/// Solves a dense linear system in place by LU with partial pivoting.
inline std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_dense: shape");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) throw std::runtime_error("solve_dense: singular system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * b[c];
    b[r] = s / a(r, r);
  }
  return b;
}

/// Spectral power A^p via the Jacobi eigensolver; eigenvalues are floored at
/// a tiny positive value so inverse powers survive boundary iterates.
inline SymMatrix spectral_pow(const SymMatrix& a, double p) {
  const EigenDecomposition d = eig(a);
  const double floor_v = 1e-300;
  SymMatrix out(a.dim());
  for (int k = 0; k < a.dim(); ++k) {
    const double lam = std::pow(std::max(d.values[k], floor_v), p);
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j <= i; ++j) out.at(i, j) += lam * d.vectors(i, k) * d.vectors(j, k);
  }
  return out;
}

inline SymMatrix sandwich(const SymMatrix& w, const SymMatrix& mid) {
  return SymMatrix::symmetrized(w.to_dense() * mid.to_dense() * w.to_dense());
}

/// Largest step in (0, 1] keeping X + alpha*D in the PSD cone.
inline double psd_step(const SymMatrix& x, const SymMatrix& dx) {
  const SymMatrix xih = spectral_pow(x, -0.5);
  const SymMatrix c = sandwich(xih, dx);
  const double lmin = eig(c).values.back();
  if (lmin >= -1e-14) return 1.0;
  return std::min(1.0, -1.0 / lmin);
}

inline double vec_step(const std::vector<double>& v, const std::vector<double>& dv) {
  double a = 1.0;
  for (size_t k = 0; k < v.size(); ++k)
    if (dv[k] < 0.0) a = std::min(a, -v[k] / dv[k]);
  return a;
}

}  // namespace detail

/// Solves the relaxation min Q.X s.t. B^k.X >= 0, H.X = 1, X PSD with an
/// infeasible-start primal-dual path-following method: Nesterov-Todd scaling
/// on the PSD block, log-barrier slacks on the m scalar inequalities and a
/// Mehrotra predictor-corrector step. The free multiplier t of the equality
/// sits directly in the Newton system.
inline SdpSolution solve_relaxation(const QcqpInstance& inst, const SolverOptions& opts = {}) {
  inst.validate();
  const int n = inst.n;
  const int m = inst.set.size();
  if (inst.H.frobenius_norm() == 0.0) throw std::invalid_argument("solve_relaxation: H must be nonzero");

  const SymMatrix& q = inst.Q;
  const SymMatrix& h = inst.H;
  std::vector<const SymMatrix*> b(m);
  for (int k = 0; k < m; ++k) b[k] = &inst.set.constraints[k].matrix;

  const double qnorm = q.frobenius_norm();
  const double hnorm = h.frobenius_norm();
  std::vector<double> bnorm(m);
  for (int k = 0; k < m; ++k) bnorm[k] = b[k]->frobenius_norm();

  SdpSolution sol;
  const double hi = inner(h, SymMatrix::identity(n));
  sol.X = hi > 1e-8 ? (1.0 / hi) * SymMatrix::identity(n) : SymMatrix::identity(n);
  sol.Y = SymMatrix::identity(n);
  sol.t = 0.0;
  sol.y.assign(m, 1.0);
  std::vector<double> s(m);
  for (int k = 0; k < m; ++k) s[k] = std::max(1.0, inner(*b[k], sol.X));

  int collapse_streak = 0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    sol.iterations = iter;

    SymMatrix rd = q;  // dual residual Q - tH - sum y_k B^k - Y
    rd -= sol.t * h;
    for (int k = 0; k < m; ++k) rd -= sol.y[k] * (*b[k]);
    rd -= sol.Y;
    const double rp = 1.0 - inner(h, sol.X);
    std::vector<double> rlin(m);
    double slack_res = 0.0;
    for (int k = 0; k < m; ++k) {
      rlin[k] = s[k] - inner(*b[k], sol.X);
      slack_res = std::max(slack_res, std::abs(rlin[k]) / (1.0 + bnorm[k] * sol.X.frobenius_norm()));
    }

    const double pobj = inner(q, sol.X);
    const double dobj = sol.t;
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double prim_res = std::max(std::abs(rp) / (1.0 + hnorm * sol.X.frobenius_norm()), slack_res);
    const double dual_res = rd.frobenius_norm() / (1.0 + qnorm);

    if (rel_gap <= opts.tol && prim_res <= opts.tol && dual_res <= opts.tol) {
      sol.status = SolveStatus::optimal;
      sol.objective = pobj;
      sol.residuals = kkt_residuals(inst, sol);
      return sol;
    }
    const double escape = opts.unbounded_threshold * (1.0 + qnorm);
    if (pobj < -escape && prim_res <= 1e-6) {
      sol.status = SolveStatus::unbounded;
      sol.objective = pobj;
      sol.residuals = kkt_residuals(inst, sol);
      return sol;
    }
    if (dobj > escape && dual_res <= 1e-6) {
      sol.status = SolveStatus::infeasible;
      sol.objective = pobj;
      sol.residuals = kkt_residuals(inst, sol);
      return sol;
    }
    // A primal ray shows up as step collapse with the objective still
    // falling and the primal residuals already settled.
    if (collapse_streak >= 5 && pobj < -1e3 * (1.0 + qnorm) && prim_res <= 1e-5) {
      sol.status = SolveStatus::unbounded;
      sol.objective = pobj;
      sol.residuals = kkt_residuals(inst, sol);
      return sol;
    }

    double mu = inner(sol.X, sol.Y);
    for (int k = 0; k < m; ++k) mu += sol.y[k] * s[k];
    mu /= n + m;

    // Nesterov-Todd scaling point: W Y W = X.
    const SymMatrix xh = detail::spectral_pow(sol.X, 0.5);
    const SymMatrix inner_m = detail::sandwich(xh, sol.Y);
    const SymMatrix w = detail::sandwich(xh, detail::spectral_pow(inner_m, -0.5));
    const SymMatrix whalf = detail::spectral_pow(w, 0.5);
    const SymMatrix winvhalf = detail::spectral_pow(w, -0.5);
    const SymMatrix yinv = detail::spectral_pow(sol.Y, -1.0);

    const SymMatrix hbar = detail::sandwich(w, h);
    std::vector<SymMatrix> bbar;
    bbar.reserve(m);
    for (int k = 0; k < m; ++k) bbar.push_back(detail::sandwich(w, *b[k]));

    Matrix schur(m + 1, m + 1);
    schur(0, 0) = inner(h, hbar);
    for (int k = 0; k < m; ++k) {
      schur(0, k + 1) = inner(h, bbar[k]);
      schur(k + 1, 0) = inner(*b[k], hbar);
      for (int j = 0; j < m; ++j) schur(k + 1, j + 1) = inner(*b[k], bbar[j]);
      schur(k + 1, k + 1) += s[k] / sol.y[k];
    }

    struct Direction {
      SymMatrix dx, dy_mat;
      double dt = 0.0;
      std::vector<double> dy, ds;
    };
    auto newton = [&](const SymMatrix& rc_mat, const std::vector<double>& rc_vec) {
      SymMatrix u = rc_mat;
      u -= detail::sandwich(w, rd);
      std::vector<double> rhs(m + 1);
      rhs[0] = rp - inner(h, u);
      for (int k = 0; k < m; ++k) rhs[k + 1] = rlin[k] + rc_vec[k] / sol.y[k] - inner(*b[k], u);
      const std::vector<double> z = detail::solve_dense(schur, rhs);
      Direction d;
      d.dt = z[0];
      d.dy.assign(z.begin() + 1, z.end());
      d.dy_mat = rd;
      d.dy_mat -= d.dt * h;
      for (int k = 0; k < m; ++k) d.dy_mat -= d.dy[k] * (*b[k]);
      d.dx = u;
      d.dx += d.dt * hbar;
      for (int k = 0; k < m; ++k) d.dx += d.dy[k] * bbar[k];
      d.ds.resize(m);
      for (int k = 0; k < m; ++k) d.ds[k] = (rc_vec[k] - s[k] * d.dy[k]) / sol.y[k];
      return d;
    };

    // Predictor: aim at complementarity zero.
    SymMatrix rc_aff = sol.X;
    rc_aff *= -1.0;
    std::vector<double> rcv_aff(m);
    for (int k = 0; k < m; ++k) rcv_aff[k] = -sol.y[k] * s[k];
    const Direction aff = newton(rc_aff, rcv_aff);

    const double ap_aff = std::min(detail::psd_step(sol.X, aff.dx), detail::vec_step(s, aff.ds));
    const double ad_aff = std::min(detail::psd_step(sol.Y, aff.dy_mat), detail::vec_step(sol.y, aff.dy));
    SymMatrix x_aff = sol.X;
    x_aff += ap_aff * aff.dx;
    SymMatrix y_aff = sol.Y;
    y_aff += ad_aff * aff.dy_mat;
    double mu_aff = inner(x_aff, y_aff);
    for (int k = 0; k < m; ++k) mu_aff += (sol.y[k] + ad_aff * aff.dy[k]) * (s[k] + ap_aff * aff.ds[k]);
    mu_aff /= n + m;
    const double ratio = std::clamp(mu_aff / std::max(mu, 1e-300), 0.0, 1.0);
    const double sigma = ratio * ratio * ratio;

    // Corrector: recenter and absorb the second-order term, evaluated in the
    // scaled space where the predictor really acts.
    const SymMatrix dx_sc = detail::sandwich(winvhalf, aff.dx);
    const SymMatrix dy_sc = detail::sandwich(whalf, aff.dy_mat);
    const SymMatrix second = SymMatrix::symmetrized(
        whalf.to_dense() *
        SymMatrix::symmetrized(dx_sc.to_dense() * dy_sc.to_dense()).to_dense() *
        whalf.to_dense());
    SymMatrix rc = sigma * mu * yinv;
    rc -= sol.X;
    rc -= second;
    std::vector<double> rcv(m);
    for (int k = 0; k < m; ++k) rcv[k] = sigma * mu - sol.y[k] * s[k] - aff.dy[k] * aff.ds[k];
    const Direction dir = newton(rc, rcv);

    constexpr double kStepFrac = 0.99;
    const double ap = kStepFrac * std::min(detail::psd_step(sol.X, dir.dx), detail::vec_step(s, dir.ds));
    const double ad =
        kStepFrac * std::min(detail::psd_step(sol.Y, dir.dy_mat), detail::vec_step(sol.y, dir.dy));
    collapse_streak = (ap < 1e-6 && ad < 1e-6) ? collapse_streak + 1 : 0;

    sol.X += ap * dir.dx;
    sol.t += ad * dir.dt;
    sol.Y += ad * dir.dy_mat;
    for (int k = 0; k < m; ++k) {
      s[k] += ap * dir.ds[k];
      sol.y[k] += ad * dir.dy[k];
    }

    bool finite = std::isfinite(sol.t);
    for (double v : sol.X.lower()) finite = finite && std::isfinite(v);
    for (double v : sol.Y.lower()) finite = finite && std::isfinite(v);
    if (!finite) break;

    if (opts.verbose) {
      std::printf("iter %3d  pobj % .8e  dobj % .8e  gap %.2e  pres %.2e  dres %.2e  mu %.2e\n", iter,
                  pobj, dobj, rel_gap, prim_res, dual_res, mu);
    }
  }

  sol.status = SolveStatus::max_iter;
  sol.objective = inner(q, sol.X);
  const double qnorm2 = 1.0 + qnorm;
  const KktResiduals res = kkt_residuals(inst, sol);
  // Late unbounded call: the iterate cap hit while racing down a ray.
  if (sol.objective < -1e6 * qnorm2 && res.primal_eq <= 1e-5 && res.primal_ineq <= 1e-5)
    sol.status = SolveStatus::unbounded;
  sol.residuals = res;
  return sol;
}

}  // namespace qcqpkit

#endif  // QCQPKIT_SDP_HPP_
