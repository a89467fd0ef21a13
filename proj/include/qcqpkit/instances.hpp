#ifndef QCQPKIT_INSTANCES_HPP_
#define QCQPKIT_INSTANCES_HPP_

#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcqpkit/constraints.hpp"
#include "qcqpkit/symmat.hpp"

namespace qcqpkit {

/// One problem: minimize Q over the rank-1 slice of {X PSD, B.X >= 0, H.X = 1}.
struct QcqpInstance {
  int n = 0;
  SymMatrix Q;
  SymMatrix H;
  ConstraintSet set;

  void validate() const {
    if (Q.dim() != n || H.dim() != n) throw std::invalid_argument("QcqpInstance: Q/H dimension mismatch");
    if (!set.constraints.empty() && set.dim() != n)
      throw std::invalid_argument("QcqpInstance: constraint dimension mismatch");
    set.validate();
  }
};

/// The homogenizer diag(0,...,0,1) that pins the last coordinate.
inline SymMatrix last_axis_homogenizer(int n) {
  SymMatrix h(n);
  h.at(n - 1, n - 1) = 1.0;
  return h;
}

inline bool is_last_axis_homogenizer(const SymMatrix& h) {
  return h == last_axis_homogenizer(h.dim());
}

namespace detail {
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}
}  // namespace detail

/// Six small disk zones on a ring of radius 1, a central disk zone and an
/// enclosing zone outside radius 3/2. Weights (1,...,1,1/3) make every
/// pairwise weighted sum PSD for 0 < r <= 1/2.
inline ConstraintSet disk_ring(double r) {
  if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("disk_ring: requires 0 < r <= 1/2");
  ConstraintSet set;
  for (int k = 0; k <= 5; ++k) {
    Constraint c = conjugate(conjugate(disk(r), translation(1.0, 0.0)), rotation(k * std::numbers::pi / 3.0));
    c.label = "B" + std::to_string(k);
    set.constraints.push_back(std::move(c));
  }
  Constraint center = disk(r);
  center.label = "B6";
  set.constraints.push_back(std::move(center));
  Constraint outer = disk(1.5);
  outer.matrix *= -1.0;
  outer.label = "B7";
  set.constraints.push_back(std::move(outer));
  set.alphas = std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1.0 / 3.0};
  set.validate();
  return set;
}

/// m scaled hyperbola zones fanned around p plus a disk zone at p.
inline ConstraintSet hyperbola_fan(int m, double r, std::span<const double, 2> p) {
  if (m < 2) throw std::invalid_argument("hyperbola_fan: requires m >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("hyperbola_fan: requires r > 0");
  const Transform3 shift = translation(p[0], p[1]);
  const Transform3 squeeze = scaling(1.0, std::tan(std::numbers::pi / (2.0 * m)));
  ConstraintSet set;
  for (int k = 0; k < m; ++k) {
    Constraint c =
        conjugate(conjugate(conjugate(hyperbola(r), squeeze), rotation(k * std::numbers::pi / m)), shift);
    c.label = "B" + std::to_string(k);
    set.constraints.push_back(std::move(c));
  }
  Constraint center = conjugate(disk(r), shift);
  center.label = "B" + std::to_string(m);
  set.constraints.push_back(std::move(center));
  set.alphas = std::vector<double>(set.constraints.size(), 1.0);
  set.validate();
  return set;
}

/// m scaled parabola zones rotated around the origin plus a central disk
/// zone; the disk weight 1/(2r) closes Condition (D).
inline ConstraintSet parabola_star(int m, double r) {
  if (m < 3) throw std::invalid_argument("parabola_star: requires m >= 3");
  if (!(r > 0.0)) throw std::invalid_argument("parabola_star: requires r > 0");
  const Transform3 squeeze = scaling(1.0, 2.0 * std::tan(std::numbers::pi / m) * std::sqrt(r));
  ConstraintSet set;
  for (int k = 0; k < m; ++k) {
    Constraint c = conjugate(conjugate(parabola(r), squeeze), rotation(2.0 * k * std::numbers::pi / m));
    c.label = "C" + std::to_string(k);
    set.constraints.push_back(std::move(c));
  }
  Constraint center = disk(r);
  center.label = "C" + std::to_string(m);
  set.constraints.push_back(std::move(center));
  std::vector<double> alphas(set.constraints.size(), 1.0);
  alphas.back() = 1.0 / (2.0 * r);
  set.alphas = std::move(alphas);
  set.validate();
  return set;
}

/// Family (u2 - a u1)^2 - u1^2/4 + r^2 over pairs (a, r). Distinct integer
/// a values keep every pairwise sum PSD.
inline ConstraintSet hyperbola_family(const std::vector<std::pair<long, double>>& g) {
  ConstraintSet set;
  for (size_t i = 0; i < g.size(); ++i) {
    const auto& [a, r] = g[i];
    if (!(r >= 0.0)) throw std::invalid_argument("hyperbola_family: requires r >= 0");
    for (size_t j = 0; j < i; ++j)
      if (g[j].first == a) throw std::invalid_argument("hyperbola_family: duplicate a value");
    const double ad = static_cast<double>(a);
    SymMatrix b = SymMatrix::from_rows(3, {ad * ad - 0.25, -ad, 0, -ad, 1, 0, 0, 0, r * r});
    set.constraints.push_back({std::move(b), "B(" + std::to_string(a) + "," + detail::format_real(r) + ")"});
  }
  set.alphas = std::vector<double>(set.constraints.size(), 1.0);
  set.validate();
  return set;
}

/// Family (a u1 - u2)^2 - u1 + r over pairs (a, r); needs r >= 1.
inline ConstraintSet parabola_family(const std::vector<std::pair<long, double>>& g) {
  ConstraintSet set;
  for (size_t i = 0; i < g.size(); ++i) {
    const auto& [a, r] = g[i];
    if (!(r >= 1.0)) throw std::invalid_argument("parabola_family: requires r >= 1");
    for (size_t j = 0; j < i; ++j)
      if (g[j].first == a) throw std::invalid_argument("parabola_family: duplicate a value");
    const double ad = static_cast<double>(a);
    SymMatrix b = SymMatrix::from_rows(3, {ad * ad, -ad, -0.5, -ad, 1, 0, -0.5, 0, r});
    set.constraints.push_back({std::move(b), "B(" + std::to_string(a) + "," + detail::format_real(r) + ")"});
  }
  set.alphas = std::vector<double>(set.constraints.size(), 1.0);
  set.validate();
  return set;
}

/// A^k = lambda * alpha_Bk B^k + (1-lambda) * alpha_Ck C^k, pairing the two
/// families by position. Missing alphas default to ones with a note.
inline ConstraintSet convex_combine(const ConstraintSet& a, const ConstraintSet& b, double lambda) {
  if (a.size() != b.size())
    throw std::invalid_argument("convex_combine: cardinality mismatch (pad the smaller set with dummy_pad)");
  if (a.empty()) throw std::invalid_argument("convex_combine: empty sets");
  if (a.dim() != b.dim()) throw std::invalid_argument("convex_combine: dimension mismatch");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("convex_combine: lambda must be in (0,1)");
  ConstraintSet out;
  if (!a.alphas || !b.alphas) out.notes.push_back("convex_combine: missing alphas defaulted to ones");
  const std::vector<double> wa = a.effective_alphas();
  const std::vector<double> wb = b.effective_alphas();
  for (int k = 0; k < a.size(); ++k) {
    SymMatrix m = lambda * wa[k] * a.constraints[k].matrix + (1.0 - lambda) * wb[k] * b.constraints[k].matrix;
    out.constraints.push_back({std::move(m), "A" + std::to_string(k)});
  }
  out.alphas = std::vector<double>(out.constraints.size(), 1.0);
  out.validate();
  return out;
}

/// The strip -2 <= u1 + u2 <= 2 as two linear zones. This representation
/// makes the relaxation of the companion objective unbounded.
inline ConstraintSet strip() {
  ConstraintSet set;
  set.constraints.push_back({SymMatrix::from_rows(3, {0, 0, 0.5, 0, 0, 0.5, 0.5, 0.5, 2}), "B2"});
  set.constraints.push_back({SymMatrix::from_rows(3, {0, 0, -0.5, 0, 0, -0.5, -0.5, -0.5, 2}), "B3"});
  set.alphas = std::vector<double>{1.0, 1.0};
  set.validate();
  return set;
}

/// The same strip as the single quadratic zone 4 - (u1+u2)^2 >= 0; with this
/// representation the relaxation attains -4.
inline ConstraintSet strip_single() {
  ConstraintSet set;
  set.constraints.push_back({SymMatrix::from_rows(3, {-1, -1, 0, -1, -1, 0, 0, 0, 4}), "B4"});
  set.alphas = std::vector<double>{1.0};
  set.validate();
  return set;
}

/// -(u1+u2)^2: concave objective whose relaxation over strip() diverges.
inline SymMatrix strip_unbounded_objective() {
  return SymMatrix::from_rows(3, {-1, -1, 0, -1, -1, 0, 0, 0, 0});
}

/// Ball zones |u - a| <= rho for integer centers; distinct centers with
/// rho <= 1/2 keep every pairwise sum PSD. Dimension is len(a) + 1.
inline ConstraintSet ball_family(const std::vector<std::pair<std::vector<long>, double>>& g) {
  if (g.empty()) throw std::invalid_argument("ball_family: empty family");
  const size_t d = g.front().first.size();
  if (d == 0) throw std::invalid_argument("ball_family: centers must be nonempty");
  ConstraintSet set;
  for (size_t i = 0; i < g.size(); ++i) {
    const auto& [a, rho] = g[i];
    if (a.size() != d) throw std::invalid_argument("ball_family: mixed center dimensions");
    if (!(rho > 0.0 && rho <= 0.5)) throw std::invalid_argument("ball_family: requires rho in (0, 1/2]");
    for (size_t j = 0; j < i; ++j)
      if (g[j].first == a) throw std::invalid_argument("ball_family: duplicate center");
    const int n = static_cast<int>(d) + 1;
    SymMatrix b(n);
    double norm2 = 0.0;
    std::string label = "ball(";
    for (size_t k = 0; k < d; ++k) {
      b.at(static_cast<int>(k), static_cast<int>(k)) = 1.0;
      b.at(n - 1, static_cast<int>(k)) = -static_cast<double>(a[k]);
      norm2 += static_cast<double>(a[k]) * static_cast<double>(a[k]);
      label += (k ? "," : "") + std::to_string(a[k]);
    }
    b.at(n - 1, n - 1) = norm2 - rho * rho;
    set.constraints.push_back({std::move(b), label + ")"});
  }
  set.alphas = std::vector<double>(set.constraints.size(), 1.0);
  set.validate();
  return set;
}

/// Appends `count` copies of lambda*I where lambda offsets the most negative
/// eigenvalue among the weighted members, so Condition (D) survives padding.
inline ConstraintSet dummy_pad(const ConstraintSet& set, int count) {
  if (count < 1) throw std::invalid_argument("dummy_pad: count must be >= 1");
  if (set.empty()) throw std::invalid_argument("dummy_pad: empty set");
  const std::vector<double> w = set.effective_alphas();
  double lambda = 0.0;
  for (int k = 0; k < set.size(); ++k)
    lambda = std::max(lambda, -w[k] * min_eigenvalue(set.constraints[k].matrix));
  if (lambda > 0.0) lambda *= 1.0 + 1e-12;

  ConstraintSet out = set;
  std::vector<double> alphas = w;
  for (int i = 0; i < count; ++i) {
    out.constraints.push_back({lambda * SymMatrix::identity(set.dim()), "pad" + std::to_string(i)});
    alphas.push_back(1.0);
  }
  out.alphas = std::move(alphas);
  out.validate();
  return out;
}

/// Pairs the two families by position into L^T blockdiag(B^i, C^i) L.
/// Alphas are absorbed by pre-scaling, so the outputs carry weight one.
inline ConstraintSet lift(const ConstraintSet& b, const ConstraintSet& c, const Matrix& l) {
  if (b.size() != c.size())
    throw std::invalid_argument("lift: cardinality mismatch (pad the smaller set with dummy_pad)");
  if (b.empty()) throw std::invalid_argument("lift: empty sets");
  const int nb = b.dim(), nc = c.dim();
  if (l.rows() != nb + nc) throw std::invalid_argument("lift: L must have dim(B) + dim(C) rows");
  if (l.cols() < 1) throw std::invalid_argument("lift: L must have at least one column");
  const std::vector<double> wb = b.effective_alphas();
  const std::vector<double> wc = c.effective_alphas();
  ConstraintSet out;
  for (int i = 0; i < b.size(); ++i) {
    SymMatrix block(nb + nc);
    const SymMatrix sb = wb[i] * b.constraints[i].matrix;
    const SymMatrix sc = wc[i] * c.constraints[i].matrix;
    for (int r = 0; r < nb; ++r)
      for (int s = 0; s <= r; ++s) block.at(r, s) = sb(r, s);
    for (int r = 0; r < nc; ++r)
      for (int s = 0; s <= r; ++s) block.at(nb + r, nb + s) = sc(r, s);
    out.constraints.push_back({block.congruence(l), "B" + std::to_string(i)});
  }
  out.alphas = std::vector<double>(out.constraints.size(), 1.0);
  out.validate();
  return out;
}

/// Shared-variable lift map [sqrt(lambda) I; sqrt(1-lambda) I]: both blocks
/// read the same coordinates, so lifting reduces to a convex combination.
inline Matrix lift_matrix_shared(double lambda, int np) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lift_matrix_shared: lambda in (0,1)");
  if (np < 1) throw std::invalid_argument("lift_matrix_shared: np >= 1");
  Matrix l(2 * np, np);
  for (int i = 0; i < np; ++i) {
    l(i, i) = std::sqrt(lambda);
    l(np + i, i) = std::sqrt(1.0 - lambda);
  }
  return l;
}

/// Splitting lift map: separate variable blocks u1, u2 with one shared
/// homogenizing coordinate z; lands in dimension np + lp - 1.
inline Matrix lift_matrix_split(double lambda, int np, int lp) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lift_matrix_split: lambda in (0,1)");
  if (np < 2 || lp < 2) throw std::invalid_argument("lift_matrix_split: block dims must be >= 2");
  const double sl = std::sqrt(lambda), sm = std::sqrt(1.0 - lambda);
  Matrix l(np + lp, np + lp - 1);
  for (int i = 0; i < np - 1; ++i) l(i, i) = sl;
  l(np - 1, np + lp - 2) = sl;
  for (int j = 0; j < lp - 1; ++j) l(np + j, np - 1 + j) = sm;
  l(np + lp - 1, np + lp - 2) = sm;
  return l;
}

/// Encodes A u = b as the single constraint -(Au - b)^T(Au - b) >= 0.
/// A has one equation per row: ell x (n-1), b in R^ell.
inline Constraint linear_equality(const Matrix& a, std::span<const double> b) {
  if (a.rows() != static_cast<int>(b.size()))
    throw std::invalid_argument("linear_equality: A rows must match len(b)");
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("linear_equality: empty system");
  const int n = a.cols() + 1;
  Matrix s(a.rows(), n);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
    s(i, n - 1) = -b[i];
  }
  Matrix g = s.transposed() * s;
  SymMatrix m = SymMatrix::symmetrized(g);
  m *= -1.0;
  return {std::move(m), "lineq"};
}

}  // namespace qcqpkit

#endif  // QCQPKIT_INSTANCES_HPP_
