#ifndef QCQPKIT_CONSTRAINTS_HPP_
#define QCQPKIT_CONSTRAINTS_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcqpkit/symmat.hpp"

namespace qcqpkit {

inline constexpr double kFeasTol = 1e-8;

/// One quadratic constraint (u;1)^T B (u;1) >= 0. The region where the form
/// is nonpositive is the restricted zone the constraint excludes.
struct Constraint {
  SymMatrix matrix;
  std::string label;
};

/// Nonsingular 3x3 map M acting on homogeneous coordinates (v;1) -> (u;1).
/// Composition of the scaling/rotation/translation builders keeps the last
/// row at (0,0,1), so the action stays affine on u.
class Transform3 {
 public:
  explicit Transform3(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != 3 || m_.cols() != 3) throw std::invalid_argument("Transform3: must be 3x3");
    const double det = m_(0, 0) * (m_(1, 1) * m_(2, 2) - m_(1, 2) * m_(2, 1)) -
                       m_(0, 1) * (m_(1, 0) * m_(2, 2) - m_(1, 2) * m_(2, 0)) +
                       m_(0, 2) * (m_(1, 0) * m_(2, 1) - m_(1, 1) * m_(2, 0));
    if (std::abs(det) <= 1e-12) throw std::invalid_argument("Transform3: singular matrix");
  }

  static Transform3 identity() { return Transform3(Matrix::identity(3)); }

  const Matrix& matrix() const { return m_; }

  /// Image (u1, u2) of a point v under the homogeneous action.
  std::vector<double> map_point(std::span<const double> v) const {
    if (v.size() != 2) throw std::invalid_argument("Transform3::map_point: expects a 2-D point");
    const std::vector<double> h = m_.apply(std::vector<double>{v[0], v[1], 1.0});
    if (std::abs(h[2]) < 1e-14) throw std::invalid_argument("Transform3::map_point: point at infinity");
    return {h[0] / h[2], h[1] / h[2]};
  }

  friend Transform3 operator*(const Transform3& a, const Transform3& b) {
    return Transform3(a.m_ * b.m_);
  }

 private:
  Matrix m_;
};

// Basic constraints. The stored matrices match the displayed forms exactly;
// regions are stated in comments for the 2-D point u.

/// u1^2 + u2^2 - r^2 >= 0: excludes the open disk of radius r at the origin.
inline Constraint disk(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("disk: requires r > 0");
  return {SymMatrix::from_rows(3, {1, 0, 0, 0, 1, 0, 0, 0, -r * r}), "disk"};
}

/// -u1^2 + u2^2 + r^2 >= 0: excludes the two hyperbola branches.
inline Constraint hyperbola(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("hyperbola: requires r >= 0");
  return {SymMatrix::from_rows(3, {-1, 0, 0, 0, 1, 0, 0, 0, r * r}), "hyperbola"};
}

/// -u1 + u2^2 + r >= 0: excludes the inside of a rightward parabola.
inline Constraint parabola(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("parabola: requires r >= 0");
  return {SymMatrix::from_rows(3, {0, 0, -0.5, 0, 1, 0, -0.5, 0, r}), "parabola"};
}

/// u1 - r >= 0: a half-plane.
inline Constraint line(double r) {
  return {SymMatrix::from_rows(3, {0, 0, 0.5, 0, 0, 0, 0.5, 0, -r}), "line"};
}

/// diag(1/s1, 1/s2, 1); sends u to v = (s1 u1, s2 u2).
inline Transform3 scaling(double s1, double s2) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw std::invalid_argument("scaling: factors must be > 0");
  Matrix m = Matrix::identity(3);
  m(0, 0) = 1.0 / s1;
  m(1, 1) = 1.0 / s2;
  return Transform3(std::move(m));
}

/// Sends u to v = u rotated by theta.
inline Transform3 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Transform3(Matrix(3, 3, {c, s, 0, -s, c, 0, 0, 0, 1}));
}

/// Sends u to v = u + p.
inline Transform3 translation(double p1, double p2) {
  return Transform3(Matrix(3, 3, {1, 0, -p1, 0, 1, -p2, 0, 0, 1}));
}

/// M^T B M, re-symmetrized to remove round-off drift. Changing the order of
/// composed transforms changes the constraint.
inline Constraint conjugate(const Constraint& b, const Transform3& m) {
  if (b.matrix.dim() != 3) throw std::invalid_argument("conjugate: constraint must be 3x3");
  return {SymMatrix::symmetrized(m.matrix().transposed() * b.matrix.to_dense() * m.matrix()), b.label};
}

/// (u;1)^T B (u;1).
inline double evaluate(const Constraint& b, std::span<const double> u) {
  if (static_cast<int>(u.size()) != b.matrix.dim() - 1)
    throw std::invalid_argument("evaluate: point dimension mismatch");
  std::vector<double> h(u.begin(), u.end());
  h.push_back(1.0);
  return b.matrix.quad(h);
}

/// Ordered constraint family with optional positive weights.
struct ConstraintSet {
  std::vector<Constraint> constraints;
  std::optional<std::vector<double>> alphas;
  std::vector<std::string> notes;

  int size() const { return static_cast<int>(constraints.size()); }
  bool empty() const { return constraints.empty(); }

  int dim() const {
    if (constraints.empty()) throw std::invalid_argument("ConstraintSet::dim: empty set");
    return constraints.front().matrix.dim();
  }

  void validate() const {
    for (const Constraint& c : constraints) {
      if (c.matrix.dim() != constraints.front().matrix.dim())
        throw std::invalid_argument("ConstraintSet: mixed dimensions");
      c.matrix.check_finite();
    }
    if (alphas) {
      if (alphas->size() != constraints.size())
        throw std::invalid_argument("ConstraintSet: alphas length mismatch");
      for (double a : *alphas)
        if (!(a > 0.0)) throw std::invalid_argument("ConstraintSet: alphas must be > 0");
    }
  }

  std::vector<double> effective_alphas() const {
    if (alphas) return *alphas;
    return std::vector<double>(constraints.size(), 1.0);
  }
};

/// True iff every constraint evaluates >= -feas_tol at u. Boundaries count
/// as feasible; the tolerance is one-sided outward.
inline bool is_feasible(const ConstraintSet& set, std::span<const double> u, double feas_tol = kFeasTol) {
  for (const Constraint& c : set.constraints) {
    if (evaluate(c, u) < -feas_tol) return false;
  }
  return true;
}

}  // namespace qcqpkit

#endif  // QCQPKIT_CONSTRAINTS_HPP_
