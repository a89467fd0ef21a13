#ifndef QCQPKIT_SYMMAT_HPP_
#define QCQPKIT_SYMMAT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcqpkit {

inline constexpr double kPsdTol = 1e-9;
inline constexpr double kRankTol = 1e-8;

/// Dense row-major rectangular matrix. Used for eigenvector bases,
/// affine transforms and lift maps; the symmetric carrier is SymMatrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }
  Matrix(int rows, int cols, std::initializer_list<double> entries) : Matrix(rows, cols) {
    if (static_cast<int>(entries.size()) != rows * cols)
      throw std::invalid_argument("Matrix: entry count mismatch");
    std::copy(entries.begin(), entries.end(), a_.begin());
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix::operator*: dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
      }
    return out;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Dense real symmetric n x n matrix stored as the row-major lower triangle.
/// Logically symmetric by construction; all entries finite.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(tri_size(n), 0.0) {
    if (n < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
  }

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static SymMatrix diag(std::span<const double> d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[i];
    m.check_finite();
    return m;
  }
  static SymMatrix diag(std::initializer_list<double> d) {
    return diag(std::span<const double>(d.begin(), d.size()));
  }

  /// Builds from full row-major entries; requires exact symmetry.
  static SymMatrix from_rows(int n, std::initializer_list<double> entries) {
    if (static_cast<int>(entries.size()) != n * n)
      throw std::invalid_argument("SymMatrix::from_rows: entry count mismatch");
    const double* e = entries.begin();
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        if (e[i * n + j] != e[j * n + i])
          throw std::invalid_argument("SymMatrix::from_rows: not symmetric");
        m.at(i, j) = e[i * n + j];
      }
    m.check_finite();
    return m;
  }

  /// Builds from a row-major lower triangle (n(n+1)/2 values).
  static SymMatrix from_lower(int n, std::span<const double> lower) {
    if (lower.size() != tri_size(n)) throw std::invalid_argument("SymMatrix::from_lower: size mismatch");
    SymMatrix m(n);
    std::copy(lower.begin(), lower.end(), m.a_.begin());
    m.check_finite();
    return m;
  }

  /// Symmetrizes an arbitrary square matrix as (A + A^T)/2.
  static SymMatrix symmetrized(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix::symmetrized: not square");
    SymMatrix m(a.rows());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j <= i; ++j) m.at(i, j) = 0.5 * (a(i, j) + a(j, i));
    m.check_finite();
    return m;
  }

  /// x x^T for x in R^n.
  static SymMatrix outer(std::span<const double> x) {
    SymMatrix m(static_cast<int>(x.size()));
    for (int i = 0; i < m.n_; ++i)
      for (int j = 0; j <= i; ++j) m.at(i, j) = x[i] * x[j];
    m.check_finite();
    return m;
  }

  int dim() const { return n_; }

  double operator()(int i, int j) const { return i >= j ? a_[idx(i, j)] : a_[idx(j, i)]; }
  /// Mutable access to the stored lower-triangle entry (i >= j).
  double& at(int i, int j) {
    if (i < j) std::swap(i, j);
    return a_[idx(i, j)];
  }

  const std::vector<double>& lower() const { return a_; }

  SymMatrix& operator+=(const SymMatrix& rhs) {
    require_same_dim(rhs);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& rhs) {
    require_same_dim(rhs);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
    return *this;
  }
  SymMatrix& operator*=(double c) {
    for (double& v : a_) v *= c;
    return *this;
  }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }
  friend SymMatrix operator*(SymMatrix a, double c) { return a *= c; }

  bool operator==(const SymMatrix& rhs) const { return n_ == rhs.n_ && a_ == rhs.a_; }

  double frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = a_[idx(i, j)];
        s += (i == j ? 1.0 : 2.0) * v * v;
      }
    return std::sqrt(s);
  }

  double trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += a_[idx(i, i)];
    return s;
  }

  Matrix to_dense() const {
    Matrix d(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) d(i, j) = (*this)(i, j);
    return d;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("SymMatrix::apply: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  double quad(std::span<const double> x) const {
    const std::vector<double> y = apply(x);
    return std::inner_product(y.begin(), y.end(), x.begin(), 0.0);
  }

  /// Congruence L^T A L for an n x k map L; the result lives in S^k.
  SymMatrix congruence(const Matrix& l) const {
    if (l.rows() != n_) throw std::invalid_argument("SymMatrix::congruence: dimension mismatch");
    const Matrix al = to_dense() * l;
    const int k = l.cols();
    SymMatrix out(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (int r = 0; r < n_; ++r) s += l(r, i) * al(r, j);
        out.at(i, j) = s;
      }
    out.check_finite();
    return out;
  }

  void check_finite() const {
    for (double v : a_) {
      if (!std::isfinite(v)) throw std::invalid_argument("SymMatrix: non-finite entry");
    }
  }

 private:
  static size_t tri_size(int n) { return static_cast<size_t>(n) * (n + 1) / 2; }
  static size_t idx(int i, int j) { return static_cast<size_t>(i) * (i + 1) / 2 + j; }
  void require_same_dim(const SymMatrix& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
  }

  int n_ = 0;
  std::vector<double> a_;
};

/// Trace inner product sum_ij A_ij X_ij.
inline double inner(const SymMatrix& a, const SymMatrix& x) {
  if (a.dim() != x.dim()) throw std::invalid_argument("inner: dimension mismatch");
  const std::vector<double>& la = a.lower();
  const std::vector<double>& lx = x.lower();
  double diag = 0.0, off = 0.0;
  size_t k = 0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < i; ++j, ++k) off += la[k] * lx[k];
    diag += la[k] * lx[k];
    ++k;
  }
  return diag + 2.0 * off;
}

/// Eigenvalues sorted descending with orthonormal eigenvectors as columns.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi eigensolver. Accurate to machine precision at the
/// dimensions this library targets (n <= ~64); capped at 100 sweeps.
inline EigenDecomposition eig(const SymMatrix& a) {
  const int n = a.dim();
  Matrix w = a.to_dense();
  Matrix v = Matrix::identity(n);

  const double scale = std::max(1.0, a.frobenius_norm());
  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += w(p, q) * w(p, q);
    if (std::sqrt(off) <= 1e-14 * scale) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = w(p, p), aqq = w(q, q);
        w(p, p) = app - t * apq;
        w(q, q) = aqq + t * apq;
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = w(i, p), aiq = w(i, q);
            w(i, p) = c * aip - s * aiq;
            w(p, i) = w(i, p);
            w(i, q) = s * aip + c * aiq;
            w(q, i) = w(i, q);
          }
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (!converged) {
    // One last check: tiny matrices may hit exact zeros without the early test.
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += w(p, q) * w(p, q);
    if (std::sqrt(off) > 1e-12 * scale) throw std::runtime_error("eig: Jacobi sweeps did not converge");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w(i, i) > w(j, j); });

  EigenDecomposition d;
  d.values.resize(n);
  d.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    d.values[k] = w(order[k], order[k]);
    for (int i = 0; i < n; ++i) d.vectors(i, k) = v(i, order[k]);
  }
  return d;
}

inline double min_eigenvalue(const SymMatrix& a) { return eig(a).values.back(); }

/// Membership test for the PSD cone: lambda_min >= -tol * max(1, |lambda_max|).
inline bool is_psd(const SymMatrix& a, double tol = kPsdTol) {
  if (tol < 0.0) throw std::invalid_argument("is_psd: tolerance must be >= 0");
  const EigenDecomposition d = eig(a);
  return d.values.back() >= -tol * std::max(1.0, std::abs(d.values.front()));
}

/// Factors x_i with sum_i x_i x_i^T equal to the source PSD matrix.
struct Rank1Decomposition {
  std::vector<std::vector<double>> factors;

  int count() const { return static_cast<int>(factors.size()); }

  SymMatrix sum(int n) const {
    SymMatrix s(n);
    for (const auto& x : factors) s += SymMatrix::outer(x);
    return s;
  }
};

/// Splits a PSD matrix into sqrt(lambda_i) v_i factors for eigenvalues above
/// rank_tol * lambda_max. Throws if X is negative beyond tolerance.
inline Rank1Decomposition rank1_factors(const SymMatrix& x, double rank_tol = kRankTol) {
  const EigenDecomposition d = eig(x);
  const double lmax = d.values.front();
  const double lmin = d.values.back();
  if (lmin < -rank_tol * std::max(1.0, std::abs(lmax)))
    throw std::invalid_argument("rank1_factors: matrix is not PSD within tolerance");
  Rank1Decomposition out;
  const double cut = rank_tol * std::max(lmax, 0.0);
  for (int k = 0; k < x.dim(); ++k) {
    if (d.values[k] <= cut) continue;
    std::vector<double> f(x.dim());
    const double w = std::sqrt(d.values[k]);
    for (int i = 0; i < x.dim(); ++i) f[i] = w * d.vectors(i, k);
    out.factors.push_back(std::move(f));
  }
  return out;
}

}  // namespace qcqpkit

#endif  // QCQPKIT_SYMMAT_HPP_
