#ifndef QCQPKIT_VERIFY_HPP_
#define QCQPKIT_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcqpkit/constraints.hpp"
#include "qcqpkit/instances.hpp"
#include "qcqpkit/symmat.hpp"

namespace qcqpkit {

/// A failed pair or member plus the offending value; `point` is filled by the
/// sampling falsifier. Witnesses replay: re-evaluating them reproduces the
/// violation.
struct ConditionWitness {
  int i = -1;
  int j = -1;
  double value = 0.0;
  std::vector<double> point;
};

struct ConditionReport {
  std::string condition;
  bool passed = false;
  std::vector<ConditionWitness> witnesses;
  double min_margin = std::numeric_limits<double>::infinity();
};

/// Every pairwise weighted sum alpha_i B^i + alpha_j B^j must be PSD.
/// Sufficient for exactness of the relaxation; the decisive corpus check.
inline ConditionReport verify_condition_d(const ConstraintSet& set, double psd_tol = kPsdTol) {
  set.validate();
  const std::vector<double> w = set.effective_alphas();
  ConditionReport rep;
  rep.condition = "D";
  rep.passed = true;
  for (int i = 0; i < set.size(); ++i) {
    for (int j = i + 1; j < set.size(); ++j) {
      const SymMatrix sum = w[i] * set.constraints[i].matrix + w[j] * set.constraints[j].matrix;
      const EigenDecomposition d = eig(sum);
      rep.min_margin = std::min(rep.min_margin, d.values.back());
      if (d.values.back() < -psd_tol * std::max(1.0, std::abs(d.values.front()))) {
        rep.passed = false;
        rep.witnesses.push_back({i, j, d.values.back(), {}});
      }
    }
  }
  return rep;
}

/// Relaxed pencil variant: each pair only needs SOME nonzero (alpha, beta)
/// with alpha A + beta B PSD. Scans `grid` directions on the unit circle and
/// always includes the set's stated weight direction, which covers pairs
/// whose PSD pencil is a single ray.
inline ConditionReport verify_condition_dprime(const ConstraintSet& set, int grid = 720,
                                               double psd_tol = kPsdTol) {
  if (grid < 3) throw std::invalid_argument("verify_condition_dprime: grid must be >= 3");
  set.validate();
  const std::vector<double> w = set.effective_alphas();
  ConditionReport rep;
  rep.condition = "Dprime";
  rep.passed = true;
  for (int i = 0; i < set.size(); ++i) {
    for (int j = i + 1; j < set.size(); ++j) {
      std::vector<std::pair<double, double>> candidates;
      candidates.reserve(grid + 2);
      const double wn = std::hypot(w[i], w[j]);
      candidates.emplace_back(w[i] / wn, w[j] / wn);
      candidates.emplace_back(std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0);
      for (int a = 0; a < grid; ++a) {
        const double phi = 2.0 * std::numbers::pi * a / grid;
        candidates.emplace_back(std::cos(phi), std::sin(phi));
      }
      bool found = false;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& [ca, cb] : candidates) {
        const SymMatrix sum = ca * set.constraints[i].matrix + cb * set.constraints[j].matrix;
        const EigenDecomposition d = eig(sum);
        const double margin = d.values.back() + psd_tol * std::max(1.0, std::abs(d.values.front()));
        best = std::max(best, d.values.back());
        if (margin >= 0.0) {
          found = true;
          break;
        }
      }
      rep.min_margin = std::min(rep.min_margin, best);
      if (!found) {
        rep.passed = false;
        rep.witnesses.push_back({i, j, best, {}});
      }
    }
  }
  return rep;
}

/// Every member must have a strict-violation region, i.e. no constraint
/// matrix is PSD. Vacuously true for the empty set.
inline ConditionReport verify_condition_cprime(const ConstraintSet& set, double psd_tol = kPsdTol) {
  set.validate();
  ConditionReport rep;
  rep.condition = "Cprime";
  rep.passed = true;
  for (int i = 0; i < set.size(); ++i) {
    const EigenDecomposition d = eig(set.constraints[i].matrix);
    rep.min_margin = std::min(rep.min_margin, d.values.back());
    if (d.values.back() >= -psd_tol * std::max(1.0, std::abs(d.values.front()))) {
      rep.passed = false;
      rep.witnesses.push_back({i, -1, d.values.back(), {}});
    }
  }
  return rep;
}

/// Axis-aligned sampling box in R^d.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box square(double a, double b) { return {{a, a}, {b, b}}; }

  int dim() const { return static_cast<int>(lo.size()); }

  void validate() const {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("Box: bad bounds");
    for (size_t k = 0; k < lo.size(); ++k)
      if (!(lo[k] < hi[k])) throw std::invalid_argument("Box: empty box");
  }
};

namespace detail {
inline double halton(unsigned long index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

inline constexpr unsigned kHaltonBases[] = {2, 3, 5, 7, 11, 13};
}  // namespace detail

/// Searches for a point in some A_< intersect B_<=; finding one refutes the
/// no-overlap condition. A pass means "no counterexample found", not a proof.
/// Samples a uniform grid topped up with a Halton fill; `seed` rotates the
/// Halton sequence so repeated runs can probe different points.
inline ConditionReport falsify_condition_bprime(const ConstraintSet& set, const Box& bbox, long samples,
                                                double strict_tol = 1e-7, unsigned seed = 0) {
  set.validate();
  bbox.validate();
  const int d = bbox.dim();
  if (!set.empty() && set.dim() != d + 1)
    throw std::invalid_argument("falsify_condition_bprime: box dimension mismatch");
  if (samples < 1) throw std::invalid_argument("falsify_condition_bprime: samples must be >= 1");
  if (d > static_cast<int>(std::size(detail::kHaltonBases)))
    throw std::invalid_argument("falsify_condition_bprime: box dimension too large");

  ConditionReport rep;
  rep.condition = "Bprime-falsifier";
  rep.passed = true;
  if (set.size() < 2) return rep;  // no distinct pairs

  const int m = set.size();
  std::vector<double> values(m);
  std::vector<double> point(d);

  const long grid_per_axis = std::max<long>(2, static_cast<long>(std::floor(std::pow(
                                                   static_cast<double>(samples) / 2.0, 1.0 / d))));
  long grid_total = 1;
  for (int k = 0; k < d; ++k) grid_total *= grid_per_axis;
  const long fill = std::max<long>(0, samples - grid_total);

  auto test_point = [&](std::span<const double> u) {
    for (int k = 0; k < m; ++k) values[k] = evaluate(set.constraints[k], u);
    for (int a = 0; a < m; ++a) {
      if (values[a] >= -strict_tol) continue;  // needs strict membership in A_<
      for (int b = 0; b < m; ++b) {
        if (b == a || values[b] > 0.0) continue;
        rep.passed = false;
        rep.witnesses.push_back({a, b, values[a], std::vector<double>(u.begin(), u.end())});
        return true;
      }
    }
    return false;
  };

  for (long idx = 0; idx < grid_total; ++idx) {
    long rem = idx;
    for (int k = 0; k < d; ++k) {
      const long cell = rem % grid_per_axis;
      rem /= grid_per_axis;
      point[k] = bbox.lo[k] + (bbox.hi[k] - bbox.lo[k]) * static_cast<double>(cell) /
                                  static_cast<double>(grid_per_axis - 1);
    }
    if (test_point(point)) return rep;
  }
  for (long idx = 0; idx < fill; ++idx) {
    for (int k = 0; k < d; ++k) {
      const double t = detail::halton(static_cast<unsigned long>(idx) + 1 + seed, detail::kHaltonBases[k]);
      point[k] = bbox.lo[k] + (bbox.hi[k] - bbox.lo[k]) * t;
    }
    if (test_point(point)) return rep;
  }
  return rep;
}

struct BruteForceResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> argmin;
  bool found = false;
};

/// Grid-search oracle for the 2-D problem value: scans a coarse grid over the
/// box restricted to feasible points, then refines around the best cells.
/// Independent of the SDP path; used to certify relaxation exactness.
inline BruteForceResult brute_force_2d(const QcqpInstance& inst, const Box& bbox, int coarse = 401,
                                       int refine_levels = 3, double feas_tol = kFeasTol) {
  inst.validate();
  bbox.validate();
  if (inst.n != 3 || bbox.dim() != 2) throw std::invalid_argument("brute_force_2d: needs n = 3 and a 2-D box");
  if (coarse < 51) throw std::invalid_argument("brute_force_2d: coarse grid must be >= 51");

  const Constraint objective{inst.Q, "Q"};
  struct Cell {
    double value;
    double x, y;
  };
  constexpr int kKeep = 50;

  std::vector<Cell> best;
  auto consider = [&best](double v, double x, double y) {
    if (best.size() < kKeep) {
      best.push_back({v, x, y});
      std::push_heap(best.begin(), best.end(), [](const Cell& a, const Cell& b) { return a.value < b.value; });
      return;
    }
    if (v < best.front().value) {
      std::pop_heap(best.begin(), best.end(), [](const Cell& a, const Cell& b) { return a.value < b.value; });
      best.back() = {v, x, y};
      std::push_heap(best.begin(), best.end(), [](const Cell& a, const Cell& b) { return a.value < b.value; });
    }
  };

  const double hx0 = (bbox.hi[0] - bbox.lo[0]) / (coarse - 1);
  const double hy0 = (bbox.hi[1] - bbox.lo[1]) / (coarse - 1);
  double u[2];
  for (int i = 0; i < coarse; ++i) {
    u[0] = bbox.lo[0] + i * hx0;
    for (int j = 0; j < coarse; ++j) {
      u[1] = bbox.lo[1] + j * hy0;
      if (!is_feasible(inst.set, u, feas_tol)) continue;
      consider(evaluate(objective, u), u[0], u[1]);
    }
  }

  double hx = hx0, hy = hy0;
  constexpr int kLocal = 21;  // spacing shrinks by 2h / (kLocal - 1) = h/10 per level
  for (int level = 0; level < refine_levels; ++level) {
    const std::vector<Cell> seeds = best;
    for (const Cell& s : seeds) {
      for (int i = 0; i < kLocal; ++i) {
        u[0] = s.x - hx + 2.0 * hx * i / (kLocal - 1);
        for (int j = 0; j < kLocal; ++j) {
          u[1] = s.y - hy + 2.0 * hy * j / (kLocal - 1);
          if (!is_feasible(inst.set, u, feas_tol)) continue;
          consider(evaluate(objective, u), u[0], u[1]);
        }
      }
    }
    hx /= 10.0;
    hy /= 10.0;
  }

  BruteForceResult out;
  for (const Cell& c : best) {
    if (c.value < out.value) {
      out.value = c.value;
      out.argmin = {c.x, c.y};
      out.found = true;
    }
  }
  return out;
}

}  // namespace qcqpkit

#endif  // QCQPKIT_VERIFY_HPP_
