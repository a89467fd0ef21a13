#ifndef QCQPKIT_RENDER_HPP_
#define QCQPKIT_RENDER_HPP_

#include <array>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcqpkit/constraints.hpp"
#include "qcqpkit/verify.hpp"

namespace qcqpkit {

/// How to draw a 2-D family: restricted zones (form <= 0) get a translucent
/// fill, the feasible remainder stays unshaded.
struct RenderSpec {
  Box bbox = Box::square(-3.0, 3.0);
  int resolution = 400;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#2f7ed8", "#c23531", "#2ca02c", "#9467bd", "#e08214",
                                           "#00a2a2", "#8b5e3c", "#d4589b", "#6b6ecf", "#637939"};

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// Number of 4-connected components of the sampled restricted zone. Used to
/// check that the drawn topology is stable under resolution changes.
inline int region_component_count(const Constraint& c, const Box& bbox, int resolution) {
  bbox.validate();
  if (bbox.dim() != 2 || c.matrix.dim() != 3)
    throw std::invalid_argument("region_component_count: needs a 2-D constraint");
  if (resolution < 8) throw std::invalid_argument("region_component_count: resolution too small");
  const int nx = resolution + 1;
  std::vector<char> inside(static_cast<size_t>(nx) * nx);
  double u[2];
  for (int i = 0; i < nx; ++i) {
    u[0] = bbox.lo[0] + (bbox.hi[0] - bbox.lo[0]) * i / resolution;
    for (int j = 0; j < nx; ++j) {
      u[1] = bbox.lo[1] + (bbox.hi[1] - bbox.lo[1]) * j / resolution;
      inside[static_cast<size_t>(i) * nx + j] = evaluate(c, u) <= 0.0 ? 1 : 0;
    }
  }
  detail::DisjointSet dsu(nx * nx);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) {
      if (!inside[static_cast<size_t>(i) * nx + j]) continue;
      if (i + 1 < nx && inside[static_cast<size_t>(i + 1) * nx + j]) dsu.unite(i * nx + j, (i + 1) * nx + j);
      if (j + 1 < nx && inside[static_cast<size_t>(i) * nx + j + 1]) dsu.unite(i * nx + j, i * nx + j + 1);
    }
  std::vector<char> seen(static_cast<size_t>(nx) * nx, 0);
  int count = 0;
  for (int k = 0; k < nx * nx; ++k) {
    if (!inside[k]) continue;
    const int root = dsu.find(k);
    if (!seen[root]) {
      seen[root] = 1;
      ++count;
    }
  }
  return count;
}

/// Writes an SVG 1.1 drawing: one translucent layer per constraint shading
/// its restricted zone (marching squares on the sample grid, fill on the
/// <= side, stroked zero contour), plus axes and a legend.
inline void render_svg(const ConstraintSet& set, const RenderSpec& spec, std::ostream& os) {
  spec.bbox.validate();
  if (spec.bbox.dim() != 2) throw std::invalid_argument("render_svg: needs a 2-D box");
  if (!set.empty() && set.dim() != 3) throw std::invalid_argument("render_svg: constraints must be 3x3");
  if (spec.resolution < 64) throw std::invalid_argument("render_svg: resolution must be >= 64");
  set.validate();

  constexpr double kCanvas = 640.0, kMargin = 40.0;
  const double plot = kCanvas - 2.0 * kMargin;
  const double x0 = spec.bbox.lo[0], x1 = spec.bbox.hi[0];
  const double y0 = spec.bbox.lo[1], y1 = spec.bbox.hi[1];
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * plot; };
  auto py = [&](double y) { return kMargin + (y1 - y) / (y1 - y0) * plot; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas << "\" height=\""
     << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n";

  const int res = spec.resolution;
  const int nx = res + 1;
  std::vector<double> vals(static_cast<size_t>(nx) * nx);
  std::vector<double> xs(nx), ys(nx);
  for (int i = 0; i < nx; ++i) xs[i] = x0 + (x1 - x0) * i / res;
  for (int j = 0; j < nx; ++j) ys[j] = y0 + (y1 - y0) * j / res;

  for (int c = 0; c < set.size(); ++c) {
    const Constraint& con = set.constraints[c];
    double u[2];
    for (int i = 0; i < nx; ++i) {
      u[0] = xs[i];
      for (int j = 0; j < nx; ++j) {
        u[1] = ys[j];
        vals[static_cast<size_t>(i) * nx + j] = evaluate(con, u);
      }
    }
    auto value_at = [&](int i, int j) { return vals[static_cast<size_t>(i) * nx + j]; };
    // Root of the linear model on a grid edge.
    auto cross = [](double a, double b) { return a / (a - b); };

    std::string fill_path, contour_path;
    auto emit_run = [&](int i0, int i1, int j) {  // cells [i0, i1) x [j, j+1), fully inside
      fill_path += "M" + detail::fmt2(px(xs[i0])) + " " + detail::fmt2(py(ys[j])) + "L" +
                   detail::fmt2(px(xs[i1])) + " " + detail::fmt2(py(ys[j])) + "L" +
                   detail::fmt2(px(xs[i1])) + " " + detail::fmt2(py(ys[j + 1])) + "L" +
                   detail::fmt2(px(xs[i0])) + " " + detail::fmt2(py(ys[j + 1])) + "Z";
    };
    for (int j = 0; j < res; ++j) {
      int run_start = -1;
      for (int i = 0; i < res; ++i) {
        const std::array<double, 4> v = {value_at(i, j), value_at(i + 1, j), value_at(i + 1, j + 1),
                                         value_at(i, j + 1)};
        int mask = 0;
        for (int k = 0; k < 4; ++k)
          if (v[k] <= 0.0) mask |= 1 << k;
        if (mask == 15) {  // interior cells merge into one row-run rectangle
          if (run_start < 0) run_start = i;
          continue;
        }
        if (run_start >= 0) {
          emit_run(run_start, i, j);
          run_start = -1;
        }
        if (mask == 0) continue;

        // Walk the cell boundary, keeping inside corners and inserting the
        // zero crossings; this clips the cell to the <= side.
        const std::array<std::array<double, 2>, 4> corner = {{{xs[i], ys[j]},
                                                              {xs[i + 1], ys[j]},
                                                              {xs[i + 1], ys[j + 1]},
                                                              {xs[i], ys[j + 1]}}};
        std::vector<std::array<double, 2>> poly;
        std::vector<std::array<double, 2>> crossings;
        for (int k = 0; k < 4; ++k) {
          const int k2 = (k + 1) & 3;
          if (v[k] <= 0.0) poly.push_back(corner[k]);
          if ((v[k] <= 0.0) != (v[k2] <= 0.0)) {
            const double t = cross(v[k], v[k2]);
            std::array<double, 2> p = {corner[k][0] + t * (corner[k2][0] - corner[k][0]),
                                       corner[k][1] + t * (corner[k2][1] - corner[k][1])};
            poly.push_back(p);
            crossings.push_back(p);
          }
        }
        if (poly.size() >= 3) {
          fill_path += "M";
          for (size_t k = 0; k < poly.size(); ++k) {
            fill_path += (k ? "L" : "") + detail::fmt2(px(poly[k][0])) + " " + detail::fmt2(py(poly[k][1]));
          }
          fill_path += "Z";
        }
        for (size_t k = 0; k + 1 < crossings.size(); k += 2) {
          contour_path += "M" + detail::fmt2(px(crossings[k][0])) + " " + detail::fmt2(py(crossings[k][1])) +
                          "L" + detail::fmt2(px(crossings[k + 1][0])) + " " +
                          detail::fmt2(py(crossings[k + 1][1]));
        }
      }
      if (run_start >= 0) emit_run(run_start, res, j);
    }

    const char* color = detail::kPalette[c % std::size(detail::kPalette)];
    os << "<g id=\"zone-" << c << "\" data-label=\"" << con.label << "\">\n";
    if (!fill_path.empty())
      os << "  <path d=\"" << fill_path << "\" fill=\"" << color << "\" fill-opacity=\"0.22\" stroke=\"none\"/>\n";
    if (!contour_path.empty())
      os << "  <path d=\"" << contour_path << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.2\"/>\n";
    os << "</g>\n";
  }

  // Frame, axes through the origin when visible, and corner labels.
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot << "\" height=\"" << plot
     << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  if (x0 < 0.0 && x1 > 0.0)
    os << "<line x1=\"" << detail::fmt2(px(0)) << "\" y1=\"" << kMargin << "\" x2=\"" << detail::fmt2(px(0))
       << "\" y2=\"" << kMargin + plot << "\" stroke=\"#888\" stroke-width=\"0.8\"/>\n";
  if (y0 < 0.0 && y1 > 0.0)
    os << "<line x1=\"" << kMargin << "\" y1=\"" << detail::fmt2(py(0)) << "\" x2=\"" << kMargin + plot
       << "\" y2=\"" << detail::fmt2(py(0)) << "\" stroke=\"#888\" stroke-width=\"0.8\"/>\n";
  os << "<text x=\"" << kMargin << "\" y=\"" << kCanvas - 12 << "\" font-size=\"12\" fill=\"#333\">u1: ["
     << x0 << ", " << x1 << "]</text>\n"
     << "<text x=\"" << kMargin << "\" y=\"" << 24 << "\" font-size=\"12\" fill=\"#333\">u2: [" << y0 << ", "
     << y1 << "]</text>\n";
  for (int c = 0; c < set.size(); ++c) {
    const double ly = kMargin + 16.0 * c + 14.0;
    os << "<rect x=\"" << kCanvas - kMargin - 110 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
       << detail::kPalette[c % std::size(detail::kPalette)] << "\" fill-opacity=\"0.6\"/>\n"
       << "<text x=\"" << kCanvas - kMargin - 96 << "\" y=\"" << ly << "\" font-size=\"11\" fill=\"#333\">"
       << set.constraints[c].label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace qcqpkit

#endif  // QCQPKIT_RENDER_HPP_
