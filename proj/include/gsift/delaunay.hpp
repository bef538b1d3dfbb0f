#pragma once

#include <array>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "gsift/common.hpp"
#include "gsift/graph.hpp"

namespace gsift {
namespace delaunay_detail {

// Orientation of (a,b,c): > 0 counter-clockwise, 0 collinear within the
// floating-point error bound of the determinant.
inline int orient2d(const double* pa, const double* pb, const double* pc) {
  const double detl = (pa[0] - pc[0]) * (pb[1] - pc[1]);
  const double detr = (pa[1] - pc[1]) * (pb[0] - pc[0]);
  const double det = detl - detr;
  const double bound =
      3.3306690738754716e-16 * (std::abs(detl) + std::abs(detr));
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return 0;
}

// In-circle test: > 0 when pd lies strictly inside the circumcircle of the
// counter-clockwise triangle (pa,pb,pc); 0 is a tie within the error bound.
inline int incircle(const double* pa, const double* pb, const double* pc,
                    const double* pd) {
  const double adx = pa[0] - pd[0], ady = pa[1] - pd[1];
  const double bdx = pb[0] - pd[0], bdy = pb[1] - pd[1];
  const double cdx = pc[0] - pd[0], cdy = pc[1] - pd[1];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = 1.1102230246251565e-15 * permanent;
  if (det > bound) return 1;
  if (det < -bound) return -1;
  return 0;
}

}  // namespace delaunay_detail

/// Delaunay triangulation by incremental insertion with a super triangle
/// (Bowyer-Watson). Triangles still touching a super corner act as
/// unbounded: the circumcircle test against them degenerates to a
/// side-of-edge test, so hull growth does not depend on where the super
/// corners sit. Cocircular ties resolve in favour of the existing triangle;
/// insertion order (point index order) makes the result deterministic.
inline std::vector<std::array<int, 3>> delaunay_triangulate(
    const Matrix& points) {
  using namespace delaunay_detail;
  const int n = static_cast<int>(points.rows());
  if (n < 3) throw invalid_input("delaunay needs at least 3 points");
  if (points.cols() != 2) throw invalid_input("points must be 2D");
  if (!points.allFinite()) throw invalid_input("points must be finite");
  std::vector<std::array<double, 2>> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = {points(i, 0), points(i, 1)};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (pts[i] == pts[j])
        throw invalid_input("duplicate points " + std::to_string(i) + " and " +
                            std::to_string(j));

  {
    bool non_collinear = false;
    for (int k = 2; k < n && !non_collinear; ++k)
      non_collinear =
          orient2d(pts[0].data(), pts[1].data(), pts[k].data()) != 0;
    if (!non_collinear)
      throw numeric_failure("triangulation failed: all points collinear");
  }

  // Super corners at indices -1,-2,-3, far outside the data.
  const double cx = 0.5 * (points.col(0).maxCoeff() + points.col(0).minCoeff());
  const double cy = 0.5 * (points.col(1).maxCoeff() + points.col(1).minCoeff());
  double radius = 0.0;
  for (int i = 0; i < n; ++i)
    radius = std::max(radius, std::hypot(points(i, 0) - cx, points(i, 1) - cy));
  radius = std::max(radius, 1.0) * 64.0;
  std::array<std::array<double, 2>, 3> super{};
  for (int k = 0; k < 3; ++k) {
    const double a = pi / 2 + k * two_pi / 3;
    super[k] = {cx + radius * std::cos(a), cy + radius * std::sin(a)};
  }

  auto coords = [&](int v) -> const double* {
    return v >= 0 ? pts[v].data() : super[-v - 1].data();
  };

  struct Tri {
    int a, b, c;
  };

  auto invalidated = [&](const Tri& t, int p) {
    std::array<int, 3> vs{t.a, t.b, t.c};
    const int supers =
        (vs[0] < 0 ? 1 : 0) + (vs[1] < 0 ? 1 : 0) + (vs[2] < 0 ? 1 : 0);
    if (supers == 0)
      return incircle(coords(t.a), coords(t.b), coords(t.c), coords(p)) > 0;
    if (supers == 1) {
      // Rotate the super corner to the back, preserving cyclic order; the
      // circumcircle limit is the open half plane left of the finite edge.
      while (vs[2] >= 0) {
        const int tmp = vs[0];
        vs[0] = vs[1];
        vs[1] = vs[2];
        vs[2] = tmp;
      }
      return orient2d(coords(vs[0]), coords(vs[1]), coords(p)) > 0;
    }
    if (supers == 2)
      return incircle(coords(t.a), coords(t.b), coords(t.c), coords(p)) > 0;
    return true;  // initial super triangle contains every input point
  };

  std::vector<Tri> tris;
  tris.push_back({-1, -2, -3});
  if (orient2d(coords(-1), coords(-2), coords(-3)) < 0) tris.back() = {-1, -3, -2};

  std::vector<Tri> bad, keep;
  for (int p = 0; p < n; ++p) {
    bad.clear();
    keep.clear();
    for (const auto& t : tris) (invalidated(t, p) ? bad : keep).push_back(t);
    if (bad.empty())
      throw numeric_failure("delaunay insertion failed at point " +
                            std::to_string(p));

    // Cavity boundary: edges appearing in exactly one invalidated triangle,
    // kept in that triangle's orientation.
    std::set<std::pair<int, int>> odd;
    auto toggle = [&](int u, int v) {
      const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
      if (!odd.erase(key)) odd.insert(key);
    };
    for (const auto& t : bad) {
      toggle(t.a, t.b);
      toggle(t.b, t.c);
      toggle(t.c, t.a);
    }
    tris = keep;
    for (const auto& t : bad) {
      const std::array<std::pair<int, int>, 3> es{
          std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
      for (auto [u, v] : es) {
        if (!odd.count({std::min(u, v), std::max(u, v)})) continue;
        Tri nt{u, v, p};
        if (orient2d(coords(nt.a), coords(nt.b), coords(nt.c)) < 0)
          std::swap(nt.a, nt.b);
        tris.push_back(nt);
      }
    }
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris)
    if (t.a >= 0 && t.b >= 0 && t.c >= 0) out.push_back({t.a, t.b, t.c});
  if (out.empty())
    throw numeric_failure("triangulation failed: no finite triangles");
  return out;
}

/// Graph over the Delaunay edges, weighted by reciprocal Euclidean distance.
inline Graph build_delaunay_graph(const Matrix& points) {
  const auto tris = delaunay_triangulate(points);
  std::set<std::pair<int, int>> pairs;
  for (const auto& t : tris) {
    pairs.insert({std::min(t[0], t[1]), std::max(t[0], t[1])});
    pairs.insert({std::min(t[1], t[2]), std::max(t[1], t[2])});
    pairs.insert({std::min(t[2], t[0]), std::max(t[2], t[0])});
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double d =
        std::hypot(points(i, 0) - points(j, 0), points(i, 1) - points(j, 1));
    edges.push_back({i, j, 1.0 / d});
  }
  const int n = static_cast<int>(points.rows());
  return make_graph(n, std::move(edges), EmbeddingKind::plane_points, {},
                    points);
}

}  // namespace gsift
