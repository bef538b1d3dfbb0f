#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gsift/common.hpp"

namespace gsift {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
};

/// How the vertices are embedded in space, when they are. Drives the choice
/// of distance matrix and of the domain extent for window sizing.
enum class EmbeddingKind { none, circle_angles, plane_points };

/// Undirected weighted graph. Immutable after construction; build through
/// make_graph / build_ring_graph / build_delaunay_graph so the invariants
/// (index range, positive finite weights, no duplicate pairs) hold.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  EmbeddingKind embedding_kind = EmbeddingKind::none;
  Vector angles;    // circle_angles: vertex angle in [0, 2*pi)
  Matrix points;    // plane_points: n x 2 coordinates
  bool connected = true;

  std::vector<std::vector<int>> neighbors;  // adjacency lists, sorted

  Eigen::SparseMatrix<double> adjacency() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * edges.size());
    for (const auto& e : edges) {
      trip.emplace_back(e.i, e.j, e.weight);
      trip.emplace_back(e.j, e.i, e.weight);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
  }
};

namespace detail {

inline void build_neighbor_lists(Graph& g) {
  g.neighbors.assign(g.n, {});
  for (const auto& e : g.edges) {
    g.neighbors[e.i].push_back(e.j);
    g.neighbors[e.j].push_back(e.i);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
}

inline bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == g.n;
}

}  // namespace detail

/// Validates edges and finalizes the derived members. Disconnected graphs are
/// accepted; g.connected records the fact for downstream consumers.
inline Graph make_graph(int n, std::vector<Edge> edges,
                        EmbeddingKind kind = EmbeddingKind::none,
                        Vector angles = {}, Matrix points = {}) {
  if (n <= 0) throw invalid_input("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw invalid_input("edge endpoint out of range");
    if (e.i == e.j) throw invalid_input("self-loops are not allowed");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw invalid_input("edge weights must be positive and finite");
    if (!seen.insert({e.i, e.j}).second)
      throw invalid_input("duplicate edge (" + std::to_string(e.i) + "," +
                          std::to_string(e.j) + ")");
  }
  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.embedding_kind = kind;
  g.angles = std::move(angles);
  g.points = std::move(points);
  detail::build_neighbor_lists(g);
  g.connected = detail::is_connected(g);
  return g;
}

/// Circular arc distance between two angles.
inline double arc_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, two_pi - d);
}

/// Ring graph over sorted angles on the circle: each vertex is joined to its
/// `neighbors_per_side` nearest vertices on either side in circular order,
/// weighted by the reciprocal arc distance.
inline Graph build_ring_graph(const Vector& angles, int neighbors_per_side) {
  const int n = static_cast<int>(angles.size());
  if (neighbors_per_side < 1)
    throw invalid_input("neighbors_per_side must be >= 1");
  if (n < 2 * neighbors_per_side + 1)
    throw invalid_input("ring graph needs at least " +
                        std::to_string(2 * neighbors_per_side + 1) +
                        " vertices, got " + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(angles[i]) || angles[i] < 0.0 || angles[i] >= two_pi)
      throw invalid_input("angles must lie in [0, 2*pi)");
    if (i > 0 && !(angles[i] > angles[i - 1]))
      throw invalid_input("angles must be strictly increasing");
  }
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int step = 1; step <= neighbors_per_side; ++step) {
      for (int j : {(i + step) % n, (i - step + n) % n}) {
        if (i == j) continue;
        pairs.insert({std::min(i, j), std::max(i, j)});
      }
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double d = arc_distance(angles[i], angles[j]);
    if (d <= 0.0) throw invalid_input("duplicate angles on the ring");
    edges.push_back({i, j, 1.0 / d});
  }
  return make_graph(n, std::move(edges), EmbeddingKind::circle_angles, angles);
}

/// Weighted graph Laplacian L = D - A, dense.
inline Matrix laplacian(const Graph& g) {
  Matrix l = Matrix::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    l(e.i, e.j) -= e.weight;
    l(e.j, e.i) -= e.weight;
    l(e.i, e.i) += e.weight;
    l(e.j, e.j) += e.weight;
  }
  return l;
}

/// Number of strict local extrema of s with respect to graph neighbors.
/// Plateau vertices (any equal neighbor) do not count. Vertices of degree
/// zero have no defined extremum status and are rejected.
inline int count_extrema(const Graph& g, const Vector& s) {
  if (s.size() != g.n) throw invalid_input("signal length != vertex count");
  int count = 0;
  for (int v = 0; v < g.n; ++v) {
    const auto& nb = g.neighbors[v];
    if (nb.empty())
      throw invalid_input("isolated vertex " + std::to_string(v) +
                          ": extremum undefined");
    bool is_max = true, is_min = true;
    for (int u : nb) {
      if (s[v] <= s[u]) is_max = false;
      if (s[v] >= s[u]) is_min = false;
      if (!is_max && !is_min) break;
    }
    if (is_max || is_min) ++count;
  }
  return count;
}

/// Domain extent used by window-length selection: the full circle for ring
/// embeddings, sqrt of the bounding-box area for planar ones.
inline double domain_extent(const Graph& g) {
  switch (g.embedding_kind) {
    case EmbeddingKind::circle_angles:
      return two_pi;
    case EmbeddingKind::plane_points: {
      const double dx =
          g.points.col(0).maxCoeff() - g.points.col(0).minCoeff();
      const double dy =
          g.points.col(1).maxCoeff() - g.points.col(1).minCoeff();
      return std::sqrt(dx * dy);
    }
    case EmbeddingKind::none:
      throw invalid_input("graph has no embedding: extent unknown");
  }
  return 0.0;
}

}  // namespace gsift
