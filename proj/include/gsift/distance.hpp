#pragma once

#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "gsift/common.hpp"
#include "gsift/graph.hpp"

namespace gsift {

/// Dense symmetric vertex-distance matrix with zero diagonal.
struct DistanceMatrix {
  Matrix values;

  int size() const { return static_cast<int>(values.rows()); }
  double operator()(int i, int j) const { return values(i, j); }
};

inline DistanceMatrix circular_distance_matrix(const Vector& angles) {
  const int n = static_cast<int>(angles.size());
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(angles[i]) || angles[i] < 0.0 || angles[i] >= two_pi)
      throw invalid_input("angle " + std::to_string(i) +
                          " outside [0, 2*pi)");
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = arc_distance(angles[i], angles[j]);
      c(i, j) = d;
      c(j, i) = d;
    }
  }
  return DistanceMatrix{std::move(c)};
}

inline DistanceMatrix euclidean_distance_matrix(const Matrix& points) {
  if (!points.allFinite()) throw invalid_input("coordinates must be finite");
  const int n = static_cast<int>(points.rows());
  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      c(i, j) = d;
      c(j, i) = d;
    }
  }
  return DistanceMatrix{std::move(c)};
}

enum class ShortestPathMethod { dijkstra, floyd_warshall };

/// How edge lengths derive from edge weights. The experiment graphs carry
/// similarity weights 1/d, so inverse_weight recovers the geometric length.
enum class EdgeLength { weight, inverse_weight };

namespace detail {

inline double edge_length_of(const Edge& e, EdgeLength mode) {
  return mode == EdgeLength::weight ? e.weight : 1.0 / e.weight;
}

inline void throw_unreachable(int i, int j) {
  throw invalid_input("graph is disconnected: no path between vertices " +
                      std::to_string(i) + " and " + std::to_string(j));
}

}  // namespace detail

/// All-pairs shortest-path distances. Dijkstra (binary heap, per source) and
/// Floyd-Warshall produce identical matrices; disconnected graphs are
/// rejected with an offending pair.
inline DistanceMatrix shortest_path_matrix(
    const Graph& g, ShortestPathMethod method = ShortestPathMethod::dijkstra,
    EdgeLength edge_length = EdgeLength::inverse_weight) {
  const int n = g.n;
  const double inf = std::numeric_limits<double>::infinity();
  Matrix c(n, n);

  if (method == ShortestPathMethod::floyd_warshall) {
    c.setConstant(inf);
    for (int i = 0; i < n; ++i) c(i, i) = 0.0;
    for (const auto& e : g.edges) {
      const double len = detail::edge_length_of(e, edge_length);
      c(e.i, e.j) = std::min(c(e.i, e.j), len);
      c(e.j, e.i) = std::min(c(e.j, e.i), len);
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        const double cik = c(i, k);
        if (cik == inf) continue;
        for (int j = 0; j < n; ++j) {
          const double via = cik + c(k, j);
          if (via < c(i, j)) c(i, j) = via;
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (c(i, j) == inf) detail::throw_unreachable(i, j);
    return DistanceMatrix{std::move(c)};
  }

  // Dijkstra from every source over adjacency lists.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : g.edges) {
    const double len = detail::edge_length_of(e, edge_length);
    adj[e.i].emplace_back(e.j, len);
    adj[e.j].emplace_back(e.i, len);
  }
  for (int src = 0; src < n; ++src) {
    std::vector<double> dist(n, inf);
    dist[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (const auto& [u, len] : adj[v]) {
        const double nd = d + len;
        if (nd < dist[u]) {
          dist[u] = nd;
          heap.push({nd, u});
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (dist[j] == inf) detail::throw_unreachable(src, j);
      c(src, j) = dist[j];
    }
  }
  // Per-source runs can disagree in the last ulp across the diagonal; keep
  // the matrix exactly symmetric by construction.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::min(c(i, j), c(j, i));
      c(i, j) = d;
      c(j, i) = d;
    }
  return DistanceMatrix{std::move(c)};
}

}  // namespace gsift
