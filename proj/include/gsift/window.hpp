#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "gsift/common.hpp"
#include "gsift/distance.hpp"

namespace gsift {

enum class WindowMode { row_stochastic, symmetrized };
enum class WindowStorage { automatic, dense, sparse };

/// Window length from the extrema count: l = 2 nu (b - a) / k.
inline double db_window_length(double domain_extent, double extrema_count,
                               double nu) {
  if (!(domain_extent > 0.0)) throw invalid_input("domain extent must be > 0");
  if (!(nu > 0.0)) throw invalid_input("nu must be > 0");
  if (extrema_count < 2.0)
    throw invalid_input("fewer than 2 extrema: no window needed, the outer "
                        "loop is terminal");
  return 2.0 * nu * domain_extent / extrema_count;
}

/// Stochastic averaging operator built from windowed vertex distances.
/// The action is W s = B (B s); B itself is exposed for the circulant and
/// spectral checks.
struct WindowOperator {
  Matrix base;                          // dense B, when !sparse
  Eigen::SparseMatrix<double> sparse_base;
  bool sparse = false;
  double window_length = 0.0;
  WindowMode mode = WindowMode::row_stochastic;

  int size() const {
    return static_cast<int>(sparse ? sparse_base.rows() : base.rows());
  }

  Vector apply_base(const Vector& s) const {
    return sparse ? Vector(sparse_base * s) : Vector(base * s);
  }

  Vector apply(const Vector& s) const {
    if (s.size() != size())
      throw invalid_input("signal length does not match operator");
    return apply_base(apply_base(s));
  }

  Matrix dense_base() const { return sparse ? Matrix(sparse_base) : base; }
};

using WindowFunction = std::function<double(double)>;

/// Base window matrix from a distance matrix: B_ij = w(C_ij / l), rows
/// normalized to sum to 1 (row_stochastic), or scaled to a symmetric doubly
/// stochastic matrix (symmetrized) so that W = B B is PSD with spectrum in
/// [0, 1] and the sifting iteration provably converges.
inline WindowOperator build_window_operator(
    const DistanceMatrix& c, double l,
    WindowMode mode = WindowMode::row_stochastic,
    const WindowFunction& window = {},
    WindowStorage storage = WindowStorage::automatic) {
  if (!(l > 0.0)) throw invalid_input("window length must be positive");
  const int n = c.size();
  auto wfn = window ? window : WindowFunction([](double x) { return hann(x); });

  Matrix k(n, n);
  std::ptrdiff_t nnz = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = wfn(c(i, j) / l);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw invalid_input("window function must be non-negative and finite");
      k(i, j) = v;
      if (v != 0.0) ++nnz;
    }

  if (mode == WindowMode::row_stochastic) {
    for (int i = 0; i < n; ++i) {
      const double sum = k.row(i).sum();
      if (!(sum > 0.0))
        throw invalid_input("window row " + std::to_string(i) +
                            " sums to zero: support too narrow for vertex " +
                            std::to_string(i));
      k.row(i) /= sum;
    }
  } else {
    // Symmetric scaling B = D K D with diagonal D, driven to doubly
    // stochastic. Exactly symmetric at every sweep; row sums converge to 1.
    for (int i = 0; i < n; ++i)
      if (!(k.row(i).sum() > 0.0))
        throw invalid_input("window row " + std::to_string(i) +
                            " sums to zero: support too narrow for vertex " +
                            std::to_string(i));
    Vector d = Vector::Ones(n);
    constexpr int max_sweeps = 10000;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const Vector kd = k * d;
      d = (d.array() / kd.array()).sqrt().matrix();
      const Vector row_sums = d.asDiagonal() * (k * d);
      if ((row_sums.array() - 1.0).abs().maxCoeff() <= 1e-13) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw numeric_failure("doubly-stochastic scaling did not converge "
                            "within 10000 sweeps");
    k = d.asDiagonal() * k * d.asDiagonal();
  }

  WindowOperator op;
  op.window_length = l;
  op.mode = mode;
  const double fill = static_cast<double>(nnz) / (static_cast<double>(n) * n);
  const bool use_sparse = storage == WindowStorage::sparse ||
                          (storage == WindowStorage::automatic && fill <= 0.25);
  if (use_sparse) {
    op.sparse = true;
    op.sparse_base = k.sparseView();
    op.sparse_base.makeCompressed();
  } else {
    op.base = std::move(k);
  }
  return op;
}

}  // namespace gsift
