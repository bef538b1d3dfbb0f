#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsift/common.hpp"
#include "gsift/graph.hpp"

namespace gsift {

struct StoppingRule {
  enum class Mode { fixed_iterations, relative_change };
  Mode mode = Mode::relative_change;
  int max_iterations = 200;
  double delta = 1e-3;

  static StoppingRule fixed(int iterations) {
    return {Mode::fixed_iterations, iterations, 0.0};
  }
  static StoppingRule relative(double delta = 1e-3, int cap = 200) {
    return {Mode::relative_change, cap, delta};
  }

  void validate() const {
    if (max_iterations < 1) throw invalid_input("max_iterations must be >= 1");
    if (mode == Mode::relative_change && !(delta > 0.0))
      throw invalid_input("relative-change delta must be positive");
  }
};

namespace detail {

template <class Vec, class Apply>
std::pair<Vec, int> sift_impl(Apply&& apply_w, const Vec& s0,
                              const StoppingRule& rule) {
  rule.validate();
  const double norm0 = s0.norm();
  const double blowup = 1e6 * std::max(norm0, 1e-300);
  Vec s = s0;
  int m = 0;
  while (true) {
    if (rule.mode == StoppingRule::Mode::relative_change && s.norm() == 0.0)
      return {s, m};
    Vec next = s - apply_w(s);
    ++m;
    if (!next.allFinite())
      throw numeric_failure("sifting diverged: non-finite values at iteration " +
                            std::to_string(m));
    if (next.norm() > blowup)
      throw numeric_failure("sifting diverged: norm grew beyond 1e6 x input "
                            "at iteration " + std::to_string(m));
    if (rule.mode == StoppingRule::Mode::fixed_iterations) {
      if (m >= rule.max_iterations) return {next, m};
    } else {
      if ((next - s).norm() <= rule.delta * s.norm() ||
          m >= rule.max_iterations)
        return {next, m};
    }
    s = std::move(next);
  }
}

}  // namespace detail

/// One sifting run: iterate s <- s - W s until the rule fires. Works on real
/// or complex coefficient vectors; W enters as a callable. Divergence (norm
/// blow-up or non-finite values) signals a violated convergence hypothesis.
template <class Apply>
std::pair<Vector, int> sift(Apply&& apply_w, const Vector& s0,
                            const StoppingRule& rule) {
  return detail::sift_impl<Vector>(std::forward<Apply>(apply_w), s0, rule);
}

template <class Apply>
std::pair<ComplexVector, int> sift(Apply&& apply_w, const ComplexVector& s0,
                                   const StoppingRule& rule) {
  return detail::sift_impl<ComplexVector>(std::forward<Apply>(apply_w), s0,
                                          rule);
}

struct OperatorDescriptor {
  std::string kind;      // e.g. "distance_window", "spectral_hann", "dft_hann"
  double length = 0.0;   // window length or spectral cutoff
  std::string mode;      // e.g. "row_stochastic", "symmetrized", "auto"
  bool experimental = false;
};

/// Type-erased averaging operator: the action s -> W s plus a descriptor for
/// result metadata.
struct AveragingOperator {
  std::function<Vector(const Vector&)> apply;
  OperatorDescriptor descriptor;
};

struct ImfMeta {
  int iterations = 0;
  OperatorDescriptor op;
  double seconds = 0.0;
  int extrema = 0;  // extrema count of the residual the IMF was sifted from
};

struct DecompositionResult {
  std::vector<Vector> imfs;
  Vector residual;
  std::vector<ImfMeta> meta;
  std::uint64_t input_checksum = 0;

  // Spectral traces, populated by the GFT pipeline for spectrum export.
  Vector eigenvalues;
  std::vector<Vector> kernels;
  std::vector<Vector> imf_spectra;

  Vector reconstruct() const {
    Vector sum = residual;
    for (const auto& imf : imfs) sum += imf;
    return sum;
  }
};

/// Outer loop of the discrete iterative-filtering meta algorithm: rebuild the
/// averaging operator from the current residual, sift one component, subtract,
/// repeat while the residual keeps at least two strict extrema.
///
/// `factory(residual, extrema_count)` supplies the operator per component.
/// With `force_imf_count` the loop ignores the extrema-based stop and always
/// extracts `max_imfs` components (benchmark protocol); the factory then
/// receives extrema counts clamped to >= 2.
template <class Factory>
DecompositionResult decompose(Factory&& factory, const Vector& s,
                              const Graph& g, const StoppingRule& rule,
                              int max_imfs, bool force_imf_count = false) {
  if (max_imfs < 1) throw invalid_input("max_imfs must be >= 1");
  if (s.size() != g.n) throw invalid_input("signal length != vertex count");
  if (!s.allFinite()) throw invalid_input("signal has non-finite values");

  DecompositionResult result;
  result.input_checksum = content_hash(s);
  Vector residual = s;
  while (static_cast<int>(result.imfs.size()) < max_imfs) {
    const int extrema = count_extrema(g, residual);
    if (extrema < 2 && !force_imf_count) break;
    const int k = std::max(extrema, 2);  // sizing clamp for forced runs
    const auto t0 = std::chrono::steady_clock::now();
    AveragingOperator op;
    try {
      op = factory(residual, k);
    } catch (const error& e) {
      throw error(e.kind(), "building operator for component " +
                                std::to_string(result.imfs.size()) + ": " +
                                e.what());
    }
    auto [imf, iterations] = sift(op.apply, residual, rule);
    const auto t1 = std::chrono::steady_clock::now();
    residual -= imf;
    result.imfs.push_back(std::move(imf));
    result.meta.push_back(
        {iterations, op.descriptor,
         std::chrono::duration<double>(t1 - t0).count(), extrema});
  }
  result.residual = std::move(residual);
  return result;
}

/// Closed-form limit of the sifting iteration for an explicit normal matrix:
/// the orthogonal projection of s0 onto the null space of W, provided every
/// eigenvalue satisfies |1 - lambda| < 1 or |lambda| <= zero_tol.
inline Vector sifting_limit(const Matrix& w, const Vector& s0,
                            double zero_tol = -1.0) {
  if (w.rows() != w.cols() || w.rows() != s0.size())
    throw invalid_input("operator/signal dimensions do not match");
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  const Matrix commutator = w * w.transpose() - w.transpose() * w;
  if (commutator.cwiseAbs().maxCoeff() > 1e-8 * scale * scale)
    throw numeric_failure("operator is not normal: limit theorem hypothesis "
                          "violated");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(w.cast<std::complex<double>>());
  if (schur.info() != Eigen::Success)
    throw numeric_failure("Schur decomposition did not converge");
  const Eigen::VectorXcd lam = schur.matrixT().diagonal();
  if (zero_tol < 0.0)
    zero_tol = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());

  Eigen::VectorXcd d(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam[i]) <= zero_tol) {
      d[i] = 1.0;
    } else if (std::abs(1.0 - lam[i]) < 1.0) {
      d[i] = 0.0;
    } else {
      throw numeric_failure(
          "sifting iteration does not converge: eigenvalue " +
          format_double(lam[i].real()) +
          (lam[i].imag() != 0.0 ? " + " + format_double(lam[i].imag()) + "i"
                                : "") +
          " violates |1 - lambda| < 1");
    }
  }
  const Eigen::MatrixXcd q = schur.matrixU();
  const Eigen::VectorXcd limit =
      q * d.asDiagonal() * q.adjoint() * s0.cast<std::complex<double>>();
  if (limit.imag().cwiseAbs().maxCoeff() >
      1e-8 * std::max(1.0, s0.cwiseAbs().maxCoeff()))
    throw numeric_failure("sifting limit has a non-negligible imaginary part");
  return limit.real();
}

}  // namespace gsift
