#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gsift/common.hpp"
#include "gsift/distance.hpp"
#include "gsift/graph.hpp"
#include "gsift/sifting.hpp"
#include "gsift/spectral.hpp"
#include "gsift/window.hpp"

namespace gsift {

/// The window rule takes the raw extrema count in 1D. On planar embeddings
/// the raw count overstates the per-axis oscillation rate (an oscillation
/// with p periods per axis produces on the order of p^2 graph extrema), so
/// the rule uses 2 sqrt(k) there. The planar variant is a dimensional
/// analogy, flagged experimental in the output metadata.
inline double effective_extrema_count(int k, EmbeddingKind kind) {
  if (kind == EmbeddingKind::plane_points)
    return std::max(2.0, 2.0 * std::sqrt(static_cast<double>(k)));
  return static_cast<double>(k);
}

/// Distance-based iterative filtering: per component, size the window from
/// the current residual's extrema count, build the row-stochastic (or
/// symmetrized) window operator from C, and sift.
inline DecompositionResult db_if(const Graph& g, const DistanceMatrix& c,
                                 const Vector& s, double nu,
                                 const StoppingRule& rule, int max_imfs,
                                 WindowMode mode = WindowMode::row_stochastic,
                                 WindowStorage storage = WindowStorage::automatic,
                                 bool force_imf_count = false) {
  if (c.size() != g.n)
    throw invalid_input("distance matrix does not match vertex count");
  // without an embedding (e.g. edge-list graphs with shortest-path
  // distances) the domain extent is the graph diameter under C
  const double extent = g.embedding_kind == EmbeddingKind::none
                            ? c.values.maxCoeff()
                            : domain_extent(g);
  const bool planar = g.embedding_kind == EmbeddingKind::plane_points;

  auto factory = [&](const Vector& /*residual*/, int k) {
    const double k_eff = effective_extrema_count(k, g.embedding_kind);
    const double l = db_window_length(extent, k_eff, nu);
    auto window = std::make_shared<WindowOperator>(
        build_window_operator(c, l, mode, {}, storage));
    AveragingOperator op;
    op.apply = [window](const Vector& x) { return window->apply(x); };
    op.descriptor = {"distance_window", l,
                     mode == WindowMode::row_stochastic ? "row_stochastic"
                                                        : "symmetrized",
                     planar};
    return op;
  };
  return decompose(factory, s, g, rule, max_imfs, force_imf_count);
}

/// Spectral cutoff from the extrema count: the eigenvalue at index
/// min(n-1, max(1, k)). A heuristic stand-in for a manually chosen kernel;
/// results carry an experimental flag.
inline double auto_gft_cutoff(const SpectralBasis& basis, int k) {
  if (k < 2) throw invalid_input("fewer than 2 extrema: no cutoff needed");
  const auto n = basis.size();
  Eigen::Index idx = std::min<Eigen::Index>(n - 1, std::max(1, k));
  const double zero_tol = basis.zero_tolerance();
  while (idx < n && basis.eigenvalues[idx] <= zero_tol) ++idx;
  if (idx >= n)
    throw invalid_input("spectrum has no positive eigenvalues above the "
                        "requested index");
  return basis.eigenvalues[idx];
}

/// Cutoff policy for the spectral pipeline: either an explicit per-component
/// cutoff sequence or the automatic index rule.
struct GftCutoff {
  bool automatic = true;
  std::vector<double> manual;

  static GftCutoff auto_rule() { return {}; }
  static GftCutoff manual_list(std::vector<double> cutoffs) {
    return {false, std::move(cutoffs)};
  }
};

/// Spectral-domain iterative filtering. The inner loop runs entirely on GFT
/// coefficients (one elementwise product per iteration); each extracted
/// component costs one inverse transform. Per-component kernels and component
/// spectra are recorded for spectrum export.
inline DecompositionResult gft_if(const Graph& g, const SpectralBasis& basis,
                                  const Vector& s, const GftCutoff& cutoff,
                                  const StoppingRule& rule, int max_imfs,
                                  bool force_imf_count = false) {
  if (basis.size() != g.n)
    throw invalid_input("spectral basis does not match vertex count");
  if (s.size() != g.n) throw invalid_input("signal length != vertex count");
  if (max_imfs < 1) throw invalid_input("max_imfs must be >= 1");
  if (!cutoff.automatic) {
    if (cutoff.manual.empty())
      throw invalid_input("manual cutoff list is empty");
    for (double l : cutoff.manual)
      if (!(l > 0.0)) throw invalid_input("cutoffs must be positive");
  }

  DecompositionResult result;
  result.input_checksum = content_hash(s);
  result.eigenvalues = basis.eigenvalues;
  Vector residual = s;
  while (static_cast<int>(result.imfs.size()) < max_imfs) {
    const auto index = result.imfs.size();
    if (!cutoff.automatic && index >= cutoff.manual.size()) break;
    const int extrema = count_extrema(g, residual);
    if (extrema < 2 && !force_imf_count) break;
    const int k = std::max(extrema, 2);
    const auto t0 = std::chrono::steady_clock::now();
    const double l =
        cutoff.automatic ? auto_gft_cutoff(basis, k) : cutoff.manual[index];
    const SpectralKernel kernel = hann_spectral_kernel(basis, l);
    const Vector coeffs = gft(basis, residual);
    auto [imf_coeffs, iterations] = sift(
        [&kernel](const Vector& x) -> Vector {
          return kernel.values.cwiseProduct(x);
        },
        coeffs, rule);
    const Vector imf = igft(basis, imf_coeffs);
    const auto t1 = std::chrono::steady_clock::now();

    residual -= imf;
    result.imfs.push_back(imf);
    result.kernels.push_back(kernel.values);
    result.imf_spectra.push_back(std::move(imf_coeffs));
    result.meta.push_back({iterations,
                           {"spectral_hann", l,
                            cutoff.automatic ? "auto" : "manual",
                            cutoff.automatic},
                           std::chrono::duration<double>(t1 - t0).count(), extrema});
  }
  result.residual = std::move(residual);
  return result;
}

}  // namespace gsift
