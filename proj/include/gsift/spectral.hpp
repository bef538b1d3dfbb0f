#pragma once

#include <Eigen/Dense>

#include "gsift/common.hpp"

namespace gsift {

/// Orthonormal eigendecomposition of a graph Laplacian: ascending eigenvalues
/// paired with the columns of U. Immutable; safe to share.
struct SpectralBasis {
  Vector eigenvalues;  // ascending
  Matrix eigenvectors; // orthonormal columns, column i <-> eigenvalues[i]

  Eigen::Index size() const { return eigenvalues.size(); }

  /// Threshold below which an eigenvalue counts as zero.
  double zero_tolerance() const {
    const double lmax = eigenvalues.size() ? eigenvalues[eigenvalues.size() - 1] : 0.0;
    return 1e-12 * std::max(1.0, lmax);
  }
};

/// Per-eigenvalue filter values with the cutoff that generated them.
struct SpectralKernel {
  Vector values;
  double cutoff = 0.0;
};

/// Dense symmetric eigendecomposition of L. Deterministic for identical
/// input; eigenvalues ascending with stable ordering for ties.
inline SpectralBasis eigendecompose(const Matrix& l) {
  if (l.rows() != l.cols()) throw invalid_input("matrix must be square");
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if ((l - l.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw invalid_input("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (l + l.transpose()));
  if (solver.info() != Eigen::Success)
    throw numeric_failure("eigendecomposition did not converge");
  return SpectralBasis{solver.eigenvalues(), solver.eigenvectors()};
}

inline Vector gft(const SpectralBasis& basis, const Vector& s) {
  if (s.size() != basis.size())
    throw invalid_input("signal length does not match basis");
  return basis.eigenvectors.transpose() * s;
}

inline Vector igft(const SpectralBasis& basis, const Vector& coeffs) {
  if (coeffs.size() != basis.size())
    throw invalid_input("coefficient length does not match basis");
  return basis.eigenvectors * coeffs;
}

/// Graph convolution: inverse transform of the Hadamard product of spectra.
inline Vector graph_convolve(const SpectralBasis& basis, const Vector& s,
                             const Vector& v) {
  if (s.size() != basis.size() || v.size() != basis.size())
    throw invalid_input("signal length does not match basis");
  return igft(basis, gft(basis, s).cwiseProduct(gft(basis, v)));
}

/// Low-pass kernel w_i = hann(lambda_i / l). Values lie in [0, 1] and vanish
/// exactly for lambda_i >= l, so the kernel has compact spectral support and
/// unit sup-norm by construction.
inline SpectralKernel hann_spectral_kernel(const SpectralBasis& basis,
                                           double cutoff) {
  if (!(cutoff > 0.0)) throw invalid_input("kernel cutoff must be positive");
  Vector w(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i)
    w[i] = hann(basis.eigenvalues[i] / cutoff);
  return SpectralKernel{std::move(w), cutoff};
}

/// Limit kernel of the spectral sifting iteration: 1 on modes the filter
/// never touches (w_i = 0), 0 on modes it eventually removes (0 < w_i < 2).
/// Values outside [0, 2) make the iteration non-convergent.
inline SpectralKernel spectral_sifting_limit(const SpectralKernel& kernel) {
  const double wmax = kernel.values.size()
                          ? kernel.values.cwiseAbs().maxCoeff()
                          : 0.0;
  const double zero_tol = 1e-12 * std::max(1.0, wmax);
  Vector out(kernel.values.size());
  for (Eigen::Index i = 0; i < kernel.values.size(); ++i) {
    const double w = kernel.values[i];
    if (w < 0.0 || w >= 2.0)
      throw numeric_failure("kernel value " + format_double(w) + " at index " +
                            std::to_string(i) +
                            " violates the convergence hypothesis [0, 2)");
    out[i] = std::abs(w) <= zero_tol ? 1.0 : 0.0;
  }
  return SpectralKernel{std::move(out), kernel.cutoff};
}

}  // namespace gsift
