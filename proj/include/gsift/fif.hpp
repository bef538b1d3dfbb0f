#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gsift/common.hpp"
#include "gsift/sifting.hpp"

namespace gsift {



/// Strict circular extrema count of an equispaced sequence; the 1D analogue
/// of the graph extrema count on a ring with one neighbor per side.
inline int circular_extrema_1d(const Vector& s) {
  const int n = static_cast<int>(s.size());
  if (n < 3) throw invalid_input("sequence too short for extrema counting");
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const double prev = s[(i - 1 + n) % n];
    const double next = s[(i + 1) % n];
    if ((s[i] > prev && s[i] > next) || (s[i] < prev && s[i] < next)) ++count;
  }
  return count;
}

/// Squared DFT spectrum of a circularly centered, unit-sum base window. The
/// base window w(i/l) sits at indices -l..l modulo n (contributions add when
/// it wraps), so its transform is real and the squared kernel lies in [0, 1]
/// with value 1 at DC.
struct FifKernel {
  Vector values;        // squared spectrum, DFT index order
  int window_length = 0;
  Vector base_window;   // periodized, unit-sum
};

inline FifKernel fif_kernel(int n, int l, const WindowFunction& window = {}) {
  if (l < 1) throw invalid_input("window length must be >= 1");
  auto wfn = window ? window : WindowFunction([](double x) { return hann(x); });
  Vector v = Vector::Zero(n);
  for (int i = -l; i <= l; ++i) {
    const double val = wfn(static_cast<double>(i) / l);
    if (!(val >= 0.0) || !std::isfinite(val))
      throw invalid_input("window function must be non-negative and finite");
    v[((i % n) + n) % n] += val;
  }
  const double sum = v.sum();
  if (!(sum > 0.0)) throw invalid_input("base window has zero mass");
  v /= sum;

  Eigen::FFT<double> fft;
  ComplexVector spectrum(n);
  ComplexVector input = v.cast<std::complex<double>>();
  fft.fwd(spectrum, input);
  FifKernel kernel;
  kernel.window_length = l;
  kernel.base_window = std::move(v);
  kernel.values = spectrum.cwiseAbs2();  // real even window: |.|^2 == re^2
  return kernel;
}

/// Classical iterative filtering of an equispaced circular sequence, sifting
/// in the DFT domain. Window length per component: 2 floor(nu n / k) samples.
inline DecompositionResult fif_1d(const Vector& values, double nu,
                                  const StoppingRule& rule, int max_imfs,
                                  bool force_imf_count = false) {
  const int n = static_cast<int>(values.size());
  if (n < 3) throw invalid_input("fif needs at least 3 samples");
  if (!values.allFinite()) throw invalid_input("signal has non-finite values");
  if (!(nu > 0.0)) throw invalid_input("nu must be > 0");
  if (max_imfs < 1) throw invalid_input("max_imfs must be >= 1");

  Eigen::FFT<double> fft;
  DecompositionResult result;
  result.input_checksum = content_hash(values);
  Vector residual = values;
  while (static_cast<int>(result.imfs.size()) < max_imfs) {
    const int extrema = circular_extrema_1d(residual);
    if (extrema < 2 && !force_imf_count) break;
    const int k = std::max(extrema, 2);
    const auto t0 = std::chrono::steady_clock::now();
    const int l = 2 * static_cast<int>(std::floor(nu * n / k));
    if (l == 0)
      throw invalid_input("window length rule produced l = 0 (nu too small "
                          "for " + std::to_string(k) + " extrema)");
    const FifKernel kernel = fif_kernel(n, l);

    ComplexVector coeffs(n);
    ComplexVector input = residual.cast<std::complex<double>>();
    fft.fwd(coeffs, input);
    const ComplexVector kernel_c = kernel.values.cast<std::complex<double>>();
    auto [imf_coeffs, iterations] = sift(
        [&kernel_c](const ComplexVector& x) -> ComplexVector {
          return kernel_c.cwiseProduct(x);
        },
        coeffs, rule);
    ComplexVector imf_time(n);
    fft.inv(imf_time, imf_coeffs);
    const Vector imf = imf_time.real();
    const auto t1 = std::chrono::steady_clock::now();

    residual -= imf;
    result.imfs.push_back(imf);
    result.meta.push_back({iterations,
                           {"dft_hann", static_cast<double>(l), "circular",
                            false},
                           std::chrono::duration<double>(t1 - t0).count(), extrema});
  }
  result.residual = std::move(residual);
  return result;
}

}  // namespace gsift
