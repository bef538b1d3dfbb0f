#pragma once

#include <algorithm>
#include <cmath>

#include "gsift/common.hpp"

namespace gsift {

// Bundled synthetic test signals: sums of two nonstationary tones whose
// instantaneous frequencies are well separated, so a correct decomposition
// recovers the two summands.

/// Fast chirp on [0, 2*pi): instantaneous frequency sweeping 30 -> 20 rad/rad.
inline double chirp_fast(double x) {
  return 0.5 * std::sin((30.0 - 5.0 / two_pi * x) * x + 1.0);
}

/// Slow chirp on [0, 2*pi): instantaneous frequency sweeping 2 -> 4 rad/rad.
inline double chirp_slow(double x) {
  return std::sin((2.0 + 2.0 / two_pi * x) * x - 1.5);
}

/// Fast planar wave on [0, 2*pi)^2.
inline double plane_wave_fast(double x, double y) {
  return 0.5 * std::sin(5.0 * x + 5.0 * y);
}

/// Slow planar wave on [0, 2*pi)^2.
inline double plane_wave_slow(double x, double y) { return std::cos(x - y); }

inline Vector equispaced_angles(int n) {
  Vector a(n);
  for (int i = 0; i < n; ++i) a[i] = two_pi * i / n;
  return a;
}

/// Sorted uniform-random angles in [0, 2*pi), strictly increasing.
inline Vector random_sorted_angles(int n, Rng& rng) {
  std::vector<double> a(n);
  for (auto& x : a) x = rng.uniform(0.0, two_pi);
  std::sort(a.begin(), a.end());
  for (int i = 1; i < n; ++i)
    if (a[i] <= a[i - 1])
      a[i] = std::nextafter(a[i - 1], two_pi);  // 53-bit collisions, if ever
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = a[i];
  return out;
}

/// Uniform-random points in [0, 2*pi)^2.
inline Matrix random_points_square(int n, Rng& rng) {
  Matrix p(n, 2);
  for (int i = 0; i < n; ++i) {
    p(i, 0) = rng.uniform(0.0, two_pi);
    p(i, 1) = rng.uniform(0.0, two_pi);
  }
  return p;
}

inline Vector chirp_sum(const Vector& angles) {
  Vector s(angles.size());
  for (Eigen::Index i = 0; i < angles.size(); ++i)
    s[i] = chirp_fast(angles[i]) + chirp_slow(angles[i]);
  return s;
}

inline Vector plane_wave_sum(const Matrix& points) {
  Vector s(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    s[i] = plane_wave_fast(points(i, 0), points(i, 1)) +
           plane_wave_slow(points(i, 0), points(i, 1));
  return s;
}

}  // namespace gsift
