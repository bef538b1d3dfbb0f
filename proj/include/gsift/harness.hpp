#pragma once

#include <Eigen/QR>

#include "gsift/common.hpp"
#include "gsift/sifting.hpp"

namespace gsift {

// Randomized operators for the convergence-verification harnesses.

inline Matrix random_orthogonal(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  const Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

/// Symmetric matrix with the given spectrum in a random orthogonal basis.
inline Matrix symmetric_with_spectrum(const Vector& lambda, Rng& rng) {
  const Matrix q = random_orthogonal(static_cast<int>(lambda.size()), rng);
  return q * lambda.asDiagonal() * q.transpose();
}

/// Spectrum sampler for limit-theorem trials over [0, 1.9]: exact zeros with
/// probability 1/4 (exercising the preserved-mode branch of the limit
/// projector); the rest uniform in [0.01, 1.9], keeping every decaying mode
/// fast enough that 1e4 iterations converge to well below 1e-6.
inline Vector sample_limit_spectrum(int n, Rng& rng) {
  Vector lambda(n);
  for (int i = 0; i < n; ++i)
    lambda[i] = rng.uniform() < 0.25 ? 0.0 : rng.uniform(0.01, 1.9);
  return lambda;
}

inline Vector iterate_sift(const Matrix& w, const Vector& s0, int iterations) {
  Vector s = s0;
  for (int m = 0; m < iterations; ++m) s -= w * s;
  return s;
}

struct LimitCheckReport {
  int trials = 0;
  double max_relative_error = 0.0;
  bool divergence_detected = false;  // for the planted violation trial
  double zero_operator_error = 0.0;
};

/// Compares iterated sifting at 1e4 steps against the closed-form limit on
/// random symmetric operators, then plants an eigenvalue of 2.1 and confirms
/// the divergence guard fires.
inline LimitCheckReport run_limit_check(int trials, int n, std::uint64_t seed,
                                        int iterations = 10000) {
  if (trials < 1 || n < 2) throw invalid_input("need trials >= 1 and n >= 2");
  Rng rng(seed);
  LimitCheckReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Vector lambda = sample_limit_spectrum(n, rng);
    const Matrix w = symmetric_with_spectrum(lambda, rng);
    const Vector s0 = rng.normal_vector(n);
    const Vector limit = sifting_limit(w, s0);
    const Vector iterated = iterate_sift(w, s0, iterations);
    report.max_relative_error =
        std::max(report.max_relative_error,
                 (iterated - limit).norm() / std::max(s0.norm(), 1e-300));
  }
  {
    Vector lambda = sample_limit_spectrum(n, rng);
    lambda[0] = 2.1;
    const Matrix w = symmetric_with_spectrum(lambda, rng);
    const Vector s0 = rng.normal_vector(n);
    try {
      sift([&](const Vector& s) -> Vector { return w * s; }, s0,
           StoppingRule::fixed(iterations));
    } catch (const error& e) {
      report.divergence_detected = e.kind() == error_kind::numeric_failure;
    }
  }
  {
    const Matrix w = Matrix::Zero(n, n);
    const Vector s0 = Rng(seed ^ 0x9e3779b97f4a7c15ull).normal_vector(n);
    report.zero_operator_error =
        (sifting_limit(w, s0) - s0).cwiseAbs().maxCoeff();
  }
  return report;
}

}  // namespace gsift
