#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gsift {

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Error taxonomy; the CLI maps kinds to process exit codes.
enum class error_kind { invalid_input, numeric_failure, io_failure };

class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

inline error invalid_input(const std::string& msg) {
  return error(error_kind::invalid_input, msg);
}
inline error numeric_failure(const std::string& msg) {
  return error(error_kind::numeric_failure, msg);
}
inline error io_failure(const std::string& msg) {
  return error(error_kind::io_failure, msg);
}

/// Hann taper: (1 + cos(pi x)) / 2 on |x| < 1, zero outside.
inline double hann(double x) {
  return std::abs(x) < 1.0 ? 0.5 * (1.0 + std::cos(pi * x)) : 0.0;
}

/// Deterministic RNG used everywhere randomness is needed. mt19937_64 has a
/// standard-defined sequence and the mappings below avoid the
/// implementation-defined std:: distributions, so outputs are reproducible
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Integer in [lo, hi] via rejection-free modulo (bias is negligible for
  /// the small ranges used here, but keep it simple and deterministic).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Vector normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// FNV-1a over the raw bytes of a double vector; identifies decomposition
/// inputs in result metadata.
inline std::uint64_t content_hash(const Vector& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = v[i];
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

/// Decimal formatting with 17 significant digits: double -> text -> double
/// round-trips are lossless.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace gsift
