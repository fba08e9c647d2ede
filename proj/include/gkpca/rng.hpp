#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace gkpca {

/// Seeded random stream with fully specified draw algorithms.
///
/// std::mt19937_64 is bit-exact across conforming implementations, but the
/// std:: distributions are not, so integer and normal draws are implemented
/// here directly (rejection sampling and Box-Muller). Reruns with the same
/// seed therefore consume the engine identically on every platform that
/// shares a floating-point environment.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  double uniform_symmetric() { return 2.0 * uniform() - 1.0; }

  /// Uniform integer on [lo, hi] inclusive, unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t span = hi - lo + 1;  // wraps to 0 for the full range
    if (span == 0) return engine_();
    const std::uint64_t reject_above = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r = engine_();
    while (r >= reject_above) r = engine_();
    return lo + r % span;
  }

  /// Uniform index on [0, n).
  std::uint64_t index(std::uint64_t n) { return uniform_int(0, n - 1); }

  /// Standard normal via Box-Muller; one engine pair feeds two variates.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gkpca
