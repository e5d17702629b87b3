#pragma once

// SplitMix64 (Steele, Lea & Flood 2014; Vigna's reference constants). A
// counter-based 64-bit generator that is a few lines in any language, so
// streams can be reproduced bit-for-bit elsewhere.
//
// Test vector, seed 1234567, first five outputs:
//   6457827717110365317, 3203168211198807973, 9817491932198370423,
//   4593380528125082431, 16408922859458223821

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace mellinstat {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// 53-bit uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// 53-bit uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Standard variates on top of SplitMix64. Every draw consumes a documented
/// number of raw outputs, so sequences are portable.
class Variates {
 public:
  explicit Variates(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return rng_.uniform(); }
  double uniform_open() { return rng_.uniform_open(); }

  /// Box-Muller; the sine branch is cached for the next call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(rng_.uniform_open()));
    const double theta = 2.0 * std::numbers::pi * rng_.uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Unit-rate gamma. Marsaglia-Tsang squeeze/rejection for shape >= 1;
  /// shape < 1 draws shape + 1 and multiplies by U^(1/shape).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(rng_.uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = rng_.uniform_open();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  SplitMix64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mellinstat
