#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ncftap/algebra.hpp"

namespace ncftap {

/// Deterministic sampling on top of mt19937_64.  Transforms are hand-rolled
/// so streams reproduce bit-for-bit independently of the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  /// Standard normal via Box-Muller (cosine branch only).
  double normal() {
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }
  /// Complex standard normal with unit total variance.
  Complex cnormal() {
    double re = normal();
    double im = normal();
    return Complex(re, im) * 0.7071067811865475244;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ncftap
