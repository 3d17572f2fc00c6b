#pragma once

#include <hybridvi/types.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vi {

// Seeded generator with a fully pinned draw order, so instances reproduce
// bit-for-bit across platforms.  std::mt19937_64 has a portable bit stream;
// the uniform and normal transforms below are fixed here instead of relying on
// std::*_distribution, whose outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // in [0,1), 53 random bits
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, cosine branch only: exactly two uniforms per call, no cached
  // second value, so the stream position is a pure function of the call count.
  double normal() {
    double u1 = 1.0 - uniform();  // (0,1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector normal_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  Vector uniform_vector(int dim, double lo, double hi) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector unit_sphere(int dim) {
    for (;;) {
      Vector v = normal_vector(dim);
      double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vi
