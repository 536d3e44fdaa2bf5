#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "phj/linalg.hpp"

namespace phj {

// Deterministic random stream. Uniforms are built from the top 53 bits of a
// mt19937_64 draw and normals via Box-Muller, so sequences depend only on the
// seed (std::normal_distribution would be implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0, 1)
    return std::ldexp(static_cast<double>(eng_() >> 11), -53);
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec uniform_vec(int n, double a, double b) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(a, b);
    return v;
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Uniform direction on the unit sphere.
  Vec unit_vec(int n) {
    for (;;) {
      Vec v = normal_vec(n);
      const double s = v.norm();
      if (s > 1e-12) return v / s;
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace phj
