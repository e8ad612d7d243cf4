#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tlsqle/model.hpp"

namespace tlsqle {

// Mixing step used to derive independent per-trajectory seeds from one
// master seed; trajectories are then reproducible regardless of scheduling.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Gaussian deviates via Box-Muller on top of mt19937_64. Hand-rolled so the
// stream is identical across standard-library implementations.
class GaussianStream {
 public:
  explicit GaussianStream(uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  // Complex increment with independent real/imaginary parts of the given
  // per-component standard deviation.
  Complex next_complex(double sigma) {
    const double re = sigma * next();
    const double im = sigma * next();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tlsqle
