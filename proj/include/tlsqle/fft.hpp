#pragma once

#include <complex>
#include <vector>

#include "tlsqle/model.hpp"

namespace tlsqle::detail {

inline bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 transform, sign convention X_k = sum x_n e^{-2pi i nk/N}.
inline void fft_radix2(std::vector<Complex>& a) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// DFT of arbitrary length; quadratic cost, used only for segment lengths that
// are not powers of two.
inline std::vector<Complex> dft_direct(const std::vector<Complex>& x) {
  const size_t n = x.size();
  std::vector<Complex> out(n);
  for (size_t k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    const double w0 = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    for (size_t m = 0; m < n; ++m) acc += x[m] * Complex(std::cos(w0 * m), std::sin(w0 * m));
    out[k] = acc;
  }
  return out;
}

inline std::vector<Complex> fft(std::vector<Complex> x) {
  if (is_power_of_two(x.size())) {
    fft_radix2(x);
    return x;
  }
  return dft_direct(x);
}

}  // namespace tlsqle::detail
