#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace tlsqle::detail {

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0, in ascending order.
// Degenerate leading coefficients fall back to quadratic / linear solves.
// Closed-form (trigonometric / Cardano) evaluation; callers are expected to
// polish the returned roots against their own residual function.
inline std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0) {
  std::vector<double> roots;
  if (c3 == 0.0) {
    if (c2 == 0.0) {
      if (c1 == 0.0) return roots;  // constant: no isolated roots
      roots.push_back(-c0 / c1);
      return roots;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    // Citardauq form avoids cancellation for the smaller-magnitude root.
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    roots.push_back(q / c2);
    if (q != 0.0) roots.push_back(c0 / q);
    else roots.push_back(0.0);
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  const double p = c2 / c3, q = c1 / c3, r = c0 / c3;
  const double Q = (p * p - 3.0 * q) / 9.0;
  const double R = (2.0 * p * p * p - 9.0 * p * q + 27.0 * r) / 54.0;
  const double Q3 = Q * Q * Q;
  if (R * R < Q3) {
    const double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(Q);
    roots.push_back(m * std::cos(theta / 3.0) - p / 3.0);
    roots.push_back(m * std::cos((theta + 2.0 * M_PI) / 3.0) - p / 3.0);
    roots.push_back(m * std::cos((theta - 2.0 * M_PI) / 3.0) - p / 3.0);
  } else {
    const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q3)), R);
    const double B = (A != 0.0) ? Q / A : 0.0;
    roots.push_back(A + B - p / 3.0);
    // A double complex-conjugate pair collapses to one real value when the
    // discriminant vanishes exactly.
    if (A == B) roots.push_back(-A - p / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace tlsqle::detail
