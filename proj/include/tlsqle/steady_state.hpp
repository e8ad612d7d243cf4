#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "tlsqle/cubic.hpp"
#include "tlsqle/errors.hpp"
#include "tlsqle/model.hpp"

namespace tlsqle {

// One root of the stationary-amplitude equation for the pumped cavity.
struct SteadyStateSolution {
  Complex alpha;         // stationary field in the frame rotating at the pump
  double occupancy_x;    // |alpha|^2
  bool stable;           // both drift eigenvalues strictly damped
  std::array<Complex, 2> drift_eigenvalues;
  double residual;       // |i delta a - damping a + sqrt(kappa) a_in|
};

// Generator of the linearized fluctuation dynamics in the (a, a^dag) pair.
struct DriftMatrix {
  Complex m00, m01, m10, m11;
};

// Coefficients (c3, c2, c1, c0) of the cubic whose non-negative real roots
// are the stationary occupancies x = |alpha|^2:
//   x [ (kappa/2 + s kappa_n x)^2 + delta^2 ] = kappa |alpha_in|^2,
// with s = +1 (Minus) or -1 (Plus).
inline std::array<double, 4> cubic_coefficients(const ModelParams& p) {
  const double s = branch_sign(p.branch);
  const double half = p.kappa / 2.0;
  return {p.kappa_n * p.kappa_n, 2.0 * half * p.kappa_n * s,
          half * half + p.delta * p.delta, -p.kappa * std::norm(p.alpha_in)};
}

// Residual of the stationary equation evaluated at a candidate amplitude,
// with the occupancy recomputed from the amplitude itself.
inline double steady_state_residual(const ModelParams& p, Complex alpha) {
  const double s = branch_sign(p.branch);
  const double damping = p.kappa / 2.0 + s * p.kappa_n * std::norm(alpha);
  const Complex r = Complex(0.0, p.delta) * alpha - damping * alpha +
                    std::sqrt(p.kappa) * p.alpha_in;
  return std::abs(r);
}

inline DriftMatrix drift_matrix(const ModelParams& p, Complex alpha) {
  const double s = branch_sign(p.branch);
  const double x = std::norm(alpha);
  const Complex diag(-p.kappa / 2.0 - s * 2.0 * p.kappa_n * x, 0.0);
  const Complex b = -s * p.kappa_n * alpha * alpha;
  DriftMatrix m;
  m.m00 = Complex(0.0, p.delta) + diag;
  m.m01 = b;
  m.m10 = std::conj(b);
  m.m11 = Complex(0.0, -p.delta) + diag;
  return m;
}

// Closed-form eigenvalues of the 2x2 drift generator; stable iff both have
// strictly negative real part.
inline std::pair<bool, std::array<Complex, 2>> assess_stability(const DriftMatrix& m) {
  const Complex tr = m.m00 + m.m11;
  const Complex det = m.m00 * m.m11 - m.m01 * m.m10;
  const Complex sq = std::sqrt(tr * tr - 4.0 * det);
  const Complex l1 = 0.5 * (tr + sq);
  const Complex l2 = 0.5 * (tr - sq);
  const bool stable = std::max(l1.real(), l2.real()) < 0.0;
  return {stable, {l1, l2}};
}

namespace detail {

// Newton polishing of an occupancy root of f(x) = x (D(x)^2 + delta^2) - kappa |a_in|^2,
// D(x) = kappa/2 + s kappa_n x. Damped steps; bails out when the step stalls.
inline double polish_occupancy(const ModelParams& p, double x0) {
  const double s = branch_sign(p.branch);
  const double target = p.kappa * std::norm(p.alpha_in);
  auto f = [&](double x) {
    const double d = p.kappa / 2.0 + s * p.kappa_n * x;
    return x * (d * d + p.delta * p.delta) - target;
  };
  auto fp = [&](double x) {
    const double d = p.kappa / 2.0 + s * p.kappa_n * x;
    return d * d + p.delta * p.delta + 2.0 * s * p.kappa_n * x * d;
  };
  double x = std::max(x0, 0.0);
  double fx = f(x);
  for (int it = 0; it < 100 && fx != 0.0; ++it) {
    const double deriv = fp(x);
    if (deriv == 0.0 || !std::isfinite(deriv)) break;
    double step = fx / deriv;
    double xn = x - step;
    double fn = f(xn);
    // halve the step until the residual stops growing
    for (int h = 0; h < 40 && (!std::isfinite(fn) || std::abs(fn) > std::abs(fx)); ++h) {
      step *= 0.5;
      xn = x - step;
      fn = f(xn);
    }
    if (std::abs(xn - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
      x = xn;
      break;
    }
    x = xn;
    fx = fn;
  }
  return std::max(x, 0.0);
}

}  // namespace detail

// All stationary solutions, sorted by ascending occupancy. Roots of the
// occupancy cubic are polished and converted back to complex amplitudes via
//   alpha = sqrt(kappa) alpha_in / (kappa/2 + s kappa_n x - i delta).
inline std::vector<SteadyStateSolution> solve_steady_state(const ModelParams& p) {
  const auto c = cubic_coefficients(p);
  const double s = branch_sign(p.branch);
  auto raw = detail::solve_cubic_real(c[0], c[1], c[2], c[3]);

  std::vector<double> xs;
  for (double x : raw) {
    if (x < -1e-9 * std::max(1.0, std::abs(x))) continue;
    xs.push_back(detail::polish_occupancy(p, x));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> dedup;
  for (double x : xs) {
    if (!dedup.empty() && std::abs(x - dedup.back()) <= 1e-9 * std::max(x, dedup.back()))
      continue;
    dedup.push_back(x);
  }

  std::vector<SteadyStateSolution> out;
  for (double x : dedup) {
    const double d = p.kappa / 2.0 + s * p.kappa_n * x;
    SteadyStateSolution sol;
    sol.alpha = std::sqrt(p.kappa) * p.alpha_in / Complex(d, -p.delta);
    sol.occupancy_x = std::norm(sol.alpha);
    sol.residual = steady_state_residual(p, sol.alpha);
    if (sol.residual > 1e-10)
      throw RootRefinementFailed("steady-state residual " + std::to_string(sol.residual) +
                                 " exceeds 1e-10 after polishing");
    auto [stable, eig] = assess_stability(drift_matrix(p, sol.alpha));
    sol.stable = stable;
    sol.drift_eigenvalues = eig;
    // The inverted-population model loses meaning where its total damping
    // crosses zero; flag the root rather than report a spurious equilibrium.
    if (p.branch == HpBranch::Plus && std::abs(d) < 1e-12) sol.stable = false;
    out.push_back(sol);
  }
  return out;
}

}  // namespace tlsqle
