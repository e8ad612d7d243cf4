#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "tlsqle/errors.hpp"
#include "tlsqle/model.hpp"

namespace tlsqle {

// Frequency-domain coefficients of the linearized fluctuation equations,
//   A a_w + B a^dag_{-w} = noise,   B^* a_w + C a^dag_{-w} = noise^dag,
// with A = -i(w+delta) + kappa/2 + s 2 kappa_n x, B = s kappa_n alpha^2,
// C = -i(w-delta) + kappa/2 + s 2 kappa_n x. C(w) = conj(A(-w)).
struct AbcCoefficients {
  Complex a_coef, b_coef, c_coef;
  double omega;
};

// The four response functions of the intracavity fluctuation at one frequency:
// chi_d drives a_in, chi_x the conjugated bosonic input, chi_d_tls / chi_x_tls
// the TLS inputs. For the Plus branch the TLS noise enters conjugated, so
// chi_d_tls multiplies the conjugated TLS input instead of the direct one; the
// algebraic expressions are unchanged.
struct Susceptibilities {
  Complex chi_d, chi_x, chi_d_tls, chi_x_tls;
  double omega;
};

inline AbcCoefficients abc_coefficients(const ModelParams& p, Complex alpha, double omega) {
  const double s = branch_sign(p.branch);
  const double gamma2 = p.kappa / 2.0 + s * 2.0 * p.kappa_n * std::norm(alpha);
  AbcCoefficients c;
  c.a_coef = Complex(gamma2, -(omega + p.delta));
  c.b_coef = s * p.kappa_n * alpha * alpha;
  c.c_coef = Complex(gamma2, -(omega - p.delta));
  c.omega = omega;
  return c;
}

inline Susceptibilities susceptibilities(const ModelParams& p, Complex alpha, double omega) {
  const auto c = abc_coefficients(p, alpha, omega);
  const Complex det = c.a_coef * c.c_coef - std::norm(c.b_coef);
  if (std::abs(det) < 1e-14)
    throw SingularResponse("response determinant vanishes at omega = " + std::to_string(omega));
  const double sqk = std::sqrt(p.kappa);
  const double sqkn = std::sqrt(p.kappa_n);
  Susceptibilities chi;
  chi.chi_d = sqk * c.c_coef / det;
  chi.chi_x = -sqk * c.b_coef / det;
  chi.chi_d_tls = 2.0 * sqkn * std::conj(alpha) * c.c_coef / det;
  chi.chi_x_tls = -2.0 * sqkn * alpha * c.b_coef / det;
  chi.omega = omega;
  return chi;
}

// Independent route to the same four numbers: assemble the 2x2 system and
// solve it numerically for each noise injection. Kept separate from the
// closed form so the two can be checked against each other.
inline Susceptibilities susceptibilities_from_solve(const ModelParams& p, Complex alpha,
                                                    double omega) {
  const auto c = abc_coefficients(p, alpha, omega);
  Eigen::Matrix2cd m;
  m << c.a_coef, c.b_coef, std::conj(c.b_coef), c.c_coef;
  const Complex det = c.a_coef * c.c_coef - std::norm(c.b_coef);
  if (std::abs(det) < 1e-14)
    throw SingularResponse("response determinant vanishes at omega = " + std::to_string(omega));
  Eigen::PartialPivLU<Eigen::Matrix2cd> lu(m);
  const double sqk = std::sqrt(p.kappa);
  const double sqkn = std::sqrt(p.kappa_n);
  Susceptibilities chi;
  chi.chi_d = lu.solve(Eigen::Vector2cd(sqk, 0.0))(0);
  chi.chi_x = lu.solve(Eigen::Vector2cd(0.0, sqk))(0);
  chi.chi_d_tls = lu.solve(Eigen::Vector2cd(2.0 * sqkn * std::conj(alpha), 0.0))(0);
  chi.chi_x_tls = lu.solve(Eigen::Vector2cd(0.0, 2.0 * sqkn * alpha))(0);
  chi.omega = omega;
  return chi;
}

// Total damping rate of the linearized fluctuations, kappa +- 4 kappa_n |alpha|^2
// (twice the real part of the diagonal drift). Negative for the Plus branch
// past the parametric instability; callers check stability first.
inline double effective_linewidth(const ModelParams& p, Complex alpha) {
  return p.kappa + branch_sign(p.branch) * 4.0 * p.kappa_n * std::norm(alpha);
}

}  // namespace tlsqle
