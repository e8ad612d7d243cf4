#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "tlsqle/errors.hpp"
#include "tlsqle/linear_response.hpp"
#include "tlsqle/model.hpp"

namespace tlsqle {

// One evaluation of the symmetrized quadrature noise spectrum.
struct SpectrumSample {
  double omega = 0.0;
  double theta = 0.0;
  double value = 0.0;
  bool valid = true;
};

// Extremal quadratures of the spectrum at fixed frequency. phi and phi_tls are
// the arguments of the two parametric cross terms; when the parametric term
// vanishes the spectrum is flat in theta and flat is set.
struct SpectrumExtrema {
  double theta_min = 0.0, theta_max = 0.0;
  double s_min = 0.0, s_max = 0.0;
  double phi = 0.0, phi_tls = 0.0;
  bool flat = false;
};

namespace detail {

// theta-independent pieces of the spectrum at one frequency: the base level
// and the complex amplitude W of the cos(2 theta) modulation,
//   S(theta) = base + Re(e^{-2 i theta} W).
struct SpectrumParts {
  double base;
  Complex w;        // (n_th + 1/2) Z_b + (n_th_tls + 1/2) Z_t
  Complex z_bos;    // chi_d(w) chi_x(-w) + chi_d(-w) chi_x(w)
  Complex z_tls;    // TLS counterpart
};

inline SpectrumParts spectrum_parts(const ModelParams& p, Complex alpha, double omega) {
  const auto cp = susceptibilities(p, alpha, omega);
  const auto cm = susceptibilities(p, alpha, -omega);
  const double wb = p.n_th + 0.5;
  const double wt = p.n_th_tls + 0.5;
  SpectrumParts parts;
  parts.z_bos = cp.chi_d * cm.chi_x + cm.chi_d * cp.chi_x;
  parts.z_tls = cp.chi_d_tls * cm.chi_x_tls + cm.chi_d_tls * cp.chi_x_tls;
  const double sum_bos = std::norm(cp.chi_d) + std::norm(cm.chi_d) +
                         std::norm(cp.chi_x) + std::norm(cm.chi_x);
  const double sum_tls = std::norm(cp.chi_d_tls) + std::norm(cm.chi_d_tls) +
                         std::norm(cp.chi_x_tls) + std::norm(cm.chi_x_tls);
  parts.base = 0.5 * wb * sum_bos + 0.5 * wt * sum_tls;
  parts.w = wb * parts.z_bos + wt * parts.z_tls;
  return parts;
}

}  // namespace detail

// Symmetrized spectrum of the quadrature (a^dag e^{i theta} + a e^{-i theta})/sqrt(2):
//   S = 1/2 [ sum |chi|^2 + 2 Re(e^{-2 i theta} Z) ] (n + 1/2)  per bath.
inline double quadrature_spectrum(const ModelParams& p, Complex alpha, double omega,
                                  double theta) {
  const auto parts = detail::spectrum_parts(p, alpha, omega);
  return parts.base + (std::polar(1.0, -2.0 * theta) * parts.w).real();
}

// Independent evaluation: solve the 2x2 fluctuation system numerically for the
// linear maps from the four noise inputs, form the quadrature, and contract
// with the symmetrized bath correlators. The Plus branch routes the TLS noise
// through the conjugated input channel.
inline double spectrum_oracle(const ModelParams& p, Complex alpha, double omega, double theta) {
  using Eigen::Matrix2cd;
  using RowVec4 = Eigen::Matrix<Complex, 1, 4>;
  const double sqk = std::sqrt(p.kappa);
  const double sqkn = std::sqrt(p.kappa_n);

  // channels: (a_in, a_in^dag, tls_in, tls_in^dag)
  Eigen::Matrix<Complex, 2, 4> rhs = Eigen::Matrix<Complex, 2, 4>::Zero();
  rhs(0, 0) = sqk;
  rhs(1, 1) = sqk;
  if (p.branch == HpBranch::Minus) {
    rhs(0, 2) = 2.0 * sqkn * std::conj(alpha);
    rhs(1, 3) = 2.0 * sqkn * alpha;
  } else {
    rhs(0, 3) = 2.0 * sqkn * std::conj(alpha);
    rhs(1, 2) = 2.0 * sqkn * alpha;
  }

  auto weight_row = [&](double w) -> RowVec4 {
    const auto c = abc_coefficients(p, alpha, w);
    if (std::abs(c.a_coef * c.c_coef - std::norm(c.b_coef)) < 1e-14)
      throw SingularResponse("response determinant vanishes at omega = " + std::to_string(w));
    Matrix2cd m;
    m << c.a_coef, c.b_coef, std::conj(c.b_coef), c.c_coef;
    Eigen::Matrix<Complex, 2, 4> g = m.partialPivLu().solve(rhs);
    const Complex em = std::polar(1.0, -theta), ep = std::polar(1.0, theta);
    return (em * g.row(0) + ep * g.row(1)) / std::sqrt(2.0);
  };

  const RowVec4 wp = weight_row(omega);
  const RowVec4 wm = weight_row(-omega);
  const Complex s = 0.5 * (2.0 * p.n_th + 1.0) * (wp(0) * wm(1) + wp(1) * wm(0)) +
                    0.5 * (2.0 * p.n_th_tls + 1.0) * (wp(2) * wm(3) + wp(3) * wm(2));
  return s.real();
}

// Extremal quadratures at one frequency, located by a 720-point scan over
// [0, pi) refined by golden-section search to 1e-10 in theta.
inline SpectrumExtrema spectrum_extrema(const ModelParams& p, Complex alpha, double omega) {
  const auto parts = detail::spectrum_parts(p, alpha, omega);
  SpectrumExtrema ex;
  ex.phi = (std::abs(parts.z_bos) > 0.0) ? std::arg(parts.z_bos) : 0.0;
  ex.phi_tls = (std::abs(parts.z_tls) > 0.0) ? std::arg(parts.z_tls) : 0.0;
  if (std::abs(parts.w) <= 1e-15 * std::max(parts.base, 1e-300)) {
    ex.flat = true;
    ex.s_min = ex.s_max = parts.base;
    ex.theta_min = ex.theta_max = 0.0;
    ex.phi = std::abs(parts.z_bos) > 0.0 ? ex.phi : 0.0;
    return ex;
  }

  auto value = [&](double th) {
    return parts.base + (std::polar(1.0, -2.0 * th) * parts.w).real();
  };
  const int n = 720;
  int imin = 0, imax = 0;
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (int i = 0; i < n; ++i) {
    const double v = value(kPi * i / n);
    if (v < vmin) { vmin = v; imin = i; }
    if (v > vmax) { vmax = v; imax = i; }
  }
  auto golden = [&](int icenter, double sign) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = kPi * (icenter - 1) / n, b = kPi * (icenter + 1) / n;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    while (b - a > 1e-10) {
      if (sign * value(c) < sign * value(d)) b = d;
      else a = c;
      c = b - gr * (b - a);
      d = a + gr * (b - a);
    }
    double th = 0.5 * (a + b);
    th = std::fmod(th, kPi);
    if (th < 0.0) th += kPi;
    return th;
  };
  ex.theta_min = golden(imin, +1.0);
  ex.theta_max = golden(imax, -1.0);
  ex.s_min = value(ex.theta_min);
  ex.s_max = value(ex.theta_max);
  return ex;
}

// Row-major table of spectrum values over an omega x theta grid. Frequencies
// where the response is singular are kept in the table but marked invalid.
inline std::vector<SpectrumSample> spectrum_grid(const ModelParams& p, Complex alpha,
                                                 const std::vector<double>& omega_grid,
                                                 const std::vector<double>& theta_grid) {
  if (omega_grid.empty() || theta_grid.empty())
    throw UsageError("spectrum grid must be non-empty");
  std::vector<SpectrumSample> out;
  out.reserve(omega_grid.size() * theta_grid.size());
  for (double w : omega_grid) {
    bool row_ok = true;
    detail::SpectrumParts parts{};
    try {
      parts = detail::spectrum_parts(p, alpha, w);
    } catch (const SingularResponse&) {
      row_ok = false;
    }
    for (double th : theta_grid) {
      SpectrumSample s;
      s.omega = w;
      s.theta = th;
      if (row_ok) {
        s.value = parts.base + (std::polar(1.0, -2.0 * th) * parts.w).real();
      } else {
        s.value = std::numeric_limits<double>::quiet_NaN();
        s.valid = false;
      }
      out.push_back(s);
    }
  }
  return out;
}

// Full width at half maximum of a single-peaked trace at fixed theta, above a
// baseline taken as the median of the outer 10% of the samples. Half-max
// crossings are located by linear interpolation.
inline double fitted_linewidth(const std::vector<SpectrumSample>& trace) {
  if (trace.size() < 8) throw UnresolvedPeak("trace too short");
  std::vector<double> w(trace.size()), v(trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    if (!trace[i].valid) throw NoPeak("trace contains invalid samples");
    w[i] = trace[i].omega;
    v[i] = trace[i].value;
  }

  const size_t edge = std::max<size_t>(1, trace.size() / 20);
  std::vector<double> outer;
  outer.insert(outer.end(), v.begin(), v.begin() + edge);
  outer.insert(outer.end(), v.end() - edge, v.end());
  std::nth_element(outer.begin(), outer.begin() + outer.size() / 2, outer.end());
  const double baseline = outer[outer.size() / 2];

  size_t ipk = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[ipk]) ipk = i;
  const double peak = v[ipk];
  if (!(peak > 2.0 * baseline)) throw NoPeak("maximum does not exceed twice the baseline");
  const double half = baseline + 0.5 * (peak - baseline);

  size_t lo = ipk, hi = ipk, above = 1;
  while (lo > 0 && v[lo - 1] > half) { --lo; ++above; }
  while (hi + 1 < v.size() && v[hi + 1] > half) { ++hi; ++above; }
  if (above < 10) throw UnresolvedPeak("fewer than 10 samples above half maximum");
  if (lo == 0 || hi + 1 >= v.size()) throw UnresolvedPeak("peak not resolved within the trace");

  const double wl = w[lo - 1] + (half - v[lo - 1]) * (w[lo] - w[lo - 1]) / (v[lo] - v[lo - 1]);
  const double wr = w[hi] + (half - v[hi]) * (w[hi + 1] - w[hi]) / (v[hi + 1] - v[hi]);
  return wr - wl;
}

}  // namespace tlsqle
