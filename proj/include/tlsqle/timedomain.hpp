#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "tlsqle/errors.hpp"
#include "tlsqle/linear_response.hpp"
#include "tlsqle/model.hpp"
#include "tlsqle/rng.hpp"
#include "tlsqle/steady_state.hpp"

namespace tlsqle {

enum class Scheme { EulerMaruyama, StratonovichMidpoint };

struct IntegrationConfig {
  double dt = 1e-3;          // step, units of 1/kappa
  double t_total = 100.0;
  int n_traj = 1;
  uint64_t seed = 0;
  Scheme scheme = Scheme::EulerMaruyama;
  int sample_stride = 1;     // record every stride-th step
  bool noise_enabled = true; // test mode: false forces all noise amplitudes to 0
  Complex initial{0.0, 0.0};
};

// Time-sampled complex trajectories sharing one time grid.
struct TrajectoryEnsemble {
  std::vector<double> times;
  std::vector<std::vector<Complex>> samples;  // [trajectory][time index]
  uint64_t seed_used = 0;
};

namespace detail {

inline void check_config(const IntegrationConfig& cfg, double fastest_scale) {
  if (!(cfg.dt > 0.0) || !(cfg.t_total > 0.0) || cfg.n_traj < 1 || cfg.sample_stride < 1)
    throw UsageError("integration config requires dt > 0, t_total > 0, n_traj >= 1, stride >= 1");
  if (cfg.dt > 0.01 / fastest_scale * (1.0 + 1e-12))
    throw StepTooLarge("dt exceeds 0.01 / max(kappa_eff, |delta|)");
}

// Solve z - h (m00 z + m01 conj(z)) = r for z: the implicit half of the
// trapezoidal step, done in closed form for the conjugate-linear 2x2 system.
struct ConjLinearSolver {
  Complex p00, p01;  // z = p00 r + p01 conj(r)
  ConjLinearSolver(Complex m00, Complex m01, double h) {
    const Complex a = 1.0 - h * m00;
    const Complex b = -h * m01;
    const Complex den = a * std::conj(a) - b * std::conj(b);
    p00 = std::conj(a) / den;
    p01 = -b / den;
  }
  Complex apply(Complex r) const { return p00 * r + p01 * std::conj(r); }
};

}  // namespace detail

inline TrajectoryEnsemble discard_transient(const TrajectoryEnsemble& e, double t_burn) {
  size_t start = 0;
  while (start < e.times.size() && e.times[start] < t_burn) ++start;
  TrajectoryEnsemble out;
  out.seed_used = e.seed_used;
  out.times.assign(e.times.begin() + start, e.times.end());
  out.samples.reserve(e.samples.size());
  for (const auto& tr : e.samples)
    out.samples.emplace_back(tr.begin() + start, tr.end());
  return out;
}

// Integrates the linearized fluctuation dynamics around a stable stationary
// amplitude:
//   da = (m00 a + m01 a*) dt + sqrt(kappa) dW + 2 sqrt(kappa_n) alpha* dW_tls,
// with the Plus branch receiving the conjugated TLS increment. Each complex
// noise increment has independent components of variance (n + 1/2) dt / 2, so
// the ensemble reproduces symmetrized spectra. Deterministic for a fixed seed.
inline TrajectoryEnsemble integrate_linearized(const ModelParams& p, Complex alpha,
                                               const IntegrationConfig& cfg) {
  const DriftMatrix m = drift_matrix(p, alpha);
  const auto [stable, eig] = assess_stability(m);
  if (!stable) throw UnstableSteadyState("linearization point is not stable");
  const double keff = effective_linewidth(p, alpha);
  detail::check_config(cfg, std::max(keff, std::abs(p.delta)));

  const int nsteps = static_cast<int>(std::llround(cfg.t_total / cfg.dt));
  const int nsamples = nsteps / cfg.sample_stride + 1;
  const double sig_b = cfg.noise_enabled ? std::sqrt((p.n_th + 0.5) * cfg.dt / 2.0) : 0.0;
  const double sig_t = cfg.noise_enabled ? std::sqrt((p.n_th_tls + 0.5) * cfg.dt / 2.0) : 0.0;
  const Complex gain_b = std::sqrt(p.kappa);
  const Complex gain_t = 2.0 * std::sqrt(p.kappa_n) * std::conj(alpha);
  const bool conj_tls = (p.branch == HpBranch::Plus);

  const detail::ConjLinearSolver solver(m.m00, m.m01, cfg.dt / 2.0);
  const double h = cfg.dt / 2.0;

  TrajectoryEnsemble ens;
  ens.seed_used = cfg.seed;
  ens.times.resize(nsamples);
  for (int k = 0; k < nsamples; ++k) ens.times[k] = k * cfg.sample_stride * cfg.dt;
  ens.samples.assign(cfg.n_traj, {});

  for (int traj = 0; traj < cfg.n_traj; ++traj) {
    GaussianStream rng(splitmix64(cfg.seed + static_cast<uint64_t>(traj)));
    auto& rec = ens.samples[traj];
    rec.resize(nsamples);
    Complex a = cfg.initial;
    rec[0] = a;
    int isample = 1;
    for (int step = 1; step <= nsteps; ++step) {
      Complex wt = rng.next_complex(sig_t);
      if (conj_tls) wt = std::conj(wt);
      const Complex xi = gain_b * rng.next_complex(sig_b) + gain_t * wt;
      if (cfg.scheme == Scheme::EulerMaruyama) {
        a += (m.m00 * a + m.m01 * std::conj(a)) * cfg.dt + xi;
      } else {
        const Complex r = a + h * (m.m00 * a + m.m01 * std::conj(a)) + xi;
        a = solver.apply(r);
      }
      if (step % cfg.sample_stride == 0) rec[isample++] = a;
    }
    rec.resize(isample);
  }
  const size_t n0 = ens.samples[0].size();
  ens.times.resize(n0);
  return ens;
}

// Integrates the full c-number Langevin equation including the nonlinear
// damping and the multiplicative TLS noise 2 sqrt(kappa_n) c* dW_tls:
//   dc = [i delta c - (kappa/2 + s kappa_n |c|^2) c + sqrt(kappa) alpha_in] dt + noise.
// A semiclassical approximation: operator ordering is discarded. The
// multiplicative noise requires the midpoint (Stratonovich) scheme.
inline TrajectoryEnsemble integrate_nonlinear_semiclassical(const ModelParams& p,
                                                            const IntegrationConfig& cfg) {
  if (cfg.scheme != Scheme::StratonovichMidpoint)
    throw UnsupportedScheme("nonlinear integrator requires the Stratonovich midpoint scheme");
  double fastest = std::max(p.kappa, std::abs(p.delta));
  for (const auto& sol : solve_steady_state(p))
    if (sol.stable) fastest = std::max(fastest, effective_linewidth(p, sol.alpha));
  detail::check_config(cfg, fastest);

  const double s = branch_sign(p.branch);
  const int nsteps = static_cast<int>(std::llround(cfg.t_total / cfg.dt));
  const int nsamples = nsteps / cfg.sample_stride + 1;
  const double sig_b = cfg.noise_enabled ? std::sqrt((p.n_th + 0.5) * cfg.dt / 2.0) : 0.0;
  const double sig_t = cfg.noise_enabled ? std::sqrt((p.n_th_tls + 0.5) * cfg.dt / 2.0) : 0.0;
  const Complex drive = std::sqrt(p.kappa) * p.alpha_in;
  const double sqkn2 = 2.0 * std::sqrt(p.kappa_n);
  const bool conj_tls = (p.branch == HpBranch::Plus);

  auto drift = [&](Complex c) {
    return Complex(0.0, p.delta) * c - (p.kappa / 2.0 + s * p.kappa_n * std::norm(c)) * c + drive;
  };

  TrajectoryEnsemble ens;
  ens.seed_used = cfg.seed;
  ens.times.resize(nsamples);
  for (int k = 0; k < nsamples; ++k) ens.times[k] = k * cfg.sample_stride * cfg.dt;
  ens.samples.assign(cfg.n_traj, {});

  for (int traj = 0; traj < cfg.n_traj; ++traj) {
    GaussianStream rng(splitmix64(cfg.seed + static_cast<uint64_t>(traj)));
    auto& rec = ens.samples[traj];
    rec.resize(nsamples);
    Complex c = cfg.initial;
    rec[0] = c;
    int isample = 1;
    for (int step = 1; step <= nsteps; ++step) {
      const Complex wb = rng.next_complex(sig_b);
      Complex wt = rng.next_complex(sig_t);
      if (conj_tls) wt = std::conj(wt);
      // midpoint fixed point, noise increments held fixed across iterations
      Complex cm = c;
      for (int it = 0; it < 4; ++it) {
        const Complex incr = drift(cm) * cfg.dt + std::sqrt(p.kappa) * wb +
                             sqkn2 * std::conj(cm) * wt;
        cm = c + 0.5 * incr;
      }
      c = 2.0 * cm - c;
      if (!(std::abs(c) < 1e6))
        throw Divergence("field exceeded 1e6 at t = " + std::to_string(step * cfg.dt) +
                         " (parametric runaway)");
      if (step % cfg.sample_stride == 0) rec[isample++] = c;
    }
    rec.resize(isample);
  }
  const size_t n0 = ens.samples[0].size();
  ens.times.resize(n0);
  return ens;
}

}  // namespace tlsqle
