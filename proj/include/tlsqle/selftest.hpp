#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tlsqle/hp_validation.hpp"
#include "tlsqle/linear_response.hpp"
#include "tlsqle/model.hpp"
#include "tlsqle/rng.hpp"
#include "tlsqle/spectrum.hpp"
#include "tlsqle/steady_state.hpp"
#include "tlsqle/timedomain.hpp"
#include "tlsqle/welch.hpp"

namespace tlsqle {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace selftest_detail {

inline double rel_dev(Complex a, Complex b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

// Uniform double in [lo, hi) from a gaussian-free uniform stream.
class UniformStream {
 public:
  explicit UniformStream(uint64_t seed) : engine_(seed) {}
  double next(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
  }
  bool coin() { return (engine_() & 1ull) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Random stable, well-conditioned operating point. Draws are rejected when no
// stable root exists, the damping margin is thin, or the response matrix is
// close to singular at the probe frequencies (either situation amplifies
// roundoff in both evaluation routes and makes tight agreement checks
// meaningless).
struct Draw {
  ModelParams params;
  Complex alpha;
  double omega;
};

inline Draw random_stable_draw(UniformStream& u) {
  for (;;) {
    ModelParams p;
    p.kappa = 1.0;
    p.kappa_n = std::pow(10.0, u.next(-6.0, -3.0));
    p.delta = (u.coin() ? 1.0 : -1.0) * u.next(5.0, 30.0);
    p.alpha_in = std::polar(u.next(0.0, 900.0), u.next(0.0, 2.0 * kPi));
    p.n_th = u.next(0.0, 3.0);
    p.n_th_tls = u.next(0.0, 3.0);
    p.branch = u.coin() ? HpBranch::Minus : HpBranch::Plus;
    p = validate_params(p);

    const auto sols = solve_steady_state(p);
    const SteadyStateSolution* stable = nullptr;
    for (const auto& s : sols)
      if (s.stable) { stable = &s; break; }
    if (!stable) continue;
    const double gamma2 = p.kappa / 2.0 +
                          branch_sign(p.branch) * 2.0 * p.kappa_n * stable->occupancy_x;
    if (gamma2 < 0.05) continue;

    const double omega = u.next(-40.0, 40.0);
    bool conditioned = true;
    for (double w : {omega, -omega}) {
      const auto c = abc_coefficients(p, stable->alpha, w);
      const Complex det = c.a_coef * c.c_coef - std::norm(c.b_coef);
      const double scale = std::abs(c.a_coef) * std::abs(c.c_coef) + std::norm(c.b_coef);
      if (std::abs(det) < 1e-3 * scale) conditioned = false;
    }
    if (!conditioned) continue;
    return {p, stable->alpha, omega};
  }
}

inline ModelParams fig_params(HpBranch b, double alpha_in = 700.0, double n_th = 0.0,
                              double n_tls = 0.0) {
  ModelParams p;
  p.kappa = 1.0;
  p.kappa_n = 1.5e-4;
  p.delta = 20.0;
  p.alpha_in = alpha_in;
  p.n_th = n_th;
  p.n_th_tls = n_tls;
  p.branch = b;
  return validate_params(p);
}

}  // namespace selftest_detail

// Runs the library's invariant suite: every module property that can be
// machine-checked quickly, packaged as a user-facing self-test.
inline std::vector<CheckResult> run_selftest(uint64_t seed = 20200527ull) {
  using namespace selftest_detail;
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty string = pass
      r.pass = r.detail.empty();
      if (r.pass) r.detail = "ok";
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(r);
  };
  auto fail_if = [](bool bad, const std::string& msg) { return bad ? msg : std::string(); };

  // --- model -----------------------------------------------------------
  check("model.normalization_idempotence", [&] {
    ModelParams raw;
    raw.kappa = 2.0; raw.kappa_n = 3e-4; raw.delta = 40.0;
    raw.alpha_in = Complex(990.0, -1.5); raw.n_th = 1.0; raw.n_th_tls = 0.5;
    const auto once = validate_params(raw);
    const auto twice = validate_params(once);
    return fail_if(!(once == twice) || once.kappa_unit != twice.kappa_unit,
                   "validate o validate differs from validate");
  });

  check("model.kappa_rescale_invariance", [&] {
    // rescale by 4 so sqrt(kappa) = 2 keeps the drive rescale exact in floats
    ModelParams a; a.kappa = 1.0; a.kappa_n = 1.5e-4; a.delta = 20.0; a.alpha_in = 700.0;
    ModelParams b = a; b.kappa = 4.0; b.kappa_n *= 4.0; b.delta *= 4.0; b.alpha_in *= 2.0;
    const auto pa = validate_params(a), pb = validate_params(b);
    const auto ra = solve_steady_state(pa), rb = solve_steady_state(pb);
    if (ra.size() != rb.size()) return std::string("root counts differ across rescale");
    for (size_t i = 0; i < ra.size(); ++i)
      if (ra[i].alpha != rb[i].alpha || ra[i].occupancy_x != rb[i].occupancy_x)
        return std::string("dimensionless steady state changed under kappa rescale");
    return std::string();
  });

  // --- steady state ------------------------------------------------------
  check("steady.residual_bound", [&] {
    UniformStream u(splitmix64(seed ^ 0x11));
    for (int i = 0; i < 200; ++i) {
      ModelParams p;
      p.kappa_n = std::pow(10.0, u.next(-6.0, -2.0));
      p.delta = u.next(-30.0, 30.0);
      p.alpha_in = std::polar(u.next(0.0, 900.0), u.next(0.0, 2.0 * kPi));
      p.branch = u.coin() ? HpBranch::Minus : HpBranch::Plus;
      for (const auto& s : solve_steady_state(validate_params(p)))
        if (s.residual > 1e-10) return std::string("residual above 1e-10");
    }
    return std::string();
  });

  check("steady.monotone_occupancy_minus", [&] {
    const auto base = fig_params(HpBranch::Minus);
    double prev = -1.0;
    for (double a : linspace(0.0, 700.0, 100)) {
      ModelParams p = base;
      p.alpha_in = a;
      const auto sols = solve_steady_state(p);
      if (sols.size() != 1) return std::string("ground-state branch must have one root");
      if (sols[0].occupancy_x < prev - 1e-12) return std::string("occupancy not monotone");
      prev = sols[0].occupancy_x;
    }
    return std::string();
  });

  check("steady.linear_reduction", [&] {
    UniformStream u(splitmix64(seed ^ 0x12));
    for (int i = 0; i < 100; ++i) {
      ModelParams p;
      p.delta = u.next(-30.0, 30.0);
      p.alpha_in = std::polar(u.next(0.0, 900.0), u.next(0.0, 2.0 * kPi));
      p.branch = u.coin() ? HpBranch::Minus : HpBranch::Plus;
      p = validate_params(p);
      const auto sols = solve_steady_state(p);
      const Complex expect = std::sqrt(p.kappa) * p.alpha_in / Complex(p.kappa / 2.0, -p.delta);
      if (sols.size() != 1 || rel_dev(sols[0].alpha, expect) > 1e-12)
        return std::string("linear-cavity amplitude mismatch");
      if (!sols[0].stable) return std::string("linear root must be stable");
    }
    return std::string();
  });

  check("steady.kn0_root_unique_and_stable", [&] {
    for (double delta : {-7.0, 0.0, 13.0})
      for (double a : {0.0, 3.0, 500.0}) {
        ModelParams p;
        p.delta = delta;
        p.alpha_in = a;
        const auto sols = solve_steady_state(validate_params(p));
        if (sols.size() != 1 || !sols[0].stable) return std::string("kn=0 root not unique/stable");
      }
    return std::string();
  });

  // --- linear response ---------------------------------------------------
  check("response.oracle_agreement_1000", [&] {
    UniformStream u(splitmix64(seed ^ 0x21));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto d = random_stable_draw(u);
      const auto closed = susceptibilities(d.params, d.alpha, d.omega);
      const auto numeric = susceptibilities_from_solve(d.params, d.alpha, d.omega);
      worst = std::max({worst, rel_dev(closed.chi_d, numeric.chi_d),
                        rel_dev(closed.chi_x, numeric.chi_x),
                        rel_dev(closed.chi_d_tls, numeric.chi_d_tls),
                        rel_dev(closed.chi_x_tls, numeric.chi_x_tls)});
    }
    std::ostringstream os;
    os << "worst relative deviation " << worst;
    return fail_if(worst > 1e-12, os.str());
  });

  check("response.conjugation_symmetry", [&] {
    UniformStream u(splitmix64(seed ^ 0x22));
    for (int i = 0; i < 10; ++i) {
      const auto d = random_stable_draw(u);
      const auto cp = abc_coefficients(d.params, d.alpha, d.omega);
      const auto cm = abc_coefficients(d.params, d.alpha, -d.omega);
      if (rel_dev(cp.c_coef, std::conj(cm.a_coef)) > 1e-14)
        return std::string("C(w) != conj(A(-w))");
    }
    return std::string();
  });

  check("response.tls_identity", [&] {
    UniformStream u(splitmix64(seed ^ 0x23));
    for (int i = 0; i < 50; ++i) {
      const auto d = random_stable_draw(u);
      const auto chi = susceptibilities(d.params, d.alpha, d.omega);
      const Complex lhs = chi.chi_d_tls * std::sqrt(d.params.kappa);
      const Complex rhs = 2.0 * std::sqrt(d.params.kappa_n) * std::conj(d.alpha) * chi.chi_d;
      if (rel_dev(lhs, rhs) > 1e-13) return std::string("TLS/bosonic susceptibility ratio broken");
    }
    return std::string();
  });

  check("response.pole_placement", [&] {
    UniformStream u(splitmix64(seed ^ 0x24));
    for (int i = 0; i < 3; ++i) {
      const auto d = random_stable_draw(u);
      const auto [stable, eig] = assess_stability(drift_matrix(d.params, d.alpha));
      (void)stable;
      const double s = branch_sign(d.params.branch);
      const double g2 =
          d.params.kappa / 2.0 + s * 2.0 * d.params.kappa_n * std::norm(d.alpha);
      const Complex b = s * d.params.kappa_n * d.alpha * d.alpha;
      for (const Complex& lambda : eig) {
        const Complex w = Complex(0, 1) * lambda;  // zero of the determinant
        const Complex a_c = Complex(g2, 0.0) - Complex(0, 1) * (w + d.params.delta);
        const Complex c_c = Complex(g2, 0.0) - Complex(0, 1) * (w - d.params.delta);
        const Complex det = a_c * c_c - std::norm(b);
        const double scale = std::abs(a_c) * std::abs(c_c) + std::norm(b) + 1.0;
        if (std::abs(det) > 1e-9 * scale) return std::string("determinant zero misplaced");
      }
    }
    return std::string();
  });

  check("response.linear_limit", [&] {
    UniformStream u(splitmix64(seed ^ 0x25));
    for (int i = 0; i < 100; ++i) {
      ModelParams p;
      p.delta = u.next(-30.0, 30.0);
      p.alpha_in = u.next(0.0, 900.0);
      p = validate_params(p);
      const Complex alpha = solve_steady_state(p)[0].alpha;
      const double w = u.next(-40.0, 40.0);
      const auto chi = susceptibilities(p, alpha, w);
      const Complex lorentzian =
          std::sqrt(p.kappa) / Complex(p.kappa / 2.0, -(w + p.delta));
      if (rel_dev(chi.chi_d, lorentzian) > 1e-12 || std::abs(chi.chi_x) != 0.0 ||
          std::abs(chi.chi_d_tls) != 0.0 || std::abs(chi.chi_x_tls) != 0.0)
        return std::string("kn=0 susceptibilities not in the linear limit");
    }
    return std::string();
  });

  check("response.keff_branch_sum", [&] {
    const auto pm = fig_params(HpBranch::Minus);
    const auto pp = fig_params(HpBranch::Plus);
    for (double a : linspace(0.0, 700.0, 30)) {
      ModelParams m = pm, p = pp;
      m.alpha_in = a; p.alpha_in = a;
      const Complex am = solve_steady_state(m)[0].alpha;
      // matched occupancy: evaluate the Plus linewidth at the Minus amplitude
      const double sum = effective_linewidth(m, am) + effective_linewidth(p, am);
      if (std::abs(sum - 2.0 * m.kappa) > 1e-12) return std::string("keff sum != 2 kappa");
    }
    return std::string();
  });

  // --- spectrum ----------------------------------------------------------
  check("spectrum.oracle_agreement_1000", [&] {
    UniformStream u(splitmix64(seed ^ 0x31));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto d = random_stable_draw(u);
      const double th = u.next(0.0, kPi);
      const double s1 = quadrature_spectrum(d.params, d.alpha, d.omega, th);
      const double s2 = spectrum_oracle(d.params, d.alpha, d.omega, th);
      worst = std::max(worst, std::abs(s1 - s2) / std::max({std::abs(s1), std::abs(s2), 1e-300}));
    }
    std::ostringstream os;
    os << "worst relative deviation " << worst;
    return fail_if(worst > 1e-12, os.str());
  });

  check("spectrum.theta_periodicity", [&] {
    UniformStream u(splitmix64(seed ^ 0x32));
    for (int i = 0; i < 200; ++i) {
      const auto d = random_stable_draw(u);
      const double th = u.next(0.0, kPi);
      const double s1 = quadrature_spectrum(d.params, d.alpha, d.omega, th);
      const double s2 = quadrature_spectrum(d.params, d.alpha, d.omega, th + kPi);
      const auto parts = detail::spectrum_parts(d.params, d.alpha, d.omega);
      if (std::abs(s1 - s2) > 1e-12 * std::max(1.0, parts.base))
        return std::string("S(theta) != S(theta+pi)");
    }
    return std::string();
  });

  check("spectrum.positivity_and_floor", [&] {
    UniformStream u(splitmix64(seed ^ 0x33));
    for (int i = 0; i < 300; ++i) {
      const auto d = random_stable_draw(u);
      const double th = u.next(0.0, kPi);
      if (quadrature_spectrum(d.params, d.alpha, d.omega, th) < 0.0)
        return std::string("negative spectrum value");
      // vacuum floor at zero occupancy
      ModelParams p0 = d.params;
      p0.n_th = 0.0;
      p0.n_th_tls = 0.0;
      if (quadrature_spectrum(p0, d.alpha, d.omega, th) < 0.0)
        return std::string("negative vacuum spectrum");
    }
    return std::string();
  });

  check("spectrum.affine_in_occupancy", [&] {
    UniformStream u(splitmix64(seed ^ 0x34));
    for (int i = 0; i < 100; ++i) {
      const auto d = random_stable_draw(u);
      const double th = u.next(0.0, kPi);
      auto at = [&](double nth, double ntls) {
        ModelParams p = d.params;
        p.n_th = nth;
        p.n_th_tls = ntls;
        return quadrature_spectrum(p, d.alpha, d.omega, th);
      };
      const double s0 = at(0.0, 1.0), s1 = at(1.0, 1.0), s2 = at(2.0, 1.0);
      if (std::abs(s2 - 2.0 * s1 + s0) > 1e-10 * std::max(1.0, std::abs(s2)))
        return std::string("spectrum not affine in n_th");
      if (s1 < s0 || s2 < s1) return std::string("spectrum not increasing in n_th");
      const double t0 = at(1.0, 0.0), t2 = at(1.0, 2.0);
      if (t2 < t0) return std::string("spectrum not increasing in n_th_tls");
    }
    return std::string();
  });

  check("spectrum.linear_flatness", [&] {
    UniformStream u(splitmix64(seed ^ 0x35));
    for (int i = 0; i < 50; ++i) {
      ModelParams p;
      p.delta = u.next(-30.0, 30.0);
      p.alpha_in = u.next(0.0, 900.0);
      p.n_th = u.next(0.0, 2.0);
      p = validate_params(p);
      const Complex alpha = solve_steady_state(p)[0].alpha;
      const double w = u.next(-40.0, 40.0);
      const auto ex = spectrum_extrema(p, alpha, w);
      if (!ex.flat || std::abs(ex.s_max - ex.s_min) > 1e-12 * std::max(1.0, ex.s_max))
        return std::string("kn=0 spectrum is not flat in theta");
      if (ex.phi != 0.0) return std::string("flat spectrum must report phi = 0");
    }
    return std::string();
  });

  check("spectrum.extrema_match_scan", [&] {
    UniformStream u(splitmix64(seed ^ 0x36));
    for (int i = 0; i < 50; ++i) {
      const auto d = random_stable_draw(u);
      const auto ex = spectrum_extrema(d.params, d.alpha, d.omega);
      if (ex.flat) continue;
      // the two cosine terms share one frequency, so the refined extrema must
      // bracket every sampled value
      for (double th : linspace(0.0, kPi, 37)) {
        const double v = quadrature_spectrum(d.params, d.alpha, d.omega, th);
        if (v > ex.s_max + 1e-9 * std::max(1.0, std::abs(ex.s_max)) ||
            v < ex.s_min - 1e-9 * std::max(1.0, std::abs(ex.s_max)))
          return std::string("sampled value escapes refined extrema");
      }
      if (ex.s_max - ex.s_min < 0.0) return std::string("inverted extrema");
    }
    return std::string();
  });

  check("spectrum.contrast_positive_when_pumped", [&] {
    const auto p = fig_params(HpBranch::Minus, 700.0, 1.0, 1.0);
    const Complex alpha = solve_steady_state(p)[0].alpha;
    const auto ex = spectrum_extrema(p, alpha, -p.delta);
    return fail_if(!(ex.s_max - ex.s_min > 0.0), "no theta contrast at the driven point");
  });

  // --- time domain ---------------------------------------------------------
  check("timedomain.deterministic_seeding", [&] {
    const auto p = fig_params(HpBranch::Minus, 100.0, 0.5, 0.5);
    const Complex alpha = solve_steady_state(p)[0].alpha;
    IntegrationConfig cfg;
    cfg.dt = 4e-4;
    cfg.t_total = 2.0;
    cfg.n_traj = 3;
    cfg.seed = 42;
    cfg.scheme = Scheme::StratonovichMidpoint;
    const auto e1 = integrate_linearized(p, alpha, cfg);
    const auto e2 = integrate_linearized(p, alpha, cfg);
    for (int k = 0; k < cfg.n_traj; ++k)
      for (size_t i = 0; i < e1.samples[k].size(); ++i)
        if (e1.samples[k][i] != e2.samples[k][i]) return std::string("ensembles differ");
    return std::string();
  });

  check("timedomain.ou_stationary_variance", [&] {
    ModelParams p;
    p.delta = 2.0;
    p.n_th = 0.7;
    p = validate_params(p);
    IntegrationConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_total = 60.0;
    cfg.n_traj = 100;
    cfg.seed = 7;
    cfg.scheme = Scheme::StratonovichMidpoint;
    const auto ens = discard_transient(integrate_linearized(p, Complex(0, 0), cfg), 10.0);
    double mean = 0.0, m2 = 0.0;
    size_t n = 0;
    std::vector<double> per_traj;
    for (const auto& tr : ens.samples) {
      double acc = 0.0;
      for (const auto& a : tr) acc += std::norm(a);
      per_traj.push_back(acc / tr.size());
      n += tr.size();
    }
    for (double v : per_traj) mean += v;
    mean /= per_traj.size();
    for (double v : per_traj) m2 += (v - mean) * (v - mean);
    const double se = std::sqrt(m2 / (per_traj.size() - 1) / per_traj.size());
    const double expect = p.n_th + 0.5;
    std::ostringstream os;
    os << "<|a|^2> = " << mean << " expect " << expect << " (se " << se << ")";
    return fail_if(std::abs(mean - expect) > 3.0 * se + 1e-3, os.str());
  });

  // --- spin/boson matrix lab ----------------------------------------------
  check("hp.commutators_exact_spin", [&] {
    for (double j : {0.5, 1.0, 50.0, 256.0}) {
      const auto res = commutator_residuals(spin_matrices(j));
      if (res.jz_jplus > 1e-13 || res.jz_jminus > 1e-13 || res.jplus_jminus > 1e-13)
        return std::string("SU(2) residual above 1e-13 at j = " + std::to_string(j));
    }
    return std::string();
  });

  check("hp.edge_state_exact", [&] {
    for (double j : {1.0, 8.0, 64.5})
      for (auto b : {HpBranch::Minus, HpBranch::Plus})
        if (hp_map_error(j, b, 0) != 0.0) return std::string("edge-state error must vanish");
    return std::string();
  });

  check("hp.error_halves_with_j", [&] {
    for (int n_max : {1, 2, 4}) {
      double prev = hp_map_error(64.0, HpBranch::Minus, n_max);
      for (double j : {128.0, 256.0}) {
        const double cur = hp_map_error(j, HpBranch::Minus, n_max);
        const double ratio = cur / prev;
        if (ratio < 0.4 || ratio > 0.6) return std::string("halving ratio out of [0.4, 0.6]");
        prev = cur;
      }
    }
    return std::string();
  });

  check("hp.branch_symmetry", [&] {
    for (double j : {16.0, 64.0})
      for (int n_max : {1, 3, 7}) {
        const double em = hp_map_error(j, HpBranch::Minus, n_max);
        const double ep = hp_map_error(j, HpBranch::Plus, n_max);
        if (std::abs(em - ep) > 1e-13 * std::max(1.0, em))
          return std::string("branch errors differ");
      }
    return std::string();
  });

  check("hp.constructed_algebra_closes", [&] {
    for (auto b : {HpBranch::Minus, HpBranch::Plus}) {
      const auto rep = hp_spin_rep(32.0, b, 64, true);
      const auto res = commutator_residuals(rep);
      if (res.jz_jplus > 1e-12 || res.jz_jminus > 1e-12 || res.jplus_jminus > 1e-12)
        return std::string("exact-sqrt bosonized algebra does not close");
    }
    return std::string();
  });

  check("hp.adjoint_consistency", [&] {
    const auto rep = hp_spin_rep(24.0, HpBranch::Minus, 48, true);
    const double dev = (rep.jminus - rep.jplus.adjoint()).cwiseAbs().maxCoeff();
    return fail_if(dev > 1e-13, "J- is not the adjoint of J+");
  });

  return results;
}

}  // namespace tlsqle
