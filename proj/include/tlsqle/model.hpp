#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tlsqle/errors.hpp"

namespace tlsqle {

using Complex = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// Which extremal spin state the bosonic mapping of the TLS ensemble expands
// around. Minus: TLSs near their ground state, the nonlinear damping adds to
// the linear one. Plus: inverted ensemble, the nonlinear damping subtracts.
enum class HpBranch { Minus, Plus };

// +1 for Minus, -1 for Plus; multiplies every nonlinear-damping term.
inline double branch_sign(HpBranch b) { return b == HpBranch::Minus ? 1.0 : -1.0; }

inline const char* branch_name(HpBranch b) { return b == HpBranch::Minus ? "minus" : "plus"; }

// All physical rates and drive settings for one simulation instance.
// Frequencies and rates are stored in units of the linear damping kappa;
// validate_params() normalizes kappa to 1 and keeps the original value in
// kappa_unit so outputs can be rescaled to laboratory units.
struct ModelParams {
  double kappa = 1.0;       // linear damping, the global frequency unit
  double kappa_n = 0.0;     // nonlinear (TLS-induced) damping
  double delta = 0.0;       // pump-cavity detuning
  Complex alpha_in{0.0, 0.0};  // coherent drive amplitude, units of sqrt(kappa)
  double n_th = 0.0;        // bosonic bath thermal occupancy
  double n_th_tls = 0.0;    // TLS bath thermal occupancy
  HpBranch branch = HpBranch::Minus;
  double kappa_unit = 1.0;  // original kappa before normalization (bookkeeping)

  // kappa_unit is excluded: two parameter sets describing the same
  // dimensionless model compare equal.
  friend bool operator==(const ModelParams& a, const ModelParams& b) {
    return a.kappa == b.kappa && a.kappa_n == b.kappa_n && a.delta == b.delta &&
           a.alpha_in == b.alpha_in && a.n_th == b.n_th && a.n_th_tls == b.n_th_tls &&
           a.branch == b.branch;
  }
};

// Checks ranges and returns a copy rescaled so that kappa == 1.
// Idempotent: applying it twice gives the same result as applying it once.
inline ModelParams validate_params(const ModelParams& raw) {
  const bool finite = std::isfinite(raw.kappa) && std::isfinite(raw.kappa_n) &&
                      std::isfinite(raw.delta) && std::isfinite(raw.n_th) &&
                      std::isfinite(raw.n_th_tls) && std::isfinite(raw.alpha_in.real()) &&
                      std::isfinite(raw.alpha_in.imag()) && std::isfinite(raw.kappa_unit);
  if (!finite) throw NonFinite("model parameters contain NaN or infinity");
  if (!(raw.kappa > 0.0)) throw NonPositiveKappa("kappa must be > 0");
  if (raw.kappa_n < 0.0) throw NegativeRate("kappa_n must be >= 0");
  if (raw.n_th < 0.0) throw NegativeRate("n_th must be >= 0");
  if (raw.n_th_tls < 0.0) throw NegativeRate("n_th_tls must be >= 0");

  ModelParams p = raw;
  p.kappa_unit = raw.kappa * raw.kappa_unit;
  p.delta = raw.delta / raw.kappa;
  p.kappa_n = raw.kappa_n / raw.kappa;
  p.alpha_in = raw.alpha_in / std::sqrt(raw.kappa);
  p.kappa = 1.0;
  return p;
}

inline std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> v;
  v.reserve(static_cast<size_t>(count > 0 ? count : 0));
  if (count == 1) {
    v.push_back(start);
    return v;
  }
  for (int i = 0; i < count; ++i)
    v.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
  return v;
}

}  // namespace tlsqle
