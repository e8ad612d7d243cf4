#pragma once

#include <cmath>
#include <vector>

#include "tlsqle/errors.hpp"
#include "tlsqle/fft.hpp"
#include "tlsqle/spectrum.hpp"
#include "tlsqle/timedomain.hpp"

namespace tlsqle {

// Averaged Hann-windowed periodogram of the quadrature X(t) = sqrt(2) Re(a e^{-i theta})
// across segments and trajectories. Two-sided, angular-frequency axis in the
// pump frame, normalized so a white process of two-sided density S0 comes out
// flat at S0. Samples are returned in ascending frequency order.
//
// Callers are responsible for discarding the transient part of the ensemble
// first (see discard_transient).
inline std::vector<SpectrumSample> welch_psd(const TrajectoryEnsemble& ens, double theta,
                                             int segment_length, double overlap_fraction) {
  if (ens.samples.empty() || ens.times.size() < 2)
    throw TooFewSamples("ensemble is empty");
  const size_t n = ens.times.size();
  const size_t seg = static_cast<size_t>(segment_length);
  if (segment_length < 2 || seg > n)
    throw TooFewSamples("segment length must be in [2, sample count]");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw UsageError("overlap fraction must lie in [0, 1)");

  const double dt_s = ens.times[1] - ens.times[0];
  const size_t hop =
      std::max<size_t>(1, static_cast<size_t>(std::llround(seg * (1.0 - overlap_fraction))));

  std::vector<double> window(seg);
  double wsq = 0.0;
  for (size_t i = 0; i < seg; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / seg));
    wsq += window[i] * window[i];
  }

  std::vector<double> acc(seg, 0.0);
  size_t n_segments = 0;
  std::vector<Complex> buf(seg);
  const Complex phase = std::polar(1.0, -theta);
  for (const auto& traj : ens.samples) {
    for (size_t start = 0; start + seg <= traj.size(); start += hop) {
      for (size_t i = 0; i < seg; ++i) {
        const double x = std::sqrt(2.0) * (traj[start + i] * phase).real();
        buf[i] = Complex(window[i] * x, 0.0);
      }
      auto spec = detail::fft(buf);
      for (size_t i = 0; i < seg; ++i) acc[i] += std::norm(spec[i]);
      ++n_segments;
    }
  }
  if (n_segments == 0) throw TooFewSamples("no complete segment fits the ensemble");

  const double scale = dt_s / (wsq * static_cast<double>(n_segments));
  std::vector<SpectrumSample> out(seg);
  const long half = static_cast<long>(seg) / 2;
  for (size_t i = 0; i < seg; ++i) {
    // fftshift: map bin index to signed frequency
    const long k = static_cast<long>(i) < half ? static_cast<long>(i)
                                               : static_cast<long>(i) - static_cast<long>(seg);
    const size_t pos = static_cast<size_t>(k + half);
    out[pos].omega = 2.0 * kPi * static_cast<double>(k) / (static_cast<double>(seg) * dt_s);
    out[pos].theta = theta;
    out[pos].value = acc[i] * scale;
  }
  return out;
}

}  // namespace tlsqle
