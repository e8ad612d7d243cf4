#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "tlsqle/errors.hpp"
#include "tlsqle/timedomain.hpp"

namespace tlsqle {

// Binary trajectory dump. Layout, all little-endian:
//   u32 version (=1), u32 n_traj, u64 n_steps, f64 dt,
// followed by n_steps rows, each holding n_traj (re, im) f64 pairs.
namespace detail {

template <typename T>
void write_le(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little,
                "serializer assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace detail

inline void write_trajectories_binary(const TrajectoryEnsemble& ens,
                                      const std::filesystem::path& path) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp + " for writing");
    const uint32_t n_traj = static_cast<uint32_t>(ens.samples.size());
    const uint64_t n_steps = ens.times.size();
    const double dt = ens.times.size() > 1 ? ens.times[1] - ens.times[0] : 0.0;
    detail::write_le<uint32_t>(os, 1u);
    detail::write_le<uint32_t>(os, n_traj);
    detail::write_le<uint64_t>(os, n_steps);
    detail::write_le<double>(os, dt);
    for (uint64_t t = 0; t < n_steps; ++t)
      for (uint32_t k = 0; k < n_traj; ++k) {
        detail::write_le<double>(os, ens.samples[k][t].real());
        detail::write_le<double>(os, ens.samples[k][t].imag());
      }
    if (!os) throw IoError("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline TrajectoryEnsemble read_trajectories_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  const uint32_t version = detail::read_le<uint32_t>(is);
  if (version != 1u) throw IoError("unsupported trajectory dump version");
  const uint32_t n_traj = detail::read_le<uint32_t>(is);
  const uint64_t n_steps = detail::read_le<uint64_t>(is);
  const double dt = detail::read_le<double>(is);
  TrajectoryEnsemble ens;
  ens.times.resize(n_steps);
  for (uint64_t t = 0; t < n_steps; ++t) ens.times[t] = static_cast<double>(t) * dt;
  ens.samples.assign(n_traj, std::vector<Complex>(n_steps));
  for (uint64_t t = 0; t < n_steps; ++t)
    for (uint32_t k = 0; k < n_traj; ++k) {
      const double re = detail::read_le<double>(is);
      const double im = detail::read_le<double>(is);
      ens.samples[k][t] = Complex(re, im);
    }
  if (!is) throw IoError("truncated trajectory dump " + path.string());
  return ens;
}

}  // namespace tlsqle
