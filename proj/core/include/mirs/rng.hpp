// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mirs {

/// Seeded random source with platform-stable output.
///
/// The standard library distributions are implementation-defined, so the
/// uniform and Gaussian draws here are derived directly from the raw
/// mt19937_64 stream (53-bit mantissa uniforms, Box-Muller normals).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal N(0, 1).
  double normal();

  /// Circularly-symmetric complex Gaussian CN(0, 1): E|z|^2 = 1.
  std::complex<double> complex_normal();

  /// Uniform point on the unit circle.
  std::complex<double> unit_phase();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stable seed derivation (splitmix64 chain). Identical on every platform.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace mirs
