// rng.hpp - deterministic, platform-independent random number streams.
//
// std::uniform_real_distribution and friends are implementation-defined,
// which breaks byte-identical reproducibility across toolchains. This
// generator (splitmix64 core) produces identical streams everywhere and
// supports counter-based stream splitting: stream(master, k) yields
// independent substreams for trial k.

#pragma once

#include "atomiclift/types.hpp"

#include <cmath>
#include <cstdint>

namespace atomiclift {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive the seed of substream `index` from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL);
  splitmix64_step(s);
  return splitmix64_step(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    splitmix64_step(state_);
  }

  static Rng stream(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
  }

  std::uint64_t next_u64() { return splitmix64_step(state_); }

  // uniform on [0, 1)
  Real uniform() {
    return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53;
  }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  // standard normal via Box-Muller
  Real normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    Real u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const Real u2 = uniform();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  // circularly symmetric complex normal, E|z|^2 = 1
  Complex complex_normal() {
    const Real s = std::sqrt(0.5);
    return Complex(s * normal(), s * normal());
  }

  // unit-modulus complex number with uniform phase
  Complex unit_phase() { return std::polar(1.0, uniform(0.0, kTwoPi)); }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  Real spare_ = 0.0;
};

}  // namespace atomiclift
