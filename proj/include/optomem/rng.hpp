#pragma once

#include <cmath>
#include <cstdint>

#include "optomem/constants.hpp"

namespace optomem {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
/// A (key, counter) pair maps to 128 random bits; streams derived from
/// (seed, stream_id) are independent, and any sample index can be generated
/// without sequencing, which keeps Monte-Carlo runs reproducible across
/// thread counts.
struct Philox4x32 {
  struct Block {
    uint32_t v[4];
  };

  static Block generate(uint64_t key, uint64_t counter_hi, uint64_t counter_lo) {
    uint32_t c[4] = {static_cast<uint32_t>(counter_lo), static_cast<uint32_t>(counter_lo >> 32),
                     static_cast<uint32_t>(counter_hi), static_cast<uint32_t>(counter_hi >> 32)};
    uint32_t k0 = static_cast<uint32_t>(key);
    uint32_t k1 = static_cast<uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = uint64_t(0xD2511F53u) * c[0];
      const uint64_t p1 = uint64_t(0xCD9E8D57u) * c[2];
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
      const uint32_t n0 = hi1 ^ c[1] ^ k0;
      const uint32_t n2 = hi0 ^ c[3] ^ k1;
      c[0] = n0;
      c[1] = lo1;
      c[2] = n2;
      c[3] = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return {{c[0], c[1], c[2], c[3]}};
  }
};

/// Deterministic stream of standard normal variates: sample i of stream
/// (seed, stream_id) is a pure function of (seed, stream_id, i).
class GaussianStream {
 public:
  GaussianStream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

  /// Box-Muller on two 53-bit uniforms from one Philox block.
  double normal(uint64_t index) const {
    const auto b = Philox4x32::generate(seed_, stream_, index >> 1);
    const uint64_t w0 = (uint64_t(b.v[0]) << 32) | b.v[1];
    const uint64_t w1 = (uint64_t(b.v[2]) << 32) | b.v[3];
    // u1 in (0,1], u2 in [0,1)
    const double u1 = (static_cast<double>(w0 >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(w1 >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = consts::two_pi * u2;
    return (index & 1) ? r * std::sin(ang) : r * std::cos(ang);
  }

  double uniform(uint64_t index) const {
    const auto b = Philox4x32::generate(seed_ ^ 0x5DEECE66Dull, stream_, index);
    const uint64_t w = (uint64_t(b.v[0]) << 32) | b.v[1];
    return static_cast<double>(w >> 11) * 0x1p-53;
  }

 private:
  uint64_t seed_;
  uint64_t stream_;
};

}  // namespace optomem
