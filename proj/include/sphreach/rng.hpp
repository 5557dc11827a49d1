// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_RNG_HPP
#define SPHREACH_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace sphreach {

/// Philox4x32-10 (Salmon et al., SC'11). Stateless: each (key, counter) pair
/// maps to four 32-bit words, so any sample can be drawn independently.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
  std::array<std::uint32_t, 2> key_;
};

/// Standard normals for stream `index` under `seed`: block b of the stream
/// yields normals 2b and 2b+1 by Box-Muller.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t index) : gen_(seed), index_(index) {}

  std::array<double, 2> pair(std::uint32_t block) const {
    const Philox4x32::Block out = gen_({static_cast<std::uint32_t>(index_),
                                        static_cast<std::uint32_t>(index_ >> 32), block, 0u});
    const std::uint64_t w0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t w1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    // u1 in (0, 1] keeps the logarithm finite; u2 in [0, 1).
    const double u1 = (static_cast<double>(w0 >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(w1 >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  Philox4x32 gen_;
  std::uint64_t index_;
};

}  // namespace sphreach

#endif  // SPHREACH_RNG_HPP
