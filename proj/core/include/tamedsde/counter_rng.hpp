#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace tamedsde::rng {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// A block is a pure function of (counter, key): streams can be evaluated in
// any order and from any thread with identical results, which is what makes
// the per-path Brownian fabrics reproducible independent of the worker count.
using Block = std::array<std::uint32_t, 4>;

inline Block philox4x32_10(Block ctr, std::uint32_t key0, std::uint32_t key1) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kBump0 = 0x9E3779B9u;
  constexpr std::uint32_t kBump1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key0 += kBump0;
      key1 += kBump1;
    }
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key0, lo1, hi0 ^ ctr[3] ^ key1, lo0};
  }
  return ctr;
}

// Maps a 64-bit word to the open interval (0,1); never returns 0 or 1, so it
// is safe under log().
inline double to_unit_open(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

// Two independent N(0,1) draws per counter block via Box-Muller over Philox
// uniforms. The mapping (key, stream, block) -> (z0, z1) is frozen: changing
// it invalidates every recorded seed.
inline std::array<double, 2> normal_pair(std::uint64_t key, std::uint64_t stream,
                                         std::uint64_t block) {
  const Block ctr = {static_cast<std::uint32_t>(block),
                     static_cast<std::uint32_t>(block >> 32),
                     static_cast<std::uint32_t>(stream),
                     static_cast<std::uint32_t>(stream >> 32)};
  const Block out = philox4x32_10(ctr, static_cast<std::uint32_t>(key),
                                  static_cast<std::uint32_t>(key >> 32));
  const std::uint64_t a = out[0] | (std::uint64_t{out[1]} << 32);
  const std::uint64_t b = out[2] | (std::uint64_t{out[3]} << 32);
  const double u1 = to_unit_open(a);
  const double u2 = to_unit_open(b);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

// Uniform in (0,1) from block `block`, word `word` (0 or 1) of the stream.
inline double uniform_open(std::uint64_t key, std::uint64_t stream, std::uint64_t block,
                           int word) {
  const Block ctr = {static_cast<std::uint32_t>(block),
                     static_cast<std::uint32_t>(block >> 32),
                     static_cast<std::uint32_t>(stream),
                     static_cast<std::uint32_t>(stream >> 32)};
  const Block out = philox4x32_10(ctr, static_cast<std::uint32_t>(key),
                                  static_cast<std::uint32_t>(key >> 32));
  const std::uint64_t x = word == 0 ? (out[0] | (std::uint64_t{out[1]} << 32))
                                    : (out[2] | (std::uint64_t{out[3]} << 32));
  return to_unit_open(x);
}

}  // namespace tamedsde::rng
