#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace spkm {

// Portable generator: xoshiro256** (Blackman & Vigna) with its 256-bit state
// filled by four successive SplitMix64 outputs from the 64-bit seed.
// Every derived draw below is specified exactly so that a reimplementation in
// another language reproduces seeded runs bit for bit:
//
//   next_u64()      xoshiro256** output
//   uniform01()     (next_u64() >> 11) * 2^-53, in [0, 1)
//   uniform_index(n) rejection sampling: draw x = next_u64() until
//                   x < 2^64 - (2^64 mod n), return x mod n
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform01();
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller on two uniform01() draws (cosine branch).
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace spkm
