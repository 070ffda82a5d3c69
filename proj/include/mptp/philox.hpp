#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mptp {

// Philox4x32-10 counter-based generator: the random block is a pure function
// of (key, counter), so ensembles are bit-identical no matter how path
// generation is ordered or parallelized.
namespace philox {

inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::array<std::uint32_t, 4> ctr) {
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
        static_cast<std::uint32_t>(p0),
    };
    ctr = next;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

// Uniform in (0, 1]: never 0, so log(u) below is always finite.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits) + 1.0) * 0x1p-64;
}

}  // namespace philox

// Two independent standard normals for (seed; step, path, block) by Box-Muller.
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint32_t step,
                                         std::uint32_t path, std::uint32_t blk) {
  auto w = philox::block(seed, {step, path, blk, 0u});
  double u1 = philox::to_unit(w[0], w[1]);
  double u2 = philox::to_unit(w[2], w[3]);
  double r = std::sqrt(-2.0 * std::log(u1));
  double phi = 2.0 * M_PI * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace mptp
