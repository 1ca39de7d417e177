#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace gwlab {

using Rng = std::mt19937_64;

/// Independent generator for stream `ids` under `seed`. std::seed_seq and
/// mt19937_64 seeding are fully specified, so streams are portable.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (std::uint64_t id : ids) {
    words.push_back(static_cast<std::uint32_t>(id));
    words.push_back(static_cast<std::uint32_t>(id >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace gwlab
