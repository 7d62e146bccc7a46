#pragma once

#include <cstdint>
#include <random>

namespace uavmf {

// All randomness in the library flows through this engine type. Streams for
// independent consumers (cells, slots, seeds of a sweep) are derived from the
// run seed with a counter-style hash so serial and reordered evaluation agree.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Seed for the stream identified by (seed, a, b, c).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

inline Rng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
  return Rng(stream_seed(seed, a, b, c));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace uavmf
