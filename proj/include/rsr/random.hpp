#pragma once

#include <cstdint>

namespace rsr {

// Counter-based stream: every draw is a pure function of its key, so
// results do not depend on evaluation order or chunking.

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

constexpr std::uint64_t stream_key(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return stream_key(stream_key(a, b), c);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by multiply-shift; bound must be > 0.
constexpr std::uint64_t to_range(std::uint64_t bits, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * bound) >> 64);
}

}  // namespace rsr
