#pragma once

#include <cstdint>
#include <random>

namespace grig {

/// Portable uniform integer in [lo, hi] from a 64-bit Mersenne Twister.
/// std::uniform_int_distribution is implementation-defined, so ranges are
/// mapped by rejection: draw v until v < 2^64 - (2^64 mod span), return
/// lo + v mod span.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
  if (span == 0) {
    return lo + static_cast<std::int64_t>(rng());
  }
  const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - span) % span;
  std::uint64_t v = rng();
  while (limit != 0 && v >= limit) {
    v = rng();
  }
  return lo + static_cast<std::int64_t>(v % span);
}

}  // namespace grig
