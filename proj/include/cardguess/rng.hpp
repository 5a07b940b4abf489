#pragma once

#include <cstdint>

namespace cardguess {

// SplitMix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-derived random stream. Each (seed, index) pair names an
// independent stream, so trial i draws the same numbers no matter which
// worker runs it or in what order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index)
      : state_(mix64(mix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 1))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x = next();
    unsigned __int128 prod = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        x = next();
        prod = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cardguess
