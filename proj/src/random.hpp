#pragma once

// Seeded streams shared by initialisation, shuffling and sampling. The
// engine and the seed_seq mixing are fully specified by the standard, and the
// mappings below avoid the implementation-defined std distributions, so
// sequences are identical across standard libraries.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace hxnn::detail {

enum class Stream : std::uint32_t {
  Init = 1,
  Shuffle = 2,
  TrainData = 3,
  Holdout = 4,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

/// [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Unbiased integer in [0, n) by rejection.
inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[below(rng, i)]);
  }
}

}  // namespace hxnn::detail
