#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace spikegrad {

using RandomStream = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed derived from a base seed and an ordered list of integer tags, e.g.
// (seed, purpose, epoch, sample index).
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(base);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632BE59BD9B4E019ULL));
  return h;
}

inline RandomStream make_stream(std::uint64_t base,
                                std::initializer_list<std::uint64_t> tags) {
  return RandomStream(derive_seed(base, tags));
}

// Tags separating the purposes streams are drawn for.
enum class StreamPurpose : std::uint64_t {
  kWeightInit = 1,
  kShuffle = 2,
  kTrainEncoding = 3,
  kTestEncoding = 4,
  kRepeat = 5,
};

constexpr std::uint64_t tag(StreamPurpose p) noexcept {
  return static_cast<std::uint64_t>(p);
}

}  // namespace spikegrad
