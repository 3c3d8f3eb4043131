#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace splitset {

// Worker count: SPLITSET_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, count). Each index is executed exactly once;
// callers write results into per-index slots so the outcome does not
// depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for stream `index` of purpose `tag` under the master seed.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return Rng(stream_seed(seed, tag, index));
}

}  // namespace splitset
