#pragma once

#include <cstdint>
#include <random>

namespace varbound {

// splitmix64 step (Steele/Lea/Flood).  Used to derive independent substream seeds
// from a single master seed so that results do not depend on thread scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic substream seed for (master seed, tag).  Tags are small integers
// identifying e.g. a (slice, branch) pair; consecutive tags give decorrelated streams.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ splitmix64(tag * 0x9e3779b97f4a7c15ull + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag = 0) {
    return std::mt19937_64(substream_seed(seed, tag));
}

}  // namespace varbound
