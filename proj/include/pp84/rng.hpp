#pragma once

#include <cstdint>
#include <random>

namespace pp84 {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent per-run stream derived from (master seed, run index), so a
// session can be replayed or parallelized run by run without changing output.
inline std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t run_index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(run_index + 1)));
}

inline double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool chance(double p, std::mt19937_64& rng) {
    return uniform01(rng) < p;
}

}  // namespace pp84
