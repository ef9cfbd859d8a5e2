#ifndef SIGTESTSIM_RNG_HPP
#define SIGTESTSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace sigtestsim {

// splitmix64 finalizer; used to derive independent seed streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for (seed, stream). Used so parallel workers draw
// from disjoint, order-independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream * 0xd1342543de82ef95ULL + 1));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

using rng_engine = std::mt19937_64;

inline rng_engine make_rng(std::uint64_t seed) { return rng_engine(seed); }

// Uniform in [0,1). Fixed mapping from raw 64-bit output so results do not
// depend on the standard library's distribution implementation.
inline double uniform01(rng_engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) via rejection-free 128-bit multiply.
inline std::uint64_t uniform_index(rng_engine& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace sigtestsim

#endif  // SIGTESTSIM_RNG_HPP
