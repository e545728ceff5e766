#ifndef COSKIT_RNG_HPP
#define COSKIT_RNG_HPP

#include <cstdint>
#include <random>

namespace coskit {

// Seed derivation for independent substreams (per stage, per repetition,
// per bootstrap attempt).  A substream seed is
//
//   mix_seed(seed, salt) = finalize(seed ^ finalize(salt))
//
// where finalize is the splitmix64 output permutation.  Chaining
// mix_seed(mix_seed(s, a), b) derives streams keyed on (a, b) without the
// two salts interacting linearly.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64_finalize(seed ^ splitmix64_finalize(salt));
}

inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t salt) {
  return std::mt19937_64(mix_seed(seed, salt));
}

}  // namespace coskit

#endif  // COSKIT_RNG_HPP
