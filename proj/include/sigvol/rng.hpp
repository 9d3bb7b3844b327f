#ifndef SIGVOL_RNG_HPP
#define SIGVOL_RNG_HPP

#include <cstdint>

namespace sigvol {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Splittable counter scheme: the path seed is the splitmix64 stream seeded at
// `master`, evaluated at position `index` + 1. Each path's randomness depends
// only on (master, index), so results are independent of the worker count.
inline std::uint64_t path_seed(std::uint64_t master, long long index) {
  return splitmix64(master + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1));
}

}  // namespace sigvol

#endif
