#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

// Seeded draws with a fixed algorithm. The std distributions are not
// specified bit-for-bit, so outputs that must be reproducible use these.
namespace droidprof::rnd {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return Rng(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b));
}

inline std::uint64_t below(Rng& rng, std::uint64_t n) { return rng() % n; }

inline int between(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[below(rng, v.size())];
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(rng, i)]);
}

}  // namespace droidprof::rnd
