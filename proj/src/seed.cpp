#include "kzoom/seed.hpp"

namespace kzoom {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t r = 0;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

std::string random_x0(std::uint64_t seed) {
  constexpr std::uint64_t kTen19 = 10000000000000000000ULL;
  std::mt19937_64 rng(seed);
  std::uint64_t v = 0;
  // Keep away from the collapsing edges 0 and 1.
  while (v < kTen19 / 1000 || v > kTen19 - kTen19 / 1000) v = uniform_below(rng, kTen19);
  std::string digits = std::to_string(v);
  digits.insert(0, 19 - digits.size(), '0');
  return "0." + digits;
}

}  // namespace kzoom
