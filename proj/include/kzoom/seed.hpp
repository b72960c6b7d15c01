#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace kzoom {

/// Default master seed for every experiment and for the CLI.
inline constexpr std::uint64_t kDefaultMasterSeed = 20190325;

std::uint64_t splitmix64(std::uint64_t x);

/// Independent seed for (stream, index) under a master seed. Used so that
/// parallel workers draw the same values as a serial loop.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Uniform double in [0,1) from the top 53 bits.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Unbiased integer in [0, bound) by rejection; portable unlike
/// std::uniform_int_distribution.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Random initial condition "0.ddd..." with 19 digits, strictly inside ]0,1[.
std::string random_x0(std::uint64_t seed);

}  // namespace kzoom
