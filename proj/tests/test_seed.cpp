#include <set>

#include <gtest/gtest.h>

#include "kzoom/seed.hpp"

namespace kzoom {
namespace {

// Frozen from tests/oracle/oracle.py.
TEST(Seed, SplitmixAndDeriveMatchOracle) {
  EXPECT_EQ(splitmix64(0), 16294208416658607535ULL);
  EXPECT_EQ(derive_seed(kDefaultMasterSeed, 1, 0), 2690671092971374682ULL);
}

TEST(Seed, RandomX0MatchesOracle) {
  EXPECT_EQ(random_x0(derive_seed(kDefaultMasterSeed, 1, 0)), "0.3914267601427047257");
}

TEST(Seed, RandomX0IsAlwaysInsideTheOpenInterval) {
  for (std::uint64_t s = 0; s < 2000; ++s) {
    auto x = random_x0(s);
    ASSERT_EQ(x.size(), 21u);
    ASSERT_EQ(x.substr(0, 2), "0.");
    EXPECT_GE(x, "0.0010000000000000000");
    EXPECT_LE(x, "0.9990000000000000000");
  }
}

TEST(Seed, DerivedStreamsDoNotCollide) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 0; stream < 8; ++stream) {
    for (std::uint64_t i = 0; i < 256; ++i) seen.insert(derive_seed(42, stream, i));
  }
  EXPECT_EQ(seen.size(), 8u * 256u);
}

TEST(Seed, UnitDoubleIsInHalfOpenUnitInterval) {
  EXPECT_EQ(unit_double(0), 0.0);
  EXPECT_LT(unit_double(~0ULL), 1.0);
  EXPECT_EQ(unit_double(1ULL << 63), 0.5);
}

TEST(Seed, UniformBelowStaysInRangeAndCoversIt) {
  std::mt19937_64 rng(7);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = uniform_below(rng, 7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

}  // namespace
}  // namespace kzoom
