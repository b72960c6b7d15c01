#include <gtest/gtest.h>

#include "kzoom/real.hpp"
#include "test_util.hpp"

namespace kzoom {
namespace {

TEST(PrecisionSpec, ParsesBothModes) {
  EXPECT_EQ(PrecisionSpec::parse("binary64"), PrecisionSpec::binary64());
  EXPECT_EQ(PrecisionSpec::parse("decimal:64").digits, 64);
  EXPECT_EQ(PrecisionSpec::parse("decimal").digits, PrecisionSpec::kDefaultDecimalDigits);
  EXPECT_EQ(PrecisionSpec::decimal(200).to_string(), "decimal:200");
  EXPECT_EQ(PrecisionSpec::binary64().to_string(), "binary64");
}

TEST(PrecisionSpec, RejectsTooFewDigitsAndJunk) {
  EXPECT_KZOOM_ERROR(PrecisionSpec::parse("decimal:31"), ErrorCode::validation);
  EXPECT_NO_THROW(PrecisionSpec::parse("decimal:32"));
  EXPECT_KZOOM_ERROR(PrecisionSpec::parse("decimal:x"), ErrorCode::parse);
  EXPECT_KZOOM_ERROR(PrecisionSpec::parse("float"), ErrorCode::parse);
}

TEST(FixedDecimal, ParsePadsAndTruncates) {
  auto a = FixedDecimal::parse("0.25", 4);
  EXPECT_EQ(a.units(), 2500);
  EXPECT_EQ(a.to_string(), "0.2500");
  // Digits beyond P are cut, never rounded.
  EXPECT_EQ(FixedDecimal::parse("0.123456789", 4).units(), 1234);
  EXPECT_EQ(FixedDecimal::parse("1", 3).to_string(), "1.000");
  EXPECT_EQ(FixedDecimal::parse(".5", 2).units(), 50);
  EXPECT_EQ(FixedDecimal::parse("0.007", 3).fraction_digits(), "007");
}

TEST(FixedDecimal, RejectsNonLiterals) {
  for (const char* bad : {"", ".", "-0.5", "1e-3", "0.5x", "0..1", " 0.5"}) {
    SCOPED_TRACE(bad);
    EXPECT_KZOOM_ERROR(FixedDecimal::parse(bad, 8), ErrorCode::parse);
  }
}

TEST(FixedDecimal, ComparesAcrossDigitCounts) {
  EXPECT_EQ(FixedDecimal::parse("0.5", 2) <=> FixedDecimal::parse("0.50", 6), std::strong_ordering::equal);
  EXPECT_LT(FixedDecimal::parse("0.4999", 4), FixedDecimal::parse("0.5", 2));
}

TEST(RealValue, ExactDecimalRepresentation) {
  auto v = RealValue::parse("0.44160905447136", PrecisionSpec::decimal(32));
  EXPECT_TRUE(v.is_decimal());
  EXPECT_EQ(v.to_string(), "0.44160905447136000000000000000000");
  EXPECT_EQ(v.to_fixed(14), "0.44160905447136");
  EXPECT_EQ(v.to_fixed(3), "0.441");
}

TEST(RealValue, Binary64RoundTripsShortest) {
  auto v = RealValue::parse("0.1", PrecisionSpec::binary64());
  EXPECT_EQ(v.as_binary64(), 0.1);
  EXPECT_EQ(v.to_string(), "0.1");
  EXPECT_EQ(v.to_fixed(3), "0.100");
}

TEST(RealValue, MixedModeComparisonIsAnError) {
  auto a = RealValue::parse("0.5", PrecisionSpec::binary64());
  auto b = RealValue::parse("0.5", PrecisionSpec::decimal(32));
  EXPECT_KZOOM_ERROR((void)(a < b), ErrorCode::domain);
}

TEST(Coefficient, KeepsExactScaledForm) {
  Coefficient mu("3.80");
  EXPECT_EQ(mu.scaled(), 38);
  EXPECT_EQ(mu.scale(), 1);
  EXPECT_EQ(mu.text(), "3.80");
  EXPECT_DOUBLE_EQ(mu.as_double(), 3.8);
  Coefficient four("4");
  EXPECT_EQ(four.scaled(), 4);
  EXPECT_EQ(four.scale(), 0);
  EXPECT_KZOOM_ERROR(Coefficient("four"), ErrorCode::parse);
}

TEST(Pow10, MatchesRepeatedMultiplication) {
  mpz_class p = 1;
  for (int n = 0; n < 40; ++n) {
    EXPECT_EQ(pow10(n), p);
    p *= 10;
  }
}

}  // namespace
}  // namespace kzoom
