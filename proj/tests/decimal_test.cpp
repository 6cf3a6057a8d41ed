#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "hmiv/decimal.hpp"

using hmiv::Decimal;
using boost::multiprecision::cpp_int;

namespace {

// cpp_int division truncates toward zero, like the contract.
std::int64_t oracle_mul(std::int64_t a, std::int64_t b) { return static_cast<std::int64_t>(cpp_int(a) * b / 100); }
std::int64_t oracle_div(std::int64_t a, std::int64_t b) { return static_cast<std::int64_t>(cpp_int(a) * 100 / b); }

}  // namespace

TEST(Decimal, ArithmeticMatchesArbitraryPrecision) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> operand(-100000000, 100000000);  // [-1e6, 1e6] in hundredths
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t a = operand(rng), b = operand(rng);
    const Decimal x = Decimal::from_hundredths(a), y = Decimal::from_hundredths(b);
    ASSERT_EQ((x + y).hundredths(), static_cast<std::int64_t>(cpp_int(a) + b));
    ASSERT_EQ((x - y).hundredths(), static_cast<std::int64_t>(cpp_int(a) - b));
    ASSERT_EQ((x * y).hundredths(), oracle_mul(a, b)) << a << " * " << b;
    if (b != 0) ASSERT_EQ((x / y).hundredths(), oracle_div(a, b)) << a << " / " << b;
    ASSERT_EQ(x < y, a < b);
  }
}

TEST(Decimal, TruncatesTowardZero) {
  EXPECT_EQ((Decimal::from_hundredths(-150) * Decimal::from_hundredths(1)).hundredths(), -1);
  EXPECT_EQ((Decimal::from_whole(1) / Decimal::from_whole(3)).to_string(), "0.33");
  EXPECT_EQ((Decimal::from_whole(-1) / Decimal::from_whole(3)).to_string(), "-0.33");
}

TEST(Decimal, Errors) {
  EXPECT_THROW(Decimal::from_whole(1) / Decimal{}, hmiv::DivisionByZero);
  EXPECT_THROW(Decimal::from_hundredths(INT64_MAX) + Decimal::from_hundredths(1), hmiv::ArithmeticOverflow);
  EXPECT_THROW(Decimal::from_hundredths(INT64_MAX) * Decimal::from_whole(2), hmiv::ArithmeticOverflow);
}

TEST(Decimal, TextRoundTrip) {
  EXPECT_EQ(Decimal::from_hundredths(101300).to_string(), "1013.00");
  EXPECT_EQ(Decimal::from_hundredths(-5).to_string(), "-0.05");
  EXPECT_EQ(Decimal::parse("29.92")->hundredths(), 2992);
  EXPECT_EQ(Decimal::parse("7.5")->hundredths(), 750);
  EXPECT_EQ(Decimal::parse("-3")->hundredths(), -300);
  EXPECT_FALSE(Decimal::parse("1.005"));
  EXPECT_FALSE(Decimal::parse("1."));
  EXPECT_FALSE(Decimal::parse(""));
  EXPECT_FALSE(Decimal::parse("1e3"));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto d = Decimal::from_hundredths(static_cast<std::int64_t>(rng() >> 12) - (1LL << 51));
    ASSERT_EQ(Decimal::parse(d.to_string()), d);
  }
}

TEST(Decimal, EntryParsing) {
  EXPECT_EQ(Decimal::from_entry("").hundredths(), 0);
  EXPECT_EQ(Decimal::from_entry(".").hundredths(), 0);
  EXPECT_EQ(Decimal::from_entry("990").hundredths(), 99000);
  EXPECT_EQ(Decimal::from_entry("29.9").hundredths(), 2990);
  EXPECT_EQ(Decimal::from_entry(".125").hundredths(), 13);  // half-up
  EXPECT_EQ(Decimal::from_entry("2.994").hundredths(), 299);
  EXPECT_EQ(Decimal::from_entry("1.").hundredths(), 100);
}
