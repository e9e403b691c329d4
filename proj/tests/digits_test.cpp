#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rqmc/digits.hpp"

using namespace rqmc;

TEST(Digits, ExpandExamples) {
  EXPECT_EQ(expand(0.625, 2, 3), DigitVector(2, {1, 0, 1}));
  EXPECT_EQ(expand(0.0, 2, 4), DigitVector(2, {0, 0, 0, 0}));
  EXPECT_EQ(expand(1.0 / 3.0, 3, 5), DigitVector(3, {1, 0, 0, 0, 0}));
}

TEST(Digits, ValueExamples) {
  EXPECT_EQ(value(DigitVector(2, {1, 0, 1})), 0.625);
  EXPECT_EQ(value(DigitVector(5, {0, 0})), 0.0);
  EXPECT_EQ(value(DigitVector(3, {2, 2})), 8.0 / 9.0);
}

TEST(Digits, RejectsBadInput) {
  EXPECT_THROW(expand(1.0, 2, 3), std::invalid_argument);
  EXPECT_THROW(expand(-0.1, 2, 3), std::invalid_argument);
  EXPECT_THROW(expand(0.5, 1, 3), std::invalid_argument);
  EXPECT_THROW(expand(std::nan(""), 2, 3), std::invalid_argument);
  EXPECT_THROW(DigitVector(2, {0, 2}), std::invalid_argument);
}

TEST(Digits, DefaultDepth) {
  EXPECT_EQ(default_depth(2), 53u);
  EXPECT_EQ(default_depth(3), 34u);
  EXPECT_EQ(default_depth(4), 27u);
  EXPECT_EQ(default_depth(5), 23u);
  for (std::uint32_t b = 2; b < 40; ++b) {
    EXPECT_LE(default_depth(b), max_depth(b)) << b;
    EXPECT_NO_THROW(checked_pow(b, default_depth(b)));
  }
  EXPECT_EQ(max_depth(2), 63u);
  EXPECT_THROW(checked_pow(2, 64), std::overflow_error);
}

TEST(Digits, RoundTripOnGridPoints) {
  std::mt19937_64 gen(7);
  for (std::uint32_t base : {2u, 3u, 5u, 7u}) {
    for (std::size_t depth : {1u, 4u, 9u}) {
      const std::uint64_t denom = checked_pow(base, depth);
      std::uniform_int_distribution<std::uint64_t> pick(0, denom - 1);
      for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t n = pick(gen);
        // The rounded grid value carries its digits back through expand().
        std::vector<std::uint32_t> digits(depth);
        std::uint64_t rest = n;
        for (std::size_t k = depth; k-- > 0;) {
          digits[k] = static_cast<std::uint32_t>(rest % base);
          rest /= base;
        }
        const DigitVector original(base, digits);
        const double x = value(original);
        EXPECT_EQ(expand(x, base, depth), original) << "base " << base << " depth " << depth << " n " << n;
        EXPECT_EQ(grid_numerator(x, base, depth), n);
        EXPECT_EQ(value(expand(x, base, depth)), x);
      }
    }
  }
}

TEST(Digits, ScaledFloorIsExact) {
  // 1/3 rounds below one third, so three times it is just under 1.
  EXPECT_EQ(scaled_floor(1.0 / 3.0, 3), 0u);
  EXPECT_EQ(scaled_floor(0.5, 4), 2u);
  EXPECT_EQ(scaled_floor(std::nextafter(0.5, 0.0), 4), 1u);
  EXPECT_EQ(scaled_floor(std::nextafter(1.0, 0.0), std::uint64_t{1} << 53), (std::uint64_t{1} << 53) - 1);
  EXPECT_EQ(scaled_floor(std::nextafter(1.0, 0.0), ~std::uint64_t{0}), ~std::uint64_t{0} - 2048);
  EXPECT_EQ(scaled_floor(5e-324, ~std::uint64_t{0}), 0u);
  EXPECT_EQ(scaled_floor(0.0, 10), 0u);
}

TEST(Digits, TruncationErrorAndMonotonicity) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint32_t base : {2u, 3u, 10u}) {
    const std::size_t depth = 8;
    const double ulp = std::pow(static_cast<double>(base), -static_cast<double>(depth));
    for (int trial = 0; trial < 500; ++trial) {
      const double x = unit(gen);
      const double y = unit(gen);
      const DigitVector dx = expand(x, base, depth);
      const DigitVector dy = expand(y, base, depth);
      EXPECT_LE(value(dx), x);
      EXPECT_LT(x - value(dx), ulp);
      const bool lex_less = std::lexicographical_compare(dx.digits().begin(), dx.digits().end(), dy.digits().begin(),
                                                         dy.digits().end());
      EXPECT_EQ(lex_less, value(dx) < value(dy));
    }
  }
}

TEST(Digits, ValueStaysBelowOne) {
  std::vector<std::uint32_t> all_top(34, 2);
  EXPECT_LT(digits_to_value(all_top, 3), 1.0);
  std::vector<std::uint32_t> ones(53, 1);
  EXPECT_EQ(digits_to_value(ones, 2), 1.0 - 0x1p-53);
}
