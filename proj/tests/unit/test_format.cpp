#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "causalkit/format.hpp"

using causalkit::format_double;

TEST(FormatDouble, IntegralValuesKeepTrailingZero) {
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(0.0), "0.0");
  EXPECT_EQ(format_double(-3.0), "-3.0");
  EXPECT_EQ(format_double(1343.0), "1343.0");
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.6963350785340314), "0.6963350785340314");
  EXPECT_EQ(format_double(0.5000000000000001), "0.5000000000000001");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.55), "0.55");
}

TEST(FormatDouble, ExponentBoundaries) {
  EXPECT_EQ(format_double(1e-4), "0.0001");
  EXPECT_EQ(format_double(1e-5), "1e-05");
  EXPECT_EQ(format_double(1.5e-7), "1.5e-07");
  EXPECT_EQ(format_double(1e15), "1000000000000000.0");
  EXPECT_EQ(format_double(1e16), "1e+16");
  EXPECT_EQ(format_double(1.25e20), "1.25e+20");
}

TEST(FormatDouble, NegativeZero) { EXPECT_EQ(format_double(-0.0), "-0.0"); }

TEST(FormatDouble, RandomValuesRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-30, 30);
  for (int i = 0; i < 5000; ++i) {
    const double v = std::ldexp(mantissa(rng), exponent(rng));
    const auto s = format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(res.ec, std::errc{}) << s;
    ASSERT_EQ(back, v) << s;
  }
}
