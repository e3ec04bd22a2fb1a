#include <gtest/gtest.h>

#include <cmath>

#include "dagcast/error.hpp"
#include "dagcast/lp.hpp"
#include "dagcast/numeric.hpp"
#include "dagcast/rng.hpp"

namespace dagcast {
namespace {

TEST(Simplex, TextbookProblem) {
  // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  lp::Problem p(2);
  p.objective = {3, 5};
  auto r0 = p.add_row(4);
  p.at(r0, 0) = 1;
  auto r1 = p.add_row(12);
  p.at(r1, 1) = 2;
  auto r2 = p.add_row(18);
  p.at(r2, 0) = 3;
  p.at(r2, 1) = 2;
  const auto s = lp::maximize(p);
  EXPECT_NEAR(s.value, 36.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
  EXPECT_NEAR(s.x[1], 6.0, 1e-9);
}

TEST(Simplex, DegenerateProblemTerminates) {
  // Beale's cycling example, rewritten as a maximization.
  lp::Problem p(4);
  p.objective = {0.75, -150, 0.02, -6};
  auto a = p.add_row(0);
  p.rows[a] = {0.25, -60, -0.04, 9};
  auto b = p.add_row(0);
  p.rows[b] = {0.5, -90, -0.02, 3};
  auto c = p.add_row(1);
  p.rows[c] = {0, 0, 1, 0};
  const auto s = lp::maximize(p);
  EXPECT_NEAR(s.value, 0.05, 1e-9);
}

TEST(Simplex, UnboundedAndInfeasibleStart) {
  lp::Problem p(1);
  p.objective = {1};
  p.add_row(1);  // 0 * x <= 1
  EXPECT_THROW(lp::maximize(p), DomainError);
  lp::Problem q(1);
  q.add_row(-1);
  EXPECT_THROW(lp::maximize(q), DomainError);
}

TEST(Rational, RecoversSmallFractions) {
  EXPECT_EQ(to_string(approximate_rational(0.5)), "1/2");
  EXPECT_EQ(to_string(approximate_rational(6.0 / 7.0)), "6/7");
  EXPECT_EQ(to_string(approximate_rational(2.0)), "2");
  EXPECT_EQ(to_string(approximate_rational(5.0 / 3.0)), "5/3");
}

TEST(Slope, ExactLine) {
  const std::vector<double> xs{1, 2, 3, 4};
  const std::vector<double> ys{3, 5, 7, 9};
  EXPECT_NEAR(least_squares_slope(xs, ys), 2.0, 1e-12);
}

TEST(Format, SixSignificantDigits) {
  EXPECT_EQ(format_g6(0.1234567), "0.123457");
  EXPECT_EQ(format_g6(2.0), "2");
  EXPECT_EQ(format_g6(std::nan("")), "nan");
}

TEST(SplitMix64, KnownSequence) {
  // Reference outputs of the published SplitMix64 for seed 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, BelowStaysInRangeAndUniformIsHalfOpen) {
  SplitMix64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.below(7), 7U);
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace dagcast
