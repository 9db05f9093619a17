#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pointspec/sequence.hpp"

using namespace pointspec;

TEST(SequenceForms, LeafEvaluation) {
  EXPECT_DOUBLE_EQ(power_seq(2.0, -1.0)(4), 0.5);
  EXPECT_DOUBLE_EQ(Seq(SequenceSpec::affine(-1.0, -2.0))(3), -7.0);
  EXPECT_DOUBLE_EQ(Seq(SequenceSpec::poly({1.0, 0.0, 3.0}))(2), 13.0);
  EXPECT_DOUBLE_EQ(Seq(SequenceSpec::power_sum({{1.0, 1.0}, {2.0, -1.0}}))(2), 3.0);
  EXPECT_DOUBLE_EQ(Seq(SequenceSpec::geometric(3.0, 0.5))(2), 0.75);
  EXPECT_DOUBLE_EQ(constant(7.0)(100), 7.0);
}

TEST(SequenceForms, TableIndexing) {
  Seq t(SequenceSpec::table({5.0, 6.0, 7.0}));
  EXPECT_DOUBLE_EQ(t(1), 5.0);
  EXPECT_DOUBLE_EQ(t(3), 7.0);
  EXPECT_FALSE(t.expansion().has_value());
}

TEST(SequenceForms, IndexBelowOneThrows) {
  EXPECT_THROW(power_seq(1.0, 1.0)(0), DomainError);
  EXPECT_THROW(shift(power_seq(1.0, 1.0), -1)(1), DomainError);
}

TEST(SequenceAlgebra, PointwiseOperationsProperty) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> c(-3.0, 3.0), p(-2.0, 2.0);
  std::uniform_int_distribution<long> idx(1, 5000);
  for (int trial = 0; trial < 200; ++trial) {
    const Seq a = power_seq(c(rng), p(rng)), b = Seq(SequenceSpec::affine(c(rng), c(rng)));
    const long n = idx(rng);
    EXPECT_DOUBLE_EQ((a + b)(n), a(n) + b(n));
    EXPECT_DOUBLE_EQ((a - b)(n), a(n) - b(n));
    EXPECT_DOUBLE_EQ((a * b)(n), a(n) * b(n));
    if (b(n) != 0.0) {
      EXPECT_NEAR((a / b)(n), a(n) / b(n), 1e-12 * std::abs(a(n) / b(n)) + 1e-300);
    }
    EXPECT_DOUBLE_EQ(abs(b)(n), std::abs(b(n)));
    EXPECT_DOUBLE_EQ(min(a, b)(n), std::min(a(n), b(n)));
    EXPECT_DOUBLE_EQ(shift(a, 3)(n), a(n + 3));
  }
}

TEST(SequenceAlgebra, GapOfPartialSumIsIdentity) {
  const Seq a = power_seq(1.0, -0.5);
  const Seq g = gap(partial_sum(a));
  for (long n : {1L, 2L, 17L, 1000L}) EXPECT_NEAR(g(n), a(n), 1e-12);
}

TEST(SequenceAlgebra, PartialSumMatchesLoop) {
  const Seq s = partial_sum(power_seq(1.0, -2.0));
  double acc = 0.0;
  for (long n = 1; n <= 500; ++n) {
    acc += 1.0 / (static_cast<double>(n) * n);
    ASSERT_NEAR(s(n), acc, 1e-13);
  }
}

TEST(SequenceAlgebra, TailSumAgainstZetaTwo) {
  // oracle: sum_{j>=n} j^-2 = pi^2/6 - sum_{j<n} j^-2
  const Seq t = tail_sum(power_seq(1.0, -2.0));
  for (long n : {1L, 2L, 10L, 1000L}) {
    double head = 0.0;
    for (long j = 1; j < n; ++j) head += 1.0 / (static_cast<double>(j) * j);
    EXPECT_NEAR(t(n), std::numbers::pi * std::numbers::pi / 6.0 - head, 1e-9 / n);
  }
}

TEST(SequenceAlgebra, InterleaveAlternates) {
  const Seq s = interleave(constant(1.0), constant(2.0));
  EXPECT_DOUBLE_EQ(s(1), 1.0);
  EXPECT_DOUBLE_EQ(s(2), 2.0);
  EXPECT_DOUBLE_EQ(s(7), 1.0);
}

TEST(SequenceExpansion, PowerLeadingTerm) {
  const Seq s = power_seq(2.0, -1.0);
  const auto& e = s.expansion();
  ASSERT_TRUE(e.has_value());
  ASSERT_NE(e->leading(), nullptr);
  EXPECT_DOUBLE_EQ(e->leading()->coef, 2.0);
  EXPECT_DOUBLE_EQ(e->leading()->scale.power, -1.0);
}

TEST(SequenceExpansion, CancellationIsExactZero) {
  const Seq n = power_seq(1.0, 1.0);
  const Seq s = 2.0 * n + 1.0 - (n + n + 1.0);
  const auto& e = s.expansion();
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(e->is_zero());
}

TEST(SequenceExpansion, GapOfSquareRoot) {
  // sqrt(n) - sqrt(n-1) ~ n^-1/2 / 2
  const Seq s = gap(power_seq(1.0, 0.5));
  const auto& e = s.expansion();
  ASSERT_TRUE(e.has_value());
  EXPECT_NEAR(e->leading()->coef, 0.5, 1e-12);
  EXPECT_NEAR(e->leading()->scale.power, -0.5, 1e-12);
}

TEST(SequenceExpansion, ExpansionTracksValues) {
  // property: the leading term describes the sequence at large n
  const Seq n = power_seq(1.0, 1.0);
  for (const Seq& s : {Seq(3.0 * n * n - n), Seq(1.0 / (n + 1.0)), Seq(sqrt(n + 2.0) * power_seq(1.0, -1.0))}) {
    const auto& e = s.expansion();
    ASSERT_TRUE(e.has_value()) << s.describe();
    const Term* t = e->leading();
    const double x = 1e7;
    EXPECT_NEAR(s(10000000) / (t->coef * std::pow(x, t->scale.power)), 1.0, 1e-5) << s.describe();
  }
}
