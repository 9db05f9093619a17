#include <gtest/gtest.h>

#include <cmath>

#include "pointspec/partition.hpp"

using namespace pointspec;

TEST(Partition, FromGapsPartialSums) {
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  double h = 0.0;
  for (long n = 1; n <= 100; ++n) {
    h += 1.0 / n;
    ASSERT_NEAR(X.x(n), h, 1e-12);
  }
  EXPECT_DOUBLE_EQ(X.x(0), 0.0);
  EXPECT_TRUE(X.is_inverse_n());
}

TEST(Partition, FromPointsGaps) {
  const Partition X = Partition::from_points(power_seq(1.0, 0.5));
  for (long n : {1L, 2L, 50L}) EXPECT_NEAR(X.d(n), std::sqrt(n) - std::sqrt(n - 1.0), 1e-14);
  EXPECT_NEAR(X.r(3), std::sqrt(X.d(3) + X.d(4)), 1e-15);
  EXPECT_FALSE(X.is_inverse_n());
}

TEST(Partition, PointsMustStartAtZero) {
  EXPECT_THROW(Partition::from_points(power_seq(1.0, 1.0) + 1.0), DomainError);
}

TEST(Partition, NonPositiveGapsRejected) {
  EXPECT_THROW(Partition::from_gaps(constant(-1.0)), DomainError);
}

TEST(Partition, TotalLength) {
  const Partition b = Partition::from_gaps(Seq(SequenceSpec::geometric(1.0, 0.5)));
  const ProbeResult L = b.total_length();
  ASSERT_EQ(L.kind, ProbeKind::Converges);
  EXPECT_NEAR(L.value, 1.0, 1e-12);
  EXPECT_TRUE(Partition::from_gaps(power_seq(1.0, -1.0)).total_length().diverges());
}

TEST(Partition, GapExtremes) {
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  EXPECT_NEAR(X.d_limit().value, 0.0, 0.0);
  EXPECT_NEAR(X.d_upper().value, 1.0, 1e-12);
  const Partition K = Partition::from_gaps(constant(0.5));
  EXPECT_NEAR(K.d_lower().value, 0.5, 1e-12);
}
