#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pointspec/probes.hpp"

using namespace pointspec;

namespace {
const Seq n = power_seq(1.0, 1.0);
}

TEST(SeriesProbe, HarmonicDiverges) {
  const ProbeResult r = series_probe(power_seq(1.0, -1.0));
  EXPECT_EQ(r.kind, ProbeKind::DivergesToInf);
  EXPECT_TRUE(r.exact());
}

TEST(SeriesProbe, BaselProblemValue) {
  const ProbeResult r = series_probe(power_seq(1.0, -2.0));
  ASSERT_EQ(r.kind, ProbeKind::Converges);
  EXPECT_NEAR(r.value, std::numbers::pi * std::numbers::pi / 6.0, 1e-8);
}

TEST(SeriesProbe, GeometricValue) {
  const ProbeResult r = series_probe(Seq(SequenceSpec::geometric(1.0, 0.5)));
  ASSERT_EQ(r.kind, ProbeKind::Converges);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(SeriesProbe, NegativeTermsDivergeToMinusInfinity) {
  EXPECT_EQ(series_probe(-1.0 * power_seq(1.0, -0.5)).kind, ProbeKind::DivergesToNegInf);
}

TEST(SeriesProbe, TableWithTailHint) {
  std::vector<double> v;
  for (int k = 1; k <= 50; ++k) v.push_back(1.0 / (static_cast<double>(k) * k * k));
  const Seq t(SequenceSpec::table(v, PowerTerm{1.0, -3.0}));
  EXPECT_EQ(series_probe(t).kind, ProbeKind::Converges);
}

TEST(LimitProbe, RationalLimit) {
  const ProbeResult r = limit_probe((n + 1.0) / n);
  ASSERT_EQ(r.kind, ProbeKind::LimitIs);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(LimitProbe, Divergence) {
  EXPECT_EQ(limit_probe(sqrt(n)).kind, ProbeKind::DivergesToInf);
  EXPECT_EQ(limit_probe(-1.0 * n).kind, ProbeKind::DivergesToNegInf);
  EXPECT_EQ(limit_probe(power_seq(1.0, -1.0)).value, 0.0);
}

TEST(LpMembership, InverseN) {
  const Seq s = power_seq(1.0, -1.0);
  EXPECT_EQ(lp_membership(s, LpTest::finite(2.0)).outcome, Outcome::Holds);
  EXPECT_EQ(lp_membership(s, LpTest::finite(1.0)).outcome, Outcome::Fails);
  EXPECT_EQ(lp_membership(s, LpTest::null()).outcome, Outcome::Holds);
  EXPECT_EQ(lp_membership(n, LpTest::bounded()).outcome, Outcome::Fails);
}

TEST(LpMembership, MonotoneInP) {
  // property: l_p inclusions for power sequences
  for (double q : {0.3, 0.6, 1.1, 2.5}) {
    const Seq s = power_seq(1.0, -q);
    bool prev = false;
    for (double p : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const bool in = lp_membership(s, LpTest::finite(p)).outcome == Outcome::Holds;
      EXPECT_EQ(in, q * p > 1.0) << "q=" << q << " p=" << p;
      if (prev) {
        EXPECT_TRUE(in);
      }
      prev = in;
    }
  }
}

TEST(Bounds, BelowAndAbove) {
  EXPECT_EQ(bounded_below(-1.0 / n).outcome, Outcome::Holds);
  EXPECT_EQ(bounded_below(-1.0 * n).outcome, Outcome::Fails);
  EXPECT_EQ(bounded_above(-1.0 * n).outcome, Outcome::Holds);
  EXPECT_EQ(bounded_above(sqrt(n)).outcome, Outcome::Fails);
}

TEST(Bounds, EventualSign) {
  EXPECT_EQ(eventually_nonnegative(n - 10.0).outcome, Outcome::Holds);
  EXPECT_EQ(eventually_nonnegative(10.0 - n).outcome, Outcome::Fails);
  EXPECT_EQ(eventually_nonnegative(n - n).outcome, Outcome::Holds);
}

TEST(ProbeResultText, MentionsMethod) {
  const ProbeResult r = series_probe(power_seq(1.0, -2.0));
  EXPECT_NE(r.str().find(to_string(r.method)), std::string::npos);
}
