#include <gtest/gtest.h>

#include <random>

#include "pointspec/criteria.hpp"
#include "pointspec/krein_string.hpp"

using namespace pointspec;

namespace {

Partition points(double e) { return Partition::from_points(power_seq(1.0, e)); }

}  // namespace

TEST(StringData, RejectsNonPositive) {
  EXPECT_THROW(string_from_deltaprime(points(0.5), constant(-1.0)), DomainError);
  EXPECT_THROW(string_from_deltaprime(points(0.5), power_seq(1.0, 1.0) - 3.0), DomainError);
  EXPECT_THROW(StringData::make(constant(1.0), constant(0.0)), DomainError);
}

TEST(StringData, InterleavesGapsAndStrengths) {
  const Partition X = points(0.5);
  const Seq beta = power_seq(2.0, 1.0);
  const StringData s = string_from_deltaprime(X, beta);
  for (long n = 1; n <= 20; ++n) {
    EXPECT_DOUBLE_EQ(s.length(2 * n - 1), X.d(n));
    EXPECT_DOUBLE_EQ(s.length(2 * n), beta(n));
    EXPECT_DOUBLE_EQ(s.mass(2 * n - 1), X.d(n));
    EXPECT_DOUBLE_EQ(s.mass(2 * n), X.d(n));
  }
}

TEST(StringMatrix, FactorizationResidual) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> e(0.2, 0.9), c(0.5, 3.0), p(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const StringData s = string_from_deltaprime(points(e(rng)), power_seq(c(rng), p(rng)));
    const double scale = build_J_ml(s).section(50).dense().cwiseAbs().maxCoeff();
    EXPECT_LT(string_factorization_residual(s, 50), 1e-14 * scale);
  }
}

TEST(StringMatrix, EntriesForUnitString) {
  // m = l = 1: diagonal 1, 2, 2, ...; off-diagonal 1
  const auto J = build_J_ml(StringData::make(constant(1.0), constant(1.0)));
  EXPECT_DOUBLE_EQ(J.diag(1), 1.0);
  EXPECT_DOUBLE_EQ(J.diag(5), 2.0);
  EXPECT_DOUBLE_EQ(J.offdiag(3), 1.0);
  EXPECT_THROW(string_factorization_residual(StringData::make(constant(1.0), constant(1.0)), 1), DomainError);
}

TEST(StringVerdicts, AgreeWithDirectCriterion) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> e(0.25, 0.75), c(0.5, 2.0), p(-2.5, 1.0);
  int decided = 0;
  for (int k = 0; k < 12; ++k) {
    const auto m = InteractionModel::deltaprime(points(e(rng)), power_seq(c(rng), p(rng)));
    const StringData s = string_from_deltaprime(m.X, m.strengths);
    const Verdict kk = kac_krein(s), direct = deltaprime_discrete(m);
    if (kk.established() && direct.established()) {
      EXPECT_EQ(*kk.established(), *direct.established()) << m.describe();
      ++decided;
    }
    const Verdict h = hamburger(s), sa = deltaprime_selfadjoint(m);
    if (h.established() && sa.established()) {
      EXPECT_EQ(*h.established(), *sa.established()) << m.describe();
    }
  }
  EXPECT_GT(decided, 0);
}

TEST(StringVerdicts, InfiniteLengthIsSelfAdjoint) {
  const StringData s = string_from_deltaprime(points(0.5), constant(1.0));
  EXPECT_EQ(hamburger(s).outcome, Outcome::Holds);
  EXPECT_EQ(s.total_length().kind, ProbeKind::DivergesToInf);
}

TEST(JacobiSplit, BetaPartNeedsPositiveSum) {
  const Partition X = points(1.0 / 3.0);
  const auto bad = jx_jbeta_split(X, -1.0 * X.d() - 1.0);
  EXPECT_FALSE(bad.J_beta.has_value());
  EXPECT_FALSE(bad.note.empty());

  const Seq beta = power_seq(1.0, -0.5);
  const auto ok = jx_jbeta_split(X, beta);
  ASSERT_TRUE(ok.J_beta.has_value());
  const auto ref = build_J_ml(StringData::make(X.d(), beta + X.d()));
  for (long n = 1; n <= 30; ++n) {
    EXPECT_DOUBLE_EQ(ok.J_beta->diag(n), ref.diag(n));
    EXPECT_DOUBLE_EQ(ok.J_beta->offdiag(n), ref.offdiag(n));
    EXPECT_NEAR(ok.J_X.diag(n), (n == 1 ? 1.0 / std::pow(X.d(1), 4)
                                        : (1.0 / std::pow(X.d(n - 1), 3) + 1.0 / std::pow(X.d(n), 3)) / X.d(n)),
                1e-9 * std::abs(ok.J_X.diag(n)));
  }
}
