#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pointspec/jacobi.hpp"

using namespace pointspec;

namespace {
const Seq n = power_seq(1.0, 1.0);
const Partition inv_n = Partition::from_gaps(power_seq(1.0, -1.0));
}  // namespace

TEST(DeltaB2, EntriesForInverseN) {
  const Seq alpha = -2.0 * n - 1.0;
  const JacobiOperatorSpec J = build_delta_B2(inv_n, alpha);
  for (long k = 1; k <= 6; ++k) {
    const double dk = 1.0 / k, dk1 = 1.0 / (k + 1), dk2 = 1.0 / (k + 2);
    EXPECT_NEAR(J.diag(k), (alpha(k) + k + (k + 1.0)) / (dk + dk1), 1e-12);
    EXPECT_NEAR(J.offdiag(k), -1.0 / (std::sqrt(dk + dk1) * std::sqrt(dk1 + dk2) * dk1), 1e-12);
  }
  // alpha_n = -2n - 1 cancels 1/d_n + 1/d_{n+1}
  EXPECT_NEAR(J.diag(5), 0.0, 1e-12);
}

TEST(DeltaB1, InterleavedPattern) {
  const JacobiOperatorSpec J = build_delta_B1(inv_n, constant(3.0));
  EXPECT_DOUBLE_EQ(J.diag(1), 0.0);
  EXPECT_DOUBLE_EQ(J.diag(2), -1.0);
  EXPECT_DOUBLE_EQ(J.diag(3), 3.0 / 0.5);
  EXPECT_DOUBLE_EQ(J.offdiag(1), -1.0);
  EXPECT_NEAR(J.offdiag(2), 1.0 / std::sqrt(0.5), 1e-15);
}

TEST(DeltaPrime, ZeroStrengthRejected) {
  EXPECT_THROW(build_deltaprime_B1(inv_n, n - 3.0), DomainError);
}

TEST(Gauge, SignConjugationGivesPositiveOffdiagonal) {
  const JacobiOperatorSpec J = build_delta_B2(inv_n, -4.0 * n - 3.0);
  const long N = 30;
  const auto s = gauge_signs(J, N);
  const auto signed_form = J.section(N).dense();
  const auto positive = truncate(J, N).dense();
  Eigen::MatrixXd S = Eigen::VectorXd::Map(s.data(), N).asDiagonal();
  EXPECT_LT((S * signed_form * S - positive).cwiseAbs().maxCoeff(), 1e-12);
  for (double b : truncate(J, N).offdiag) EXPECT_GE(b, 0.0);
}

TEST(Truncation, CsvExport) {
  const std::string csv = truncate(build_free(), 3).to_csv();
  EXPECT_EQ(csv, "index,diag,offdiag\n1,0,1\n2,0,1\n3,0,\n");
}

TEST(Factorization, ResidualsVanishOnRandomParameters) {
  // property: the factored products reproduce the direct builds
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> e(0.2, 1.5), c(0.5, 3.0), s(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Partition X = Partition::from_points(power_seq(c(rng), e(rng)));
    const Seq alpha = Seq(SequenceSpec::affine(s(rng), s(rng)));
    const Seq beta = power_seq(c(rng), s(rng));
    EXPECT_LT(factorization_residual(Factorization::DeltaB2, X, alpha, 40), 1e-9);
    EXPECT_LT(factorization_residual(Factorization::DeltaB1, X, alpha, 40), 1e-9);
    EXPECT_LT(factorization_residual(Factorization::DeltaPrimeB1, X, beta, 40), 1e-9);
    EXPECT_LT(factorization_residual(Factorization::DeltaPrimeB2Blocks, X, beta, 40), 1e-9);
  }
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_g17(0.1), "0.10000000000000001");
  EXPECT_EQ(format_g17(2.0), "2");
}
