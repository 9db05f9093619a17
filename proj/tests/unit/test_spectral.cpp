#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "pointspec/spectral.hpp"

using namespace pointspec;

namespace {

TridiagonalMatrix random_tridiagonal(std::mt19937& rng, long N) {
  std::normal_distribution<double> g(0.0, 3.0);
  TridiagonalMatrix t;
  for (long i = 0; i < N; ++i) t.diag.push_back(g(rng));
  for (long i = 0; i + 1 < N; ++i) t.offdiag.push_back(g(rng));
  return t;
}

}  // namespace

TEST(Eigensolver, FreeMatrixClosedForm) {
  for (long N : {3L, 10L, 100L}) {
    const auto ev = all_eigenvalues(truncate(build_free(), N), 1e-13);
    ASSERT_EQ(static_cast<long>(ev.size()), N);
    for (long k = 1; k <= N; ++k)
      EXPECT_NEAR(ev[k - 1], 2.0 * std::cos((N + 1 - k) * std::numbers::pi / (N + 1)), 1e-10);
  }
}

TEST(Eigensolver, AgreesWithDenseSolver) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TridiagonalMatrix t = random_tridiagonal(rng, 5 + trial * 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.dense());
    const auto ev = all_eigenvalues(t, 1e-12);
    ASSERT_EQ(ev.size(), static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t k = 0; k < ev.size(); ++k) EXPECT_NEAR(ev[k], es.eigenvalues()[k], 1e-9);
  }
}

TEST(Eigensolver, InterlacingProperty) {
  const Seq n = power_seq(1.0, 1.0);
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  for (const JacobiOperatorSpec& J : {build_delta_B2(X, -4.0 * n - 3.0), build_delta_B1(X, n * n),
                                      build_deltaprime_B1(X, constant(1.0))}) {
    for (long N = 2; N <= 30; ++N) {
      const auto big = all_eigenvalues(truncate(J, N));
      const auto small = all_eigenvalues(truncate(J, N - 1));
      const double tol = 1e-9 * (1.0 + std::abs(big.back()) + std::abs(big.front()));
      for (std::size_t k = 0; k < small.size(); ++k) {
        EXPECT_LE(big[k], small[k] + tol);
        EXPECT_LE(small[k], big[k + 1] + tol);
      }
    }
  }
}

TEST(Counting, MatchesWindowEnumeration) {
  std::mt19937 rng(5);
  const TridiagonalMatrix t = random_tridiagonal(rng, 60);
  const auto s = spectrum_window(t, -2.0, 3.0);
  EXPECT_EQ(static_cast<long>(s.eigenvalues.size()), counting_function(t, 3.0) - counting_function(t, -2.0));
  for (double l : s.eigenvalues) {
    EXPECT_GE(l, -2.0);
    EXPECT_LT(l, 3.0);
  }
}

TEST(Counting, GershgorinEnclosesSpectrum) {
  std::mt19937 rng(9);
  const TridiagonalMatrix t = random_tridiagonal(rng, 40);
  const auto [lo, hi] = gershgorin(t);
  EXPECT_EQ(counting_function(t, lo), 0);
  EXPECT_EQ(counting_function(t, hi + 1e-12), 40);
}

TEST(Eigensolver, ParallelMatchesSerial) {
  std::mt19937 rng(13);
  const TridiagonalMatrix t = random_tridiagonal(rng, 200);
  const auto [lo, hi] = gershgorin(t);
  EXPECT_EQ(eig_bisect(t, lo, hi, 1e-12, 1), eig_bisect(t, lo, hi, 1e-12, 4));
}

TEST(LambdaMinTrace, NonIncreasing) {
  const Seq n = power_seq(1.0, 1.0);
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  const auto s = lambda_min_trace(build_delta_B2(X, -4.0 * n - 3.0), {10, 20, 40, 80, 160});
  EXPECT_TRUE(s.trace_nonincreasing);
  ASSERT_EQ(s.lambda_min_trace.size(), 5u);
}

TEST(DeficiencyProbe, DeltaPrimeClosedForms) {
  const Partition X = Partition::from_gaps(Seq(SequenceSpec::geometric(1.0, 0.5)));
  const Seq beta = -1.0 * X.d();
  const auto J = build_deltaprime_B1(X, beta);
  // p_{2n-1} = -p_{2n} = sqrt(d_n); q_{2n-1} = -sqrt(d_n) sum_{k<n} (beta_k + d_k), q_{2n} = -q_{2n-1} + d_n^3/2
  auto p = [&](long k) { const long m = (k + 1) / 2; return (k % 2 ? 1.0 : -1.0) * std::sqrt(X.d(m)); };
  auto q = [&](long k) { const long m = (k + 1) / 2; return k % 2 ? 0.0 : std::pow(X.d(m), 1.5); };
  DeficiencyProbeSettings ds;
  ds.keep_values = 30;
  const auto r = deficiency_probe(J, 0.0, 100000, {p(1), p(2), false}, {q(1), q(2), false}, ds);
  for (long k = 1; k <= 30; ++k) {
    EXPECT_NEAR(r.first_values[k - 1].real(), p(k), 1e-12 * std::abs(p(k)));
    EXPECT_NEAR(r.second_values[k - 1].real(), q(k), 1e-12 * std::abs(q(k)) + 1e-300);
  }
  EXPECT_TRUE(r.both_square_summable());
}

TEST(DeficiencyProbe, UnitStrengthsGrow) {
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  const auto r = deficiency_probe(build_deltaprime_B1(X, constant(1.0)), 0.0, 100000);
  EXPECT_TRUE(r.some_not_square_summable());
}

TEST(Rayleigh, WitnessMatchesTruncatedMatrix) {
  const Partition X = Partition::from_points(power_seq(1.0, 0.5));
  const Seq alpha = power_seq(-1.0, -0.25);
  const auto pts = rayleigh_witness(X, alpha, {5, 20, 50});
  const auto J = build_delta_B2(X, alpha);
  for (const auto& pt : pts) {
    const long M = 2 * pt.N;
    const double q = rayleigh_quotient(truncate(J, M), rayleigh_vector(X, M, Gauge::PositiveOffdiag));
    EXPECT_NEAR(pt.quotient, q, 1e-9 * (1.0 + std::abs(q)));
  }
}

TEST(Rayleigh, ZeroStrengthsStayNonnegative) {
  const Partition X = Partition::from_points(power_seq(1.0, 0.5));
  for (const auto& pt : rayleigh_witness(X, constant(0.0), {10, 100, 1000, 10000, 100000}))
    EXPECT_GE(pt.quotient, -1e-10);
}

TEST(LambdaMinTrace, SqrtPointsKeepFalling) {
  const Partition X = Partition::from_points(power_seq(1.0, 0.5));
  const auto s = lambda_min_trace(build_delta_B2(X, power_seq(-1.0, -0.25)), {100, 1000, 10000, 12000});
  EXPECT_TRUE(s.trace_nonincreasing);
  EXPECT_LT(s.lambda_min_trace.back().second, -10.0);
  // alpha_n = -n^-1/2 levels off near -1
  const auto flat = lambda_min_trace(build_delta_B2(X, power_seq(-1.0, -0.5)), {1000, 10000});
  EXPECT_NEAR(flat.lambda_min_trace.back().second, -1.0, 1e-2);
}
