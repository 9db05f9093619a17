#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pointspec/potential.hpp"
#include "pointspec/weyl.hpp"

using namespace pointspec;

namespace {

double max_abs(const Mat2c& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::Matrix2d mat(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, b, b, c;
  return m;
}

}  // namespace

TEST(WeylRaw, DeltaAtQuarterPeriod) {
  // t = sqrt(z) d = pi/2: t cot t = 0, t / sin t = pi/2
  const auto m = weyl_raw(TripletKind::DeltaRaw, std::numbers::pi / 2, 1.0).value;
  EXPECT_NEAR(std::abs(m(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(m(0, 1).real(), -1.0, 1e-12);
  EXPECT_NEAR(m(1, 0).real(), -1.0, 1e-12);
}

TEST(WeylRaw, PoleIsReported) {
  const double d = 1.0;
  try {
    weyl_raw(TripletKind::DeltaRaw, d, std::numbers::pi * std::numbers::pi);
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_NEAR(e.nearest_pole(), std::numbers::pi * std::numbers::pi, 1e-9);
  }
  EXPECT_THROW(weyl_raw(TripletKind::MixedRaw, d, std::numbers::pi * std::numbers::pi / 4), PoleError);
}

TEST(WeylRegularized, VanishesAtZero) {
  for (double d : {1.0, 0.1, 1e-3}) {
    EXPECT_LT(max_abs(weyl_eval(TripletKind::DeltaRegularized, d, 0.0).value), 1e-10);
    EXPECT_LT(max_abs(weyl_eval(TripletKind::MixedRegularized, d, 0.0).value), 1e-10);
  }
  for (long n : {1L, 10L, 1000L})
    EXPECT_LT(max_abs(weyl_eval(TripletKind::PotentialRegularized, 0.0, 0.0, PotentialIndex{n, 1.5}).value), 1e-8 * n * n);
}

TEST(WeylRegularized, DerivativeAtZero) {
  for (double d : {1.0, 0.1, 1e-3}) {
    EXPECT_LT((weyl_derivative_at_zero(TripletKind::DeltaRegularized, d) - mat(1.0 / 3, -1.0 / 6, 1.0 / 3)).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT((weyl_derivative_at_zero(TripletKind::MixedRegularized, d) - mat(1.0, 0.5, 1.0 / 3)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(WeylRegularized, AgreesWithRegularizedRaw) {
  for (TripletKind k : {TripletKind::DeltaRaw, TripletKind::MixedRaw}) {
    for (double d : {1.0, 0.3}) {
      const cplx z(2.0, 1.0);
      const auto direct = weyl_regularized(k, d, z).value;
      const auto via = regularize(weyl_raw(k, d, z), regularization_data(k, d)).value;
      EXPECT_LT(max_abs(direct - via), 1e-10 * (1.0 + max_abs(direct)));
    }
  }
}

TEST(WeylRegularized, HerglotzImaginaryPart) {
  // property: Im M(z) is positive definite for Im z > 0
  for (TripletKind k : {TripletKind::DeltaRegularized, TripletKind::MixedRegularized}) {
    for (double d : {1.0, 0.2}) {
      for (cplx z : {cplx(0.0, 1.0), cplx(-5.0, 0.3), cplx(7.0, 2.0)}) {
        const auto [lo, hi] = symmetric_eigenvalues(imag_part(weyl_eval(k, d, z).value));
        EXPECT_GT(lo, 0.0) << to_string(k) << " d=" << d;
        EXPECT_GE(hi, lo);
      }
    }
  }
}

TEST(PotentialTriplet, DerivativeClosedFormMatchesDifferences) {
  for (double a : {0.5, 1.0, 1.9150080481545375, 3.0}) {
    const Eigen::Matrix2d fd = weyl_derivative_at_zero(TripletKind::PotentialRegularized, 0.0, 1e-3, PotentialIndex{1, a});
    EXPECT_LT((fd - potential_derivative_at_zero(a)).cwiseAbs().maxCoeff(), 1e-8) << "a=" << a;
  }
}

TEST(PotentialTriplet, SmallCouplingLimit) {
  // a -> 0 recovers the delta-triplet derivative
  EXPECT_LT((potential_derivative_at_zero(1e-3L) - mat(1.0 / 3, -1.0 / 6, 1.0 / 3)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(PotentialTriplet, RootOfCoupling) {
  // independent Newton iteration on a coth a = 2
  double a = 2.0;
  for (int i = 0; i < 50; ++i) {
    const double f = a / std::tanh(a) - 2.0;
    const double df = 1.0 / std::tanh(a) - a / (std::sinh(a) * std::sinh(a));
    a -= f / df;
  }
  EXPECT_NEAR(static_cast<double>(solve_a0()), a, 1e-12);
  EXPECT_NEAR(static_cast<double>(solve_a0()), 1.9150080481545375, 1e-12);
}

TEST(Scan, RegularizedOrdinaryRawNot) {
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  const auto reg = triplet_boundedness_scan(X, TripletKind::DeltaRegularized, 2000);
  const auto raw = triplet_boundedness_scan(X, TripletKind::DeltaRaw, 2000);
  EXPECT_TRUE(reg.ordinary);
  EXPECT_NEAR(reg.rows.back().norm_im_inv, 6.0, 0.6);
  EXPECT_FALSE(raw.ordinary);
  EXPECT_NEAR(raw.slope_norm_M, 1.0, 0.1);
  EXPECT_EQ(reg.to_csv().substr(0, 22), "n,norm_M,norm_im_inv\n1");
}

TEST(Scan, PotentialNeedsCoupling) {
  const Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
  EXPECT_THROW(triplet_boundedness_scan(X, TripletKind::PotentialRegularized, 100), DomainError);
}

TEST(SemiboundedEstimate, UnitGaps) {
  const Partition X = Partition::from_gaps(constant(1.0));
  const auto s = semibounded_estimate(X, 10.0, 100);
  const double oracle = 2.0 - 10.0 / std::tanh(5.0);  // 2/d^2 - (a/d) coth(ad/2)
  EXPECT_NEAR(s.max_eigenvalue, oracle, 1e-12);
  EXPECT_TRUE(s.precondition);
  EXPECT_FALSE(s.claimed_holds());
  EXPECT_TRUE(s.corrected_holds());
  EXPECT_NEAR(s.claimed_margin, -10.0 - oracle, 1e-12);
}

TEST(SemiboundedEstimate, SeriesBranchContinuity) {
  // the small-argument series and the closed form agree across the switch
  for (double a : {1.0, 3.0}) {
    const double x0 = 1e-2 / a;
    EXPECT_NEAR(weyl_F(a, x0 * 0.999999), weyl_F(a, x0 * 1.000001), 1e-6 * a * a);
    EXPECT_NEAR(weyl_G(a, x0 * 0.999999), weyl_G(a, x0 * 1.000001), 1e-6 * a * a);
  }
  EXPECT_NEAR(weyl_f(1e-4), -1.0 / 6, 1e-8);
}
