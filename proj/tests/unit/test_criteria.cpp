#include <gtest/gtest.h>

#include "pointspec/criteria.hpp"

using namespace pointspec;

namespace {

const Seq n = power_seq(1.0, 1.0);
Partition inv_n() { return Partition::from_gaps(power_seq(1.0, -1.0)); }
Partition points(double e) { return Partition::from_points(power_seq(1.0, e)); }

Verdict make(std::string id, Outcome o, Claim c, bool jacobi = false) {
  Verdict v;
  v.criterion_id = std::move(id);
  v.outcome = o;
  v.claim = c;
  v.jacobi_level = jacobi;
  return v;
}

std::vector<std::string> lines(const Report& r) {
  std::vector<std::string> out;
  for (const auto& v : r.verdicts) out.push_back(v.str());
  for (const auto& c : r.conclusions) out.push_back(c.property + "=" + c.value);
  return out;
}

}  // namespace

TEST(Model, Validation) {
  EXPECT_THROW(InteractionModel::deltaprime(points(0.5), constant(0.0)), DomainError);
  EXPECT_THROW(InteractionModel::deltaprime(points(0.5), n - 3.0), DomainError);
  EXPECT_NO_THROW(InteractionModel::delta(points(0.5), constant(0.0)));
  EXPECT_THROW(InteractionModel::delta_with_potential(n, StepPotential{0.0, false}), DomainError);
  auto m = InteractionModel::delta_with_potential(n, StepPotential{0.0, true});
  EXPECT_NEAR(m.potential->a, 1.9150080481545375, 1e-12);
}

TEST(DeltaCriteria, Carleman) {
  EXPECT_EQ(carleman(InteractionModel::delta(points(0.5), n)).outcome, Outcome::Holds);
  EXPECT_EQ(carleman(InteractionModel::delta(inv_n(), n)).outcome, Outcome::Inconclusive);
}

TEST(DeltaCriteria, DeficiencyOne) {
  EXPECT_EQ(deficiency_one_delta(InteractionModel::delta(inv_n(), -2.0 * n - 1.0)).outcome, Outcome::Holds);
  EXPECT_EQ(deficiency_one_delta(InteractionModel::delta(inv_n(), n * n)).outcome, Outcome::Inconclusive);
}

TEST(DeltaCriteria, PeriodicWindow) {
  for (double a : {-0.5, -2.0, -3.5})
    EXPECT_EQ(deficiency_one_periodic(InteractionModel::delta(inv_n(), a * (n + 0.5))).outcome, Outcome::Holds) << a;
  for (double a : {0.5, -4.5})
    EXPECT_EQ(deficiency_one_periodic(InteractionModel::delta(inv_n(), a * (n + 0.5))).outcome, Outcome::Fails) << a;
  EXPECT_DOUBLE_EQ(floquet_discriminant_at_zero(-2.0), -2.0);
  EXPECT_DOUBLE_EQ(floquet_discriminant_at_zero(0.0), 2.0);
  EXPECT_THROW(deficiency_one_periodic(InteractionModel::delta(points(0.5), n)), NotApplicable);
  EXPECT_THROW(deficiency_one_periodic(InteractionModel::delta(inv_n(), power_seq(1.0, 2.0))), NotApplicable);
}

TEST(DeltaCriteria, SelfAdjointAlongInverseN) {
  for (const Seq& alpha : {n * n, -4.0 * n - 3.0, -1.0 / n}) {
    const Report r = analyze(InteractionModel::delta(inv_n(), alpha));
    ASSERT_NE(r.find("deficiency_indices"), nullptr) << r.model;
    EXPECT_EQ(r.find("deficiency_indices")->value, "0 (self-adjoint)") << r.model;
  }
}

TEST(DeltaCriteria, Discreteness) {
  const auto m = InteractionModel::delta(points(0.5), power_seq(1.0, -0.25));
  EXPECT_EQ(delta_discrete(m, DiscreteTest::Chihara1, true).outcome, Outcome::Holds);
  const auto neg = InteractionModel::delta(points(0.5), power_seq(-4.0, 0.5));
  EXPECT_EQ(delta_discrete(neg, DiscreteTest::Chihara1, true).outcome, Outcome::Fails);
}

TEST(DeltaCriteria, AlternatingWitness) {
  const auto m = InteractionModel::delta(points(0.5), power_seq(-1.0, -0.25));
  EXPECT_EQ(delta_alternating_witness(m, {}, {{10, 100, 1000, 10000}}).outcome, Outcome::Holds);
  const auto zero = InteractionModel::delta(points(0.5), constant(0.0));
  EXPECT_NE(delta_alternating_witness(zero, {}, {{10, 100, 1000, 10000}}).outcome, Outcome::Holds);
}

TEST(DeltaPrimeCriteria, SelfAdjointIff) {
  const auto open = InteractionModel::deltaprime(points(0.5), constant(1.0));
  EXPECT_EQ(deltaprime_selfadjoint(open).outcome, Outcome::Holds);
  // finite length with sum (beta + d) = 0 along the whole sequence
  const Partition X = Partition::from_gaps(Seq(SequenceSpec::geometric(0.5, 0.5)));
  const auto closed = InteractionModel::deltaprime(X, -1.0 * X.d());
  const Verdict v = deltaprime_selfadjoint(closed);
  EXPECT_EQ(v.outcome, Outcome::Fails);
  EXPECT_EQ(v.established(), Claim::DeficiencyOne);
  const Report r = analyze(closed);
  ASSERT_FALSE(r.cross_checks.empty());
  EXPECT_TRUE(r.cross_checks.front().consistent) << r.cross_checks.front().detail;
}

TEST(DeltaPrimeCriteria, Discreteness) {
  const Partition X = points(1.0 / 3.0);
  EXPECT_EQ(deltaprime_discrete(InteractionModel::deltaprime(X, power_seq(2.0, -2.0) - X.d())).established(),
            Claim::Discrete);
  EXPECT_EQ(deltaprime_discrete(InteractionModel::deltaprime(X, power_seq(2.0, -4.0 / 3.0) - X.d())).established(),
            Claim::NotDiscrete);
}

TEST(Potential, CriteriaNeedPotential) {
  const auto plain = InteractionModel::delta(inv_n(), -4.0 * n - 2.0);
  EXPECT_THROW(potential_carleman(plain), NotApplicable);
  EXPECT_THROW(potential_berezanskii(plain), NotApplicable);
  const auto with = InteractionModel::delta_with_potential(-4.0 * n - 2.0, StepPotential{0.0, true});
  EXPECT_THROW(carleman(with), NotApplicable);
  for (auto conv : {PotentialOffdiag::NextIndex, PotentialOffdiag::SameIndex})
    EXPECT_EQ(potential_berezanskii(with, {}, conv).outcome, Outcome::Holds);
  EXPECT_EQ(potential_carleman(with).outcome, Outcome::Inconclusive);
}

TEST(Transfer, ConflictingDeficiencyVerdicts) {
  const std::vector<Verdict> vs = {make("x", Outcome::Holds, Claim::SelfAdjoint),
                                   make("y", Outcome::Holds, Claim::DeficiencyOne)};
  EXPECT_THROW(transfer(vs, inv_n()), IntegrityError);
}

TEST(Transfer, DiscreteNeedsShrinkingGaps) {
  const Partition unit = Partition::from_gaps(constant(1.0));
  EXPECT_THROW(transfer({make("x", Outcome::Holds, Claim::Discrete)}, unit), IntegrityError);
  const auto c = transfer({make("x", Outcome::Holds, Claim::Discrete, true)}, unit);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].value, "not discrete");
  const auto z = transfer({make("x", Outcome::Holds, Claim::Discrete, true)}, inv_n());
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].value, "discrete");
}

TEST(Transfer, DeficiencyOneGivesDiscreteExtensions) {
  const auto c = transfer({make("x", Outcome::Holds, Claim::DeficiencyOne)}, inv_n());
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].value, "1");
  EXPECT_EQ(c[1].value, "discrete for every self-adjoint extension");
}

TEST(Transfer, InconclusiveGivesNothing) {
  EXPECT_TRUE(transfer({make("x", Outcome::Inconclusive, Claim::SelfAdjoint)}, inv_n()).empty());
  EXPECT_TRUE(transfer({make("x", Outcome::Fails, Claim::SelfAdjoint)}, inv_n()).empty());
}

TEST(Resolvent, Comparability) {
  const auto a = InteractionModel::delta(inv_n(), n * n);
  const auto b = InteractionModel::delta(inv_n(), n * n + power_seq(1.0, -3.0));
  EXPECT_EQ(resolvent_comparability(a, b, LpTest::finite(2.0)).outcome, Outcome::Holds);
  const auto far = InteractionModel::delta(inv_n(), n * n + 1.0);
  EXPECT_NE(resolvent_comparability(a, far, LpTest::finite(1.0)).outcome, Outcome::Holds);
  EXPECT_THROW(resolvent_comparability(a, InteractionModel::delta(points(0.5), n * n), LpTest::finite(2.0)),
               DomainError);
  EXPECT_THROW(resolvent_comparability(a, InteractionModel::deltaprime(inv_n(), constant(1.0)), LpTest::finite(2.0)),
               DomainError);
}

TEST(Analyze, DeterministicAcrossJobs) {
  for (const auto& m : {InteractionModel::delta(inv_n(), -2.0 * n - 1.0),
                        InteractionModel::deltaprime(points(1.0 / 3.0), constant(1.0))}) {
    const auto one = lines(analyze(m, {ProbeSettings{}, 1, true}));
    EXPECT_EQ(one, lines(analyze(m, {ProbeSettings{}, 6, true})));
    EXPECT_EQ(one, lines(analyze(m, {ProbeSettings{}, 1, true})));
  }
}
