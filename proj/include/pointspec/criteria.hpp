#ifndef POINTSPEC_CRITERIA_HPP
#define POINTSPEC_CRITERIA_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "krein_string.hpp"
#include "partition.hpp"
#include "potential.hpp"
#include "spectral.hpp"
#include "verdict.hpp"

namespace pointspec {

enum class InteractionKind { Delta, DeltaPrime };

inline const char* to_string(InteractionKind k) { return k == InteractionKind::Delta ? "Delta" : "DeltaPrime"; }

// Step potential a^2 n^2 on the n-th interval of the partition d_n = 1/n.
struct StepPotential {
  double a = 0.0;
  bool at_root = false;  // a is the root of a coth a = 2
};

struct InteractionModel {
  InteractionKind kind = InteractionKind::Delta;
  Partition X;
  Seq strengths;  // alpha for Delta, beta for DeltaPrime
  std::optional<StepPotential> potential;
  std::string label;

  static InteractionModel delta(Partition X, Seq alpha, std::string label = "") {
    InteractionModel m{InteractionKind::Delta, std::move(X), std::move(alpha), std::nullopt, std::move(label)};
    m.validate();
    return m;
  }
  static InteractionModel deltaprime(Partition X, Seq beta, std::string label = "") {
    InteractionModel m{InteractionKind::DeltaPrime, std::move(X), std::move(beta), std::nullopt, std::move(label)};
    m.validate();
    return m;
  }
  static InteractionModel delta_with_potential(Seq alpha, StepPotential q, std::string label = "") {
    if (q.at_root) q.a = static_cast<double>(solve_a0());
    InteractionModel m{InteractionKind::Delta, Partition::from_gaps(power_seq(1.0, -1.0)), std::move(alpha), q,
                       std::move(label)};
    m.validate();
    return m;
  }

  void validate() const {
    if (kind == InteractionKind::DeltaPrime) {
      for (long n = 1; n <= 64; ++n)
        if (strengths(n) == 0.0) throw DomainError("delta-prime strengths must be nonzero; beta_" + std::to_string(n) + " = 0");
      if (const auto& e = strengths.expansion(); e && e->is_zero())
        throw DomainError("delta-prime strengths vanish identically");
    }
    if (potential) {
      if (kind != InteractionKind::Delta) throw DomainError("the step potential is only defined for delta interactions");
      if (!X.is_inverse_n() || X.d(1) != 1.0) throw DomainError("the step potential needs d_n = 1/n");
      if (!(potential->a > 0)) throw DomainError("the step potential needs a > 0");
    }
  }

  std::string describe() const {
    std::string s = std::string(to_string(kind)) + " on " + X.describe() + ", " +
                    (kind == InteractionKind::Delta ? "alpha" : "beta") + "_n = " + strengths.describe();
    if (potential) s += ", step potential a = " + format_g17(potential->a);
    return s;
  }
};

namespace detail {

inline ProbeResult bound_evidence(const std::string& subject, const LowerBound& b, const ProbeSettings& cfg) {
  std::string d = b.detail;
  if (b.witness) d += "; witness C = " + format_g17(*b.witness);
  return scan_evidence(subject, b.method, b.observed_inf, cfg.horizon, d);
}

inline ProbeResult sign_evidence(const std::string& subject, const SignCheck& c, const ProbeSettings& cfg) {
  return scan_evidence(subject, c.method, NAN, cfg.horizon, std::string(to_string(c.outcome)) + ": " + c.detail);
}

// Does s(n) >= -tol * |scale(n)| hold for first <= n <= last?
inline bool scan_nonnegative(const Seq& s, const Seq& scale, long first, long last, long* bad = nullptr) {
  const auto v = s.values(first, last), w = scale.values(first, last);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] >= -1e-12 * std::abs(w[i]))) {
      if (bad) *bad = first + static_cast<long>(i);
      return false;
    }
  return true;
}

inline long scan_limit(const ProbeSettings& cfg) { return std::min<long>(cfg.horizon, 10000); }

inline Seq r_seq(const Partition& X) { return sqrt(X.d() + shift(X.d(), 1)); }

inline ZeroTest d_tends_to_zero(const Partition& X, const ProbeSettings& cfg, ProbeResult* ev = nullptr) {
  ProbeResult r = X.d_limit(cfg);
  if (ev) *ev = r;
  return limit_is_zero(r);
}

inline void require_delta(const InteractionModel& m, const char* what) {
  if (m.kind != InteractionKind::Delta) throw NotApplicable(std::string(what) + " applies to delta interactions");
  if (m.potential) throw NotApplicable(std::string(what) + " does not cover the step potential");
}
inline void require_deltaprime(const InteractionModel& m, const char* what) {
  if (m.kind != InteractionKind::DeltaPrime) throw NotApplicable(std::string(what) + " applies to delta-prime interactions");
}

}  // namespace detail

// ---- delta interactions ------------------------------------------------------------------

inline Verdict carleman(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "carleman");
  Verdict v = detail::make_verdict("delta.carleman", Claim::SelfAdjoint, "Carleman: sum d_n^2 = inf");
  ProbeResult r = series_probe(pow(m.X.d(), 2.0), cfg, "sum d_n^2");
  v.evidence.push_back(r);
  if (r.diverges()) {
    v.outcome = Outcome::Holds;
  } else {
    v.reason = r.kind == ProbeKind::Converges ? "sum d_n^2 converges; the test is only sufficient"
                                              : "series undecided: " + r.detail;
  }
  return v;
}

inline Verdict dennis_wall(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "dennis_wall");
  Verdict v = detail::make_verdict("delta.dennis_wall", Claim::SelfAdjoint,
                                   "Dennis-Wall: sum |alpha_n| d_n d_{n+1} r_{n-1} r_{n+1} = inf");
  const Seq d = m.X.d(), r = detail::r_seq(m.X);
  const Seq terms = abs(m.strengths) * d * shift(d, 1) * shift(r, -1) * shift(r, 1);
  ProbeResult p = series_probe(terms, cfg, "sum |alpha_n| d_n d_{n+1} r_{n-1} r_{n+1}");
  v.evidence.push_back(p);
  if (p.diverges()) {
    v.outcome = Outcome::Holds;
  } else {
    v.reason = p.kind == ProbeKind::Converges ? "series converges; the test is only sufficient"
                                              : "series undecided: " + p.detail;
  }
  return v;
}

enum class Side { Upper, Lower };

// Upper: alpha_n + (1 + r_n/r_{n-1})/d_n + (1 + r_n/r_{n+1})/d_{n+1} <= C (d_n + d_{n+1}).
// Lower: alpha_n + (1 - r_n/r_{n-1})/d_n + (1 - r_n/r_{n+1})/d_{n+1} >= -C (d_n + d_{n+1}).
inline Verdict berezanskii_bound(const InteractionModel& m, Side side, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "berezanskii_bound");
  const bool up = side == Side::Upper;
  Verdict v = detail::make_verdict(
      up ? "delta.berezanskii_upper" : "delta.berezanskii_lower", Claim::SelfAdjoint,
      up ? "alpha_n + (1 + r_n/r_{n-1})/d_n + (1 + r_n/r_{n+1})/d_{n+1} <= C (d_n + d_{n+1})"
         : "alpha_n + (1 - r_n/r_{n-1})/d_n + (1 - r_n/r_{n+1})/d_{n+1} >= -C (d_n + d_{n+1})");
  const Seq d = m.X.d(), d1 = shift(d, 1), r = detail::r_seq(m.X);
  const double sg = up ? 1.0 : -1.0;
  const Seq E = m.strengths + (1.0 + sg * r / shift(r, -1)) / d + (1.0 + sg * r / shift(r, 1)) / d1;
  const Seq q = E / (d + d1);
  const LowerBound b = up ? bounded_above(q, cfg) : bounded_below(q, cfg);
  v.evidence.push_back(detail::bound_evidence(up ? "sup of the normalized upper margin" : "inf of the normalized lower margin", b, cfg));
  if (b.outcome == Outcome::Holds) {
    v.outcome = Outcome::Holds;
  } else {
    v.reason = b.outcome == Outcome::Fails ? "no constant C works; the test is only sufficient"
                                           : "bound undecided: " + b.detail;
  }
  return v;
}

// d in l_2, d_{n-1} d_{n+1} >= d_n^2, sum d_{n+1} |alpha_n + 1/d_n + 1/d_{n+1}| < inf  =>  n = 1.
inline Verdict deficiency_one_delta(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "deficiency_one_delta");
  Verdict v = detail::make_verdict(
      "delta.deficiency_one", Claim::DeficiencyOne,
      "d in l_2, d_{n-1} d_{n+1} >= d_n^2 and sum d_{n+1} |alpha_n + 1/d_n + 1/d_{n+1}| < inf");
  const Seq d = m.X.d(), d1 = shift(d, 1);
  ProbeResult l2 = series_probe(pow(d, 2.0), cfg, "sum d_n^2");
  v.evidence.push_back(l2);
  if (l2.kind != ProbeKind::Converges) {
    v.reason = "precondition d in l_2 not met";
    return v;
  }
  const Seq g = shift(d, -1) * d1 - d * d;
  const SignCheck sc = eventually_nonnegative(g, cfg);
  long bad = 0;
  const bool scanned = detail::scan_nonnegative(g, d * d, 2, detail::scan_limit(cfg), &bad);
  v.evidence.push_back(detail::sign_evidence("d_{n-1} d_{n+1} - d_n^2", sc, cfg));
  if (!scanned || sc.outcome == Outcome::Fails) {
    v.reason = scanned ? "gaps are not log-concave eventually" : "log-concavity fails at n = " + std::to_string(bad);
    return v;
  }
  if (sc.outcome != Outcome::Holds) {
    v.reason = "log-concavity undecided: " + sc.detail;
    return v;
  }
  const Seq terms = d1 * abs(m.strengths + 1.0 / d + 1.0 / d1);
  ProbeResult s = series_probe(terms, cfg, "sum d_{n+1} |alpha_n + 1/d_n + 1/d_{n+1}|");
  v.evidence.push_back(s);
  if (s.kind == ProbeKind::Converges) {
    v.outcome = Outcome::Holds;
  } else {
    v.reason = s.diverges() ? "summability condition fails; the test is only sufficient"
                            : "series undecided: " + s.detail;
  }
  return v;
}

// Floquet discriminant at 0 for alpha_n = a (n + 1/2): -2 + (2 + a)^2.
inline double floquet_discriminant_at_zero(double a) { return -2.0 + (2.0 + a) * (2.0 + a); }

// d_n = 1/n and alpha_n = a (n + 1/2) + O(1/n): deficiency one iff a in (-4, 0).
inline Verdict deficiency_one_periodic(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "deficiency_one_periodic");
  if (!m.X.is_inverse_n()) throw NotApplicable("periodic window test needs d_n = 1/n");
  const auto& e = m.strengths.expansion();
  if (!e) throw NotApplicable("periodic window test needs an asymptotic form of alpha");
  const Seq n = power_seq(1.0, 1.0);
  // slope a from the n-coefficient
  const double a = (m.strengths(2000000) - m.strengths(1000000)) / 1000000.0;
  const Seq rest = m.strengths - a * (n + 0.5);
  const auto& re = rest.expansion();
  bool ok = re && (re->is_zero() || (!re->leading() && re->remainder() &&
                                     compare(*re->remainder(), Scale{1.0, -1.0, 0.0}) <= 0));
  if (re && !ok && re->leading()) ok = compare(re->leading()->scale, Scale{1.0, -1.0, 0.0}) <= 0;
  if (!ok) throw NotApplicable("alpha is not of the form a (n + 1/2) + O(1/n)");
  Verdict v = detail::make_verdict("delta.periodic_window", Claim::DeficiencyOne,
                                   "d_n = 1/n, alpha_n = a (n + 1/2) + O(1/n): deficiency one for a in (-4, 0)");
  const double D = floquet_discriminant_at_zero(a);
  ProbeResult ev = detail::symbolic("Floquet discriminant at 0", ProbeKind::LimitIs, D,
                                    "slope a = " + format_g17(a) + "; remainder " + re->str());
  v.evidence.push_back(ev);
  v.p = a;
  (void)cfg;
  if (a > -4.0 && a < 0.0) {
    v.outcome = Outcome::Holds;
    if (std::abs(D) >= 2.0) v.reason = "|discriminant| = 2 at a = -2; bounded solutions give the conclusion";
  } else {
    v.outcome = Outcome::Fails;
    v.reason = "slope outside (-4, 0)";
  }
  return v;
}

enum class DiscreteTest { Chihara1, Chihara2, Cojuhari };

inline const char* to_string(DiscreteTest t) {
  switch (t) {
    case DiscreteTest::Chihara1: return "chihara1";
    case DiscreteTest::Chihara2: return "chihara2";
    case DiscreteTest::Cojuhari: return "cojuhari";
  }
  return "?";
}

namespace detail {

// Outcome of "lim s > threshold" (or < when below = true).
inline Outcome compare_limit(const ProbeResult& r, double threshold, bool below) {
  if (r.kind == ProbeKind::DivergesToInf) return below ? Outcome::Fails : Outcome::Holds;
  if (r.kind == ProbeKind::DivergesToNegInf) return below ? Outcome::Holds : Outcome::Fails;
  if (r.kind != ProbeKind::LimitIs) return Outcome::Inconclusive;
  const double tol = r.exact() ? 0.0 : std::max(r.tolerance, 1e-9);
  if (below) return r.value < threshold - tol ? Outcome::Holds : (r.value >= threshold + tol || r.exact() ? Outcome::Fails : Outcome::Inconclusive);
  return r.value > threshold + tol ? Outcome::Holds : (r.value <= threshold - tol || r.exact() ? Outcome::Fails : Outcome::Inconclusive);
}

}  // namespace detail

// Sufficient discreteness tests; Chihara tests need self-adjointness established elsewhere.
inline Verdict delta_discrete(const InteractionModel& m, DiscreteTest t, bool self_adjoint_known,
                              const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "delta_discrete");
  const Seq d = m.X.d(), d1 = shift(d, 1), a = m.strengths;
  Verdict v;
  switch (t) {
    case DiscreteTest::Chihara1:
      v = detail::make_verdict("delta.chihara1", Claim::Discrete, "|alpha_n|/d_n -> inf and lim 1/(d_n alpha_n) > -1/4");
      break;
    case DiscreteTest::Chihara2:
      v = detail::make_verdict("delta.chihara2", Claim::Discrete,
                               "|alpha_n + 1/d_n + 1/d_{n+1}|/(d_n + d_{n+1}) -> inf and "
                               "lim (alpha_n d_{n+1} + 1 + d_{n+1}/d_n)^-1 (alpha_{n+1} d_{n+1} + 1 + d_{n+1}/d_{n+2})^-1 < 1/4");
      break;
    case DiscreteTest::Cojuhari:
      v = detail::make_verdict("delta.cojuhari", Claim::Discrete,
                               "(alpha_n + 1/d_n + 1/d_{n+1} - r_{n-1}/(d_n r_n) - r_{n+1}/(d_{n+1} r_n))/(d_n + d_{n+1}) -> +inf");
      break;
  }
  ProbeResult dl;
  const ZeroTest dz = detail::d_tends_to_zero(m.X, cfg, &dl);
  v.evidence.push_back(dl);
  if (dz != ZeroTest::Zero) {
    v.reason = dz == ZeroTest::NonZero ? "d_n does not tend to 0" : "lim d_n undecided";
    return v;
  }
  if (t != DiscreteTest::Cojuhari && !self_adjoint_known) {
    v.reason = "self-adjointness not established";
    return v;
  }
  if (t == DiscreteTest::Chihara1) {
    ProbeResult p1 = limit_probe(abs(a) / d, cfg, "lim |alpha_n|/d_n");
    v.evidence.push_back(p1);
    if (p1.kind != ProbeKind::DivergesToInf) {
      v.outcome = p1.decided() ? Outcome::Fails : Outcome::Inconclusive;
      v.reason = "|alpha_n|/d_n does not tend to infinity";
      return v;
    }
    ProbeResult p2 = limit_probe(1.0 / (d * a), cfg, "lim 1/(d_n alpha_n)");
    v.evidence.push_back(p2);
    v.outcome = detail::compare_limit(p2, -0.25, false);
    if (v.outcome == Outcome::Fails) v.reason = "lim 1/(d_n alpha_n) <= -1/4";
    return v;
  }
  if (t == DiscreteTest::Chihara2) {
    const Seq c = a + 1.0 / d + 1.0 / d1;
    ProbeResult p1 = limit_probe(abs(c) / (d + d1), cfg, "lim |alpha_n + 1/d_n + 1/d_{n+1}|/(d_n + d_{n+1})");
    v.evidence.push_back(p1);
    if (p1.kind != ProbeKind::DivergesToInf) {
      v.outcome = p1.decided() ? Outcome::Fails : Outcome::Inconclusive;
      v.reason = "first limit is finite";
      return v;
    }
    const Seq u = a * d1 + 1.0 + d1 / d;
    const Seq w = shift(a, 1) * d1 + 1.0 + d1 / shift(d, 2);
    ProbeResult p2 = limit_probe(1.0 / (u * w), cfg, "lim of the product of reciprocals");
    v.evidence.push_back(p2);
    v.outcome = detail::compare_limit(p2, 0.25, true);
    if (v.outcome == Outcome::Fails) v.reason = "second limit >= 1/4";
    return v;
  }
  const Seq r = detail::r_seq(m.X);
  const Seq c = a + 1.0 / d + 1.0 / d1 - shift(r, -1) / (d * r) - shift(r, 1) / (d1 * r);
  ProbeResult p = limit_probe(c / (d + d1), cfg, "lim of the normalized Cojuhari sequence");
  v.evidence.push_back(p);
  if (p.kind == ProbeKind::DivergesToInf) {
    v.outcome = Outcome::Holds;
    v.reason = "also gives self-adjointness";
  } else {
    v.outcome = p.decided() ? Outcome::Fails : Outcome::Inconclusive;
    v.reason = "limit is not +inf";
  }
  return v;
}

// Sufficient: inf alpha_n/(d_n + d_{n+1}) > -inf.
inline Verdict delta_semibounded(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "delta_semibounded");
  Verdict v = detail::make_verdict("delta.semibounded_ratio", Claim::SemiboundedBelow,
                                   "inf alpha_n/(d_n + d_{n+1}) > -inf");
  const Seq d = m.X.d();
  const LowerBound b = bounded_below(m.strengths / (d + shift(d, 1)), cfg);
  v.evidence.push_back(detail::bound_evidence("inf alpha_n/(d_n + d_{n+1})", b, cfg));
  v.outcome = b.outcome;
  if (b.outcome == Outcome::Fails) v.reason = "ratio unbounded below; the test is only sufficient";
  if (b.outcome == Outcome::Inconclusive) v.reason = b.detail;
  return v;
}

// With d_* > 0: semibounded iff inf alpha_n > -inf.
inline Verdict delta_semibounded_iff(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_delta(m, "delta_semibounded_iff");
  const ProbeResult lo = m.X.d_lower(cfg);
  if (lo.kind != ProbeKind::LimitIs || !(lo.value > 0)) throw NotApplicable("needs d_* > 0");
  Verdict v = detail::make_verdict("delta.semibounded_iff", Claim::SemiboundedBelow,
                                   "for d_* > 0: semibounded below iff inf alpha_n > -inf");
  v.implies = Claim::NotSemibounded;
  v.evidence.push_back(lo);
  const LowerBound b = bounded_below(m.strengths, cfg);
  v.evidence.push_back(detail::bound_evidence("inf alpha_n", b, cfg));
  v.outcome = b.outcome;
  if (b.outcome == Outcome::Inconclusive) v.reason = b.detail;
  return v;
}

struct WitnessSettings {
  std::vector<long> block_counts;  // empty: decades 10, 100, ... up to the horizon
};

// Rayleigh quotients on the sign-alternating test vectors; a quotient that keeps falling by
// non-shrinking steps over decades of N is taken as evidence of unboundedness below.
inline Verdict delta_alternating_witness(const InteractionModel& m, const ProbeSettings& cfg = {},
                                         WitnessSettings ws = {}) {
  detail::require_delta(m, "delta_alternating_witness");
  Verdict v = detail::make_verdict("delta.alternating_witness", Claim::NotSemibounded,
                                   "Rayleigh quotients of finitely supported test vectors tend to -inf");
  if (ws.block_counts.empty())
    for (long N = 10; N <= cfg.horizon; N *= 10) ws.block_counts.push_back(N);
  const auto pts = rayleigh_witness(m.X, m.strengths, ws.block_counts);
  std::string trace;
  for (const auto& p : pts) trace += (trace.empty() ? "" : ", ") + std::to_string(p.N) + ":" + format_g17(p.quotient);
  ProbeResult ev;
  ev.subject = "Rayleigh quotient over block counts";
  ev.kind = ProbeKind::LimInf;
  ev.value = pts.empty() ? NAN : pts.back().quotient;
  ev.horizon = pts.empty() ? 0 : pts.back().N;
  ev.detail = trace;
  v.evidence.push_back(ev);
  const std::size_t k = pts.size();
  if (k < 4) {
    v.reason = "too few block counts";
    return v;
  }
  const double q1 = pts[k - 3].quotient, q2 = pts[k - 2].quotient, q3 = pts[k - 1].quotient;
  if (q3 < 0 && q3 < q2 && q2 < q1 && (q2 - q3) >= 0.5 * (q1 - q2)) {
    v.outcome = Outcome::Holds;
  } else {
    v.reason = "quotients settle";
  }
  return v;
}

// ---- delta-prime interactions -------------------------------------------------------------

// Self-adjoint iff sum d_n = inf or sum d_{n+1} |sum_{i<=n} (beta_i + d_i)|^2 = inf.
inline Verdict deltaprime_selfadjoint(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_deltaprime(m, "deltaprime_selfadjoint");
  Verdict v = detail::make_verdict("deltaprime.selfadjoint", Claim::SelfAdjoint,
                                   "self-adjoint iff sum d_n = inf or sum d_{n+1} |sum_{i<=n} (beta_i + d_i)|^2 = inf");
  v.implies = Claim::DeficiencyOne;
  const Seq d = m.X.d();
  ProbeResult len = m.X.total_length(cfg);
  v.evidence.push_back(len);
  if (len.diverges()) {
    v.outcome = Outcome::Holds;
    return v;
  }
  if (len.kind != ProbeKind::Converges) {
    v.reason = "total length undecided";
    return v;
  }
  const Seq S = partial_sum(m.strengths + d);
  ProbeResult s = series_probe(shift(d, 1) * pow(S, 2.0), cfg, "sum d_{n+1} (sum_{i<=n} (beta_i + d_i))^2");
  v.evidence.push_back(s);
  if (s.diverges()) {
    v.outcome = Outcome::Holds;
  } else if (s.kind == ProbeKind::Converges) {
    v.outcome = Outcome::Fails;
  } else {
    v.reason = "series undecided: " + s.detail;
  }
  return v;
}

namespace detail {

inline Verdict discrete_result(Verdict v, ZeroTest z, std::string why) {
  if (z == ZeroTest::Zero) {
    v.outcome = Outcome::Holds;
    v.claim = Claim::Discrete;
  } else if (z == ZeroTest::NonZero) {
    v.outcome = Outcome::Holds;
    v.claim = Claim::NotDiscrete;
  } else {
    why += "; limit undecided";
  }
  v.reason = std::move(why);
  return v;
}

// beta_n + d_n >= 0 for the scanned range and eventually.
inline Outcome nonnegative_shift(const InteractionModel& m, const ProbeSettings& cfg, Verdict& v) {
  const Seq s = m.strengths + m.X.d();
  const SignCheck sc = eventually_nonnegative(s, cfg);
  v.evidence.push_back(sign_evidence("beta_n + d_n", sc, cfg));
  if (sc.outcome != Outcome::Holds) return sc.outcome;
  return scan_nonnegative(s, m.X.d(), 1, scan_limit(cfg)) ? Outcome::Holds : Outcome::Fails;
}

}  // namespace detail

inline Verdict deltaprime_discrete(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_deltaprime(m, "deltaprime_discrete");
  Verdict v = detail::make_verdict("deltaprime.discrete", Claim::Discrete,
                                   "half-line: x_n sum_{j>=n} d_j^3 -> 0 and x_n sum_{j>=n} (beta_j + d_j) -> 0; "
                                   "bounded interval: (b - x_n) sum_{j<=n} (beta_j + d_j) -> 0");
  const Seq d = m.X.d(), beta = m.strengths;
  ProbeResult len = m.X.total_length(cfg);
  v.evidence.push_back(len);
  if (len.kind == ProbeKind::Converges) {
    Verdict sa = deltaprime_selfadjoint(m, cfg);
    v.evidence.insert(v.evidence.end(), sa.evidence.begin() + 1, sa.evidence.end());
    if (sa.outcome == Outcome::Fails) {
      v.outcome = Outcome::Holds;
      v.reason = "deficiency one: every self-adjoint extension is discrete";
      return v;
    }
    if (sa.outcome != Outcome::Holds) {
      v.reason = "self-adjointness undecided";
      return v;
    }
    if (detail::nonnegative_shift(m, cfg, v) != Outcome::Holds) {
      v.reason = "beta_n + d_n >= 0 not established";
      return v;
    }
    ProbeResult p = limit_probe(shift(tail_sum(d), 1) * partial_sum(beta + d), cfg,
                                "lim (b - x_n) sum_{j<=n} (beta_j + d_j)");
    v.evidence.push_back(p);
    return detail::discrete_result(v, limit_is_zero(p), "bounded interval");
  }
  if (!len.diverges()) {
    v.reason = "total length undecided";
    return v;
  }
  // half-line
  auto not_discrete = [&](std::string why) {
    v.outcome = Outcome::Holds;
    v.claim = Claim::NotDiscrete;
    v.reason = std::move(why);
    return v;
  };
  bool all_positive = true;
  for (long n = 1; n <= 64 && all_positive; ++n) all_positive = beta(n) > 0;
  const SignCheck bs = eventually_nonnegative(beta, cfg);
  if (all_positive && bs.outcome == Outcome::Holds &&
      detail::scan_nonnegative(beta, beta, 1, detail::scan_limit(cfg))) {
    v.evidence.push_back(detail::sign_evidence("beta_n", bs, cfg));
    return not_discrete("beta_n > 0 on the half-line");
  }
  ProbeResult l3 = series_probe(pow(d, 3.0), cfg, "sum d_n^3");
  v.evidence.push_back(l3);
  if (l3.diverges()) return not_discrete("d not in l_3");
  ProbeResult xl = limit_probe(m.X.x() * tail_sum(pow(d, 3.0)), cfg, "lim x_n sum_{j>=n} d_j^3");
  v.evidence.push_back(xl);
  const ZeroTest zx = limit_is_zero(xl);
  if (zx == ZeroTest::NonZero) return not_discrete("x_n sum_{j>=n} d_j^3 does not tend to 0");
  ProbeResult dl;
  if (detail::d_tends_to_zero(m.X, cfg, &dl) == ZeroTest::Zero) {
    // beta_n >= -C d_n^3
    const LowerBound lb = bounded_below(beta / pow(d, 3.0), cfg);
    if (lb.outcome == Outcome::Holds) {
      v.evidence.push_back(detail::bound_evidence("inf beta_n / d_n^3", lb, cfg));
      return not_discrete("beta_n >= -C d_n^3");
    }
    // beta_n <= -C (1/d_n + 1/d_{n+1}) with beta eventually negative
    if (bs.outcome == Outcome::Fails) {
      ProbeResult q = limit_probe(beta / (1.0 / d + 1.0 / shift(d, 1)), cfg, "lim beta_n / (1/d_n + 1/d_{n+1})");
      if (detail::compare_limit(q, 0.0, true) == Outcome::Holds) {
        v.evidence.push_back(q);
        return not_discrete("beta_n <= -C (1/d_n + 1/d_{n+1})");
      }
    }
  }
  if (detail::nonnegative_shift(m, cfg, v) != Outcome::Holds) {
    v.reason = "no guard applies and beta_n + d_n >= 0 is not established";
    return v;
  }
  ProbeResult xb = limit_probe(m.X.x() * tail_sum(beta + d), cfg, "lim x_n sum_{j>=n} (beta_j + d_j)");
  v.evidence.push_back(xb);
  const ZeroTest zb = limit_is_zero(xb);
  ZeroTest z = ZeroTest::Unknown;
  if (zx == ZeroTest::NonZero || zb == ZeroTest::NonZero) z = ZeroTest::NonZero;
  else if (zx == ZeroTest::Zero && zb == ZeroTest::Zero) z = ZeroTest::Zero;
  return detail::discrete_result(v, z, "half-line");
}

// Sufficient: 1/beta_n >= -C min(d_n, d_{n+1}); necessary: 1/beta_n >= -C d_n - 1/d_n and
// 1/beta_n >= -C d_{n+1} - 1/d_{n+1}; with d_* > 0: iff 1/beta_n bounded below.
inline Verdict deltaprime_semibounded(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  detail::require_deltaprime(m, "deltaprime_semibounded");
  Verdict v = detail::make_verdict("deltaprime.semibounded", Claim::SemiboundedBelow,
                                   "sufficient 1/beta_n >= -C min(d_n, d_{n+1}); necessary 1/beta_n >= -C d_n - 1/d_n "
                                   "and 1/beta_n >= -C d_{n+1} - 1/d_{n+1}");
  v.implies = Claim::NotSemibounded;
  const Seq d = m.X.d(), d1 = shift(d, 1), ib = 1.0 / m.strengths;
  const ProbeResult lo = m.X.d_lower(cfg), hi = m.X.d_upper(cfg);
  if (lo.kind == ProbeKind::LimitIs && lo.value > 0 && hi.kind == ProbeKind::LimitIs) {
    v.citation += "; for 0 < d_* <= d^* < inf: iff 1/beta_n bounded below";
    v.evidence.push_back(lo);
    const LowerBound b = bounded_below(ib, cfg);
    v.evidence.push_back(detail::bound_evidence("inf 1/beta_n", b, cfg));
    v.outcome = b.outcome;
    if (b.outcome == Outcome::Inconclusive) v.reason = b.detail;
    return v;
  }
  const LowerBound suff = bounded_below(ib / min(d, d1), cfg);
  v.evidence.push_back(detail::bound_evidence("inf (1/beta_n)/min(d_n, d_{n+1})", suff, cfg));
  if (suff.outcome == Outcome::Holds) {
    v.outcome = Outcome::Holds;
    return v;
  }
  const LowerBound n1 = bounded_below((ib + 1.0 / d) / d, cfg);
  const LowerBound n2 = bounded_below((ib + 1.0 / d1) / d1, cfg);
  v.evidence.push_back(detail::bound_evidence("inf (1/beta_n + 1/d_n)/d_n", n1, cfg));
  v.evidence.push_back(detail::bound_evidence("inf (1/beta_n + 1/d_{n+1})/d_{n+1}", n2, cfg));
  if (n1.outcome == Outcome::Fails || n2.outcome == Outcome::Fails) {
    v.outcome = Outcome::Fails;
    v.reason = "necessary bound violated";
    return v;
  }
  v.reason = "between the necessary and the sufficient bounds";
  return v;
}

// ---- step potential -----------------------------------------------------------------------

namespace detail {

// Off-diagonal of the step-potential boundary matrix as a sequence expression.
inline Seq potential_offdiag_seq(double a, PotentialOffdiag conv) {
  const PotentialCoeffs e = potential_coeffs(a);
  const Seq inv = power_seq(1.0, -1.0);
  const Seq rt2 = inv + shift(inv, 1);
  const Seq k = conv == PotentialOffdiag::NextIndex ? power_seq(1.0, 1.0) + 1.0 : power_seq(1.0, 1.0);
  return static_cast<double>(e.eps2) * k / sqrt(rt2 * shift(rt2, 1));
}

}  // namespace detail

inline long double potential_coupling(const StepPotential& q) {
  return q.at_root ? solve_a0() : static_cast<long double>(q.a);
}

// Bounded diagonal, sum 1/b_n < inf and b_{n-1} b_{n+1} <= b_n^2  =>  deficiency one.
inline Verdict potential_berezanskii(const InteractionModel& m, const ProbeSettings& cfg = {},
                                     PotentialOffdiag conv = PotentialOffdiag::NextIndex) {
  if (!m.potential) throw NotApplicable("potential_berezanskii needs the step potential");
  Verdict v = detail::make_verdict("potential.berezanskii", Claim::DeficiencyOne,
                                   "Berezanskii: bounded diagonal, sum 1/b_n < inf, b_{n-1} b_{n+1} <= b_n^2");
  v.jacobi_level = true;
  const long double a = potential_coupling(*m.potential);
  const JacobiOperatorSpec J = build_potential_B(m.strengths, a, conv);
  const long N = detail::scan_limit(cfg);
  double early = 0.0, late = 0.0;
  for (long n = 1; n <= N; ++n) {
    const double x = std::abs(J.diag(n));
    (n <= N / 10 ? early : late) = std::max(n <= N / 10 ? early : late, x);
  }
  ProbeResult diag_ev;
  diag_ev.subject = "max |diagonal| on the last decade";
  diag_ev.kind = ProbeKind::LimSup;
  diag_ev.value = late;
  diag_ev.horizon = N;
  diag_ev.detail = "earlier max " + format_g17(early);
  v.evidence.push_back(diag_ev);
  if (late > 2.0 * early + 1e-9) {
    v.reason = "diagonal grows";
    return v;
  }
  const Seq b = detail::potential_offdiag_seq(static_cast<double>(a), conv);
  ProbeResult s = series_probe(1.0 / b, cfg, "sum 1/b_n");
  v.evidence.push_back(s);
  if (s.kind != ProbeKind::Converges) {
    v.reason = "sum 1/b_n not shown finite";
    return v;
  }
  const Seq g = b * b - shift(b, -1) * shift(b, 1);
  const SignCheck sc = eventually_nonnegative(g, cfg);
  v.evidence.push_back(detail::sign_evidence("b_n^2 - b_{n-1} b_{n+1}", sc, cfg));
  long bad = 0;
  bool scanned = true;
  for (long n = 2; n <= N; ++n) {
    const double bm = J.offdiag(n - 1), b0 = J.offdiag(n), bp = J.offdiag(n + 1);
    if (bm * bp > b0 * b0 * (1.0 + 1e-14)) {
      scanned = false;
      bad = n;
      break;
    }
  }
  if (!scanned || sc.outcome != Outcome::Holds) {
    v.reason = scanned ? "log-concavity undecided" : "log-concavity fails at n = " + std::to_string(bad);
    return v;
  }
  v.outcome = Outcome::Holds;
  return v;
}

// Carleman on the step-potential matrix: sum 1/b_n = inf.
inline Verdict potential_carleman(const InteractionModel& m, const ProbeSettings& cfg = {}) {
  if (!m.potential) throw NotApplicable("potential_carleman needs the step potential");
  Verdict v = detail::make_verdict("potential.carleman", Claim::SelfAdjoint, "Carleman: sum 1/b_n = inf");
  v.jacobi_level = true;
  const Seq b = detail::potential_offdiag_seq(static_cast<double>(potential_coupling(*m.potential)),
                                              PotentialOffdiag::NextIndex);
  ProbeResult s = series_probe(1.0 / b, cfg, "sum 1/b_n");
  v.evidence.push_back(s);
  if (s.diverges()) v.outcome = Outcome::Holds;
  else v.reason = "sum 1/b_n converges; the test is only sufficient";
  return v;
}

// ---- resolvent comparison -----------------------------------------------------------------

inline Verdict resolvent_comparability(const InteractionModel& m1, const InteractionModel& m2, LpTest p,
                                       const ProbeSettings& cfg = {}) {
  if (m1.kind != m2.kind) throw DomainError("models have different interaction kinds");
  if (m1.X.describe() != m2.X.describe()) throw DomainError("models live on different partitions");
  if (m1.potential || m2.potential) throw NotApplicable("resolvent comparison does not cover the step potential");
  Verdict v;
  v.claim = Claim::ResolventDiffInSp;
  v.p = p.kind == LpTest::Kind::Finite ? p.p : INFINITY;
  const Seq d = m1.X.d(), d1 = shift(d, 1);
  std::vector<std::pair<Seq, std::string>> tests;
  if (m1.kind == InteractionKind::Delta) {
    v.criterion_id = "delta.resolvent_comparison";
    v.citation = "(alpha1_n - alpha2_n)/d_{n+1} in " + p.str();
    tests.emplace_back((m1.strengths - m2.strengths) / d1, "(alpha1_n - alpha2_n)/d_{n+1}");
    const ProbeResult lo = m1.X.d_lower(cfg), hi = m1.X.d_upper(cfg);
    if (lo.kind == ProbeKind::LimitIs && lo.value > 0 && hi.kind == ProbeKind::LimitIs &&
        bounded_below(abs(m1.strengths), cfg).outcome == Outcome::Holds &&
        bounded_above(abs(m1.strengths), cfg).outcome == Outcome::Holds &&
        bounded_above(abs(m2.strengths), cfg).outcome == Outcome::Holds) {
      v.citation += "; for 0 < d_* <= d^* < inf and bounded strengths: alpha1 - alpha2 in " + p.str();
      tests.emplace_back(m1.strengths - m2.strengths, "alpha1_n - alpha2_n");
    }
  } else {
    v.criterion_id = "deltaprime.resolvent_comparison";
    v.citation = "(1/beta1_n - 1/beta2_n)(1/d_n + 1/d_{n+1}) in " + p.str() + " or (beta1_n - beta2_n)/d_n^3 in " + p.str();
    tests.emplace_back((1.0 / m1.strengths - 1.0 / m2.strengths) * (1.0 / d + 1.0 / d1),
                       "(1/beta1_n - 1/beta2_n)(1/d_n + 1/d_{n+1})");
    tests.emplace_back((m1.strengths - m2.strengths) / pow(d, 3.0), "(beta1_n - beta2_n)/d_n^3");
  }
  for (const auto& [s, name] : tests) {
    Membership mem = lp_membership(s, p, cfg);
    mem.evidence.subject = name + " in " + p.str();
    v.evidence.push_back(mem.evidence);
    if (mem.outcome == Outcome::Holds) {
      v.outcome = Outcome::Holds;
      return v;
    }
  }
  v.reason = "no sufficient sequence condition holds";
  return v;
}

// ---- transfer and orchestration -----------------------------------------------------------

struct Conclusion {
  std::string property;  // deficiency_indices | spectrum | lower_semibounded
  std::string value;
  std::vector<std::string> chain;
};

struct CrossCheck {
  std::string name;
  bool consistent = true;
  std::string detail;
};

struct Report {
  std::string model;
  std::vector<Verdict> verdicts;
  std::vector<Conclusion> conclusions;
  std::vector<CrossCheck> cross_checks;
  double runtime_ms = 0.0;

  const Conclusion* find(const std::string& property) const {
    for (const auto& c : conclusions)
      if (c.property == property) return &c;
    return nullptr;
  }
  const Verdict* verdict(const std::string& id) const {
    for (const auto& v : verdicts)
      if (v.criterion_id == id) return &v;
    return nullptr;
  }
};

// Hamiltonian-level conclusions from criterion verdicts.
inline std::vector<Conclusion> transfer(const std::vector<Verdict>& vs, const Partition& X,
                                        const ProbeSettings& cfg = {}) {
  std::map<Claim, std::vector<std::string>> h, jac;
  for (const auto& v : vs) {
    if (auto c = v.established()) (v.jacobi_level ? jac : h)[*c].push_back(v.criterion_id);
  }
  auto ids = [&](Claim c) {
    std::vector<std::string> out = h[c];
    for (const auto& s : jac[c]) out.push_back(s + " (boundary matrix)");
    return out;
  };
  auto clash = [&](Claim a, Claim b) {
    const auto x = ids(a), y = ids(b);
    if (x.empty() || y.empty()) return;
    std::string msg = std::string("contradictory verdicts: ") + to_string(a) + " from";
    for (const auto& s : x) msg += " " + s;
    msg += std::string(" and ") + to_string(b) + " from";
    for (const auto& s : y) msg += " " + s;
    throw IntegrityError(msg);
  };
  clash(Claim::SelfAdjoint, Claim::DeficiencyOne);
  clash(Claim::SemiboundedBelow, Claim::NotSemibounded);

  std::vector<Conclusion> out;
  const auto sa = ids(Claim::SelfAdjoint), def = ids(Claim::DeficiencyOne);
  if (!sa.empty()) out.push_back({"deficiency_indices", "0 (self-adjoint)", sa});
  if (!def.empty()) out.push_back({"deficiency_indices", "1", def});

  if (!def.empty()) {
    auto chain = def;
    chain.push_back("deficiency one: every self-adjoint extension has discrete spectrum");
    if (!h[Claim::NotDiscrete].empty())
      throw IntegrityError("deficiency one contradicts the non-discreteness verdict of " + h[Claim::NotDiscrete].front());
    out.push_back({"spectrum", "discrete for every self-adjoint extension", chain});
  } else {
    ProbeResult dl;
    const ZeroTest dz = detail::d_tends_to_zero(X, cfg, &dl);
    std::vector<std::string> disc = h[Claim::Discrete], nd = h[Claim::NotDiscrete];
    for (const auto& s : jac[Claim::NotDiscrete]) nd.push_back(s + " (boundary matrix)");
    for (const auto& s : jac[Claim::Discrete]) {
      if (dz == ZeroTest::Zero) disc.push_back(s + " (boundary matrix) with " + dl.str());
      if (dz == ZeroTest::NonZero) nd.push_back(s + " (boundary matrix) but " + dl.str());
    }
    if (dz == ZeroTest::NonZero && (!sa.empty() || !disc.empty())) nd.push_back("d_n does not tend to 0: " + dl.str());
    if (dz == ZeroTest::NonZero && !h[Claim::Discrete].empty())
      throw IntegrityError("discreteness claimed by " + h[Claim::Discrete].front() + " although d_n does not tend to 0");
    if (!disc.empty() && !nd.empty())
      throw IntegrityError("contradictory discreteness verdicts: " + disc.front() + " vs " + nd.front());
    if (!disc.empty()) out.push_back({"spectrum", "discrete", disc});
    if (!nd.empty()) out.push_back({"spectrum", "not discrete", nd});
  }
  const auto sb = ids(Claim::SemiboundedBelow), nsb = ids(Claim::NotSemibounded);
  if (!sb.empty()) out.push_back({"lower_semibounded", "yes", sb});
  if (!nsb.empty()) out.push_back({"lower_semibounded", "no", nsb});
  return out;
}

struct AnalyzeSettings {
  ProbeSettings probe;
  unsigned jobs = 1;
  bool cross_checks = true;
};

namespace detail {

using Task = std::function<std::optional<Verdict>()>;

// Runs tasks on up to `jobs` threads; results keep task order.
inline std::vector<Verdict> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<std::optional<Verdict>> res(tasks.size());
  std::vector<std::exception_ptr> err(tasks.size());
  auto one = [&](std::size_t i) {
    try {
      res[i] = tasks[i]();
    } catch (const NotApplicable&) {
    } catch (...) {
      err[i] = std::current_exception();
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) one(i);
      });
    for (auto& t : pool) t.join();
  }
  std::vector<Verdict> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (err[i]) std::rethrow_exception(err[i]);
    if (res[i]) out.push_back(std::move(*res[i]));
  }
  return out;
}

inline bool established(const std::vector<Verdict>& vs, Claim c) {
  for (const auto& v : vs)
    if (v.established() == c) return true;
  return false;
}

}  // namespace detail

inline Report analyze(const InteractionModel& m, const AnalyzeSettings& s = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProbeSettings& cfg = s.probe;
  Report rep;
  rep.model = m.describe();
  using detail::Task;
  if (m.potential) {
    rep.verdicts = detail::run_tasks({[&] { return std::optional(potential_carleman(m, cfg)); },
                                      [&] { return std::optional(potential_berezanskii(m, cfg)); }},
                                     s.jobs);
  } else if (m.kind == InteractionKind::Delta) {
    std::vector<Task> first = {
        [&] { return std::optional(carleman(m, cfg)); },
        [&] { return std::optional(dennis_wall(m, cfg)); },
        [&] { return std::optional(berezanskii_bound(m, Side::Upper, cfg)); },
        [&] { return std::optional(berezanskii_bound(m, Side::Lower, cfg)); },
        [&] { return std::optional(deficiency_one_delta(m, cfg)); },
        [&] { return std::optional(deficiency_one_periodic(m, cfg)); },
    };
    rep.verdicts = detail::run_tasks(first, s.jobs);
    const bool sa = detail::established(rep.verdicts, Claim::SelfAdjoint);
    std::vector<Task> second = {
        [&] { return std::optional(delta_discrete(m, DiscreteTest::Chihara1, sa, cfg)); },
        [&] { return std::optional(delta_discrete(m, DiscreteTest::Chihara2, sa, cfg)); },
        [&] { return std::optional(delta_discrete(m, DiscreteTest::Cojuhari, sa, cfg)); },
        [&] { return std::optional(delta_semibounded(m, cfg)); },
        [&] { return std::optional(delta_semibounded_iff(m, cfg)); },
        [&] { return std::optional(delta_alternating_witness(m, cfg)); },
    };
    for (auto& v : detail::run_tasks(second, s.jobs)) rep.verdicts.push_back(std::move(v));
  } else {
    std::vector<Task> tasks = {
        [&] { return std::optional(deltaprime_selfadjoint(m, cfg)); },
        [&] { return std::optional(deltaprime_discrete(m, cfg)); },
        [&] { return std::optional(deltaprime_semibounded(m, cfg)); },
        [&]() -> std::optional<Verdict> {
          try {
            return hamburger(string_from_deltaprime(m.X, m.strengths), cfg);
          } catch (const DomainError&) {
            return std::nullopt;
          }
        },
        [&]() -> std::optional<Verdict> {
          try {
            return kac_krein(string_from_deltaprime(m.X, m.strengths), cfg);
          } catch (const DomainError&) {
            return std::nullopt;
          }
        },
    };
    rep.verdicts = detail::run_tasks(tasks, s.jobs);
    if (s.cross_checks) {
      const Verdict* sa = rep.verdict("deltaprime.selfadjoint");
      if (sa && sa->outcome == Outcome::Fails) {
        CrossCheck cc{"deficiency probe at z = 0", true, ""};
        try {
          const auto J = build_deltaprime_B1(m.X, m.strengths);
          DeficiencyProbeSettings ds;
          const auto pr = deficiency_probe(J, 0.0, std::min<long>(cfg.horizon, 100000), {1.0, 0.0, false},
                                           {0.0, 1.0, false}, ds);
          cc.consistent = pr.both_square_summable();
          cc.detail = std::string("first ") + to_string(pr.first.classification) + ", second " +
                      to_string(pr.second.classification);
        } catch (const std::exception& e) {
          cc.detail = std::string("probe not run: ") + e.what();
        }
        rep.cross_checks.push_back(cc);
      }
    }
  }
  rep.conclusions = transfer(rep.verdicts, m.X, cfg);
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace pointspec

#endif
