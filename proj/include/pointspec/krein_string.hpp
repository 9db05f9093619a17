#ifndef POINTSPEC_KREIN_STRING_HPP
#define POINTSPEC_KREIN_STRING_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "jacobi.hpp"
#include "partition.hpp"
#include "verdict.hpp"

namespace pointspec {

// Three-way reading of a limit probe against zero.
enum class ZeroTest { Zero, NonZero, Unknown };

inline ZeroTest limit_is_zero(const ProbeResult& r) {
  if (r.diverges()) return ZeroTest::NonZero;
  if (r.kind != ProbeKind::LimitIs) return ZeroTest::Unknown;
  if (r.exact()) return r.value == 0.0 ? ZeroTest::Zero : ZeroTest::NonZero;
  const double tol = std::max(r.tolerance, 1e-6);
  return std::abs(r.value) <= tol ? ZeroTest::Zero : ZeroTest::NonZero;
}

// Stieltjes string: point masses m_n at the knots x_{n-1}, with x_n - x_{n-1} = l_n, x_0 = 0.
struct StringData {
  Seq m;
  Seq l;
  // Strings built from two interleaved families (odd sites, even sites) keep them here
  // so that limits can be taken symbolically along both subsequences.
  struct Pairs {
    Seq m_odd, m_even, l_odd, l_even;
  };
  std::optional<Pairs> pairs;

  static StringData make(Seq m, Seq l) {
    StringData s{std::move(m), std::move(l), std::nullopt};
    s.check();
    return s;
  }
  static StringData interleaved(Seq m_odd, Seq m_even, Seq l_odd, Seq l_even) {
    StringData s{interleave(m_odd, m_even), interleave(l_odd, l_even),
                 Pairs{std::move(m_odd), std::move(m_even), std::move(l_odd), std::move(l_even)}};
    s.check();
    return s;
  }

  double mass(long n) const { return m(n); }
  double length(long n) const { return l(n); }
  double knot(long n) const {
    double x = 0.0;
    for (long k = 1; k <= n; ++k) x += l(k);
    return x;
  }
  ProbeResult total_length(const ProbeSettings& cfg = {}) const {
    if (pairs) return series_probe(pairs->l_odd + pairs->l_even, cfg, "total length");
    return series_probe(l, cfg, "total length");
  }
  ProbeResult total_mass(const ProbeSettings& cfg = {}) const {
    if (pairs) return series_probe(pairs->m_odd + pairs->m_even, cfg, "total mass");
    return series_probe(m, cfg, "total mass");
  }
  // Mass to the left of x: sum of m_n over knots x_{n-1} < x.
  double mass_function(double x, long n_max = 1000000) const {
    double acc = 0.0, knot_prev = 0.0;
    for (long n = 1; n <= n_max; ++n) {
      if (!(knot_prev < x)) break;
      acc += m(n);
      knot_prev += l(n);
    }
    return acc;
  }
  std::string describe() const { return "masses " + m.describe() + ", lengths " + l.describe(); }

  // n, m_n, l_n, x_n
  std::string to_csv(long N) const {
    std::string s = "n,m,l,x\n";
    double x = 0.0;
    for (long n = 1; n <= N; ++n) {
      x += l(n);
      s += std::to_string(n) + "," + format_g17(m(n)) + "," + format_g17(l(n)) + "," + format_g17(x) + "\n";
    }
    return s;
  }

 private:
  void check() const {
    for (long n = 1; n <= 64; ++n)
      if (!(m(n) > 0) || !(l(n) > 0))
        throw DomainError("string masses and lengths must be positive (index " + std::to_string(n) + ")");
  }
};

// l_{2n-1} = d_n, l_{2n} = beta_n, m_{2n-1} = m_{2n} = d_n.
inline StringData string_from_deltaprime(const Partition& X, const Seq& beta) {
  for (long n = 1; n <= 64; ++n)
    if (!(beta(n) > 0))
      throw DomainError("string picture needs beta_n > 0; beta_" + std::to_string(n) + " = " +
                        std::to_string(beta(n)));
  if (const auto& e = beta.expansion()) {
    if (auto sg = eventual_sign(*e); sg && *sg < 0) throw DomainError("beta is eventually negative");
  }
  return StringData::interleaved(X.d(), X.d(), X.d(), beta);
}

// a(1) = 1/(m1 l1), a(n) = (1/m_n)(1/l_{n-1} + 1/l_n), b(n) = 1/(l_n sqrt(m_n m_{n+1})).
inline JacobiOperatorSpec build_J_ml(const StringData& s, std::string label = "string matrix") {
  Seq m = s.m, l = s.l;
  auto a = [m, l](long n) {
    const double inv = n == 1 ? 1.0 / l(1) : 1.0 / l(n - 1) + 1.0 / l(n);
    return inv / m(n);
  };
  auto b = [m, l](long n) { return 1.0 / (l(n) * std::sqrt(m(n) * m(n + 1))); };
  return JacobiOperatorSpec(JacobiKind::StringMl, a, b, Gauge::Signed, std::move(label));
}

// M^-1/2 (I+U) L^-1 (I+U*) M^-1/2
inline Eigen::MatrixXd string_factored_form(const StringData& s, long N) {
  Eigen::VectorXd minv(N), linv(N);
  for (long n = 1; n <= N; ++n) {
    minv(n - 1) = 1.0 / std::sqrt(s.m(n));
    linv(n - 1) = 1.0 / s.l(n);
  }
  Eigen::MatrixXd IU = Eigen::MatrixXd::Identity(N, N);
  for (long i = 1; i < N; ++i) IU(i - 1, i) = 1.0;  // I + U*, U e_k = e_{k+1}
  // (I+U) L^-1 (I+U*): the diagonal picks 1/l_{n-1} + 1/l_n
  Eigen::MatrixXd core = IU.transpose() * linv.asDiagonal() * IU;
  return minv.asDiagonal() * core * minv.asDiagonal();
}

inline double string_factorization_residual(const StringData& s, long N) {
  if (N < 2) throw DomainError("factorization residual needs N >= 2");
  const Eigen::MatrixXd direct = build_J_ml(s).section(N).dense();
  const Eigen::MatrixXd f = string_factored_form(s, N);
  const long k = N - 1;
  return (direct.topLeftCorner(k, k) - f.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
}

namespace detail {

// Knot positions and mass sums split along odd and even indices.
struct StringParts {
  Seq x_even, x_odd;            // x_{2n}, x_{2n-1}
  Seq tailm_even, tailm_odd;    // sum_{j >= 2n} m_j, sum_{j >= 2n-1} m_j
  Seq headm_even, headm_odd;    // sum_{j <= 2n} m_j, sum_{j <= 2n-1} m_j
  Seq taill_even, taill_odd;    // L - x_{2n}, L - x_{2n-1}
};

inline StringParts split(const StringData::Pairs& p) {
  StringParts s;
  const Seq L = p.l_odd + p.l_even, Ms = p.m_odd + p.m_even;
  s.x_even = partial_sum(L);
  s.x_odd = s.x_even - p.l_even;
  s.tailm_odd = tail_sum(Ms);
  s.tailm_even = s.tailm_odd - p.m_odd;
  s.headm_even = partial_sum(Ms);
  s.headm_odd = s.headm_even - p.m_even;
  s.taill_even = shift(tail_sum(L), 1);
  s.taill_odd = s.taill_even + p.l_even;
  return s;
}

inline ZeroTest both_zero(const ProbeResult& a, const ProbeResult& b) {
  const ZeroTest x = limit_is_zero(a), y = limit_is_zero(b);
  if (x == ZeroTest::NonZero || y == ZeroTest::NonZero) return ZeroTest::NonZero;
  if (x == ZeroTest::Zero && y == ZeroTest::Zero) return ZeroTest::Zero;
  return ZeroTest::Unknown;
}

}  // namespace detail

// Self-adjointness of the minimal string operator: sum m_{n+1} x_n^2 = inf.
inline Verdict hamburger(const StringData& s, const ProbeSettings& cfg = {}) {
  Verdict v = detail::make_verdict("string.hamburger", Claim::SelfAdjoint,
                                   "Hamburger: self-adjoint iff sum m_{n+1} x_n^2 = inf");
  v.implies = Claim::DeficiencyOne;
  v.jacobi_level = true;
  Seq series;
  if (s.pairs) {
    const auto& p = *s.pairs;
    const auto parts = detail::split(p);
    // k = 2n-1: m_{2n} x_{2n-1}^2;  k = 2n: m_{2n+1} x_{2n}^2
    series = p.m_even * pow(parts.x_odd, 2.0) + shift(p.m_odd, 1) * pow(parts.x_even, 2.0);
  } else {
    series = shift(s.m, 1) * pow(partial_sum(s.l), 2.0);
  }
  ProbeResult r = series_probe(series, cfg, "sum m_{n+1} x_n^2");
  v.evidence.push_back(r);
  if (r.diverges()) {
    v.outcome = Outcome::Holds;
  } else if (r.kind == ProbeKind::Converges) {
    v.outcome = Outcome::Fails;
    v.reason = "deficiency indices (1,1); every self-adjoint extension has discrete spectrum";
  } else {
    v.reason = "series undecided: " + r.detail;
  }
  return v;
}

// Kac-Krein discreteness test for a self-adjoint string.
inline Verdict kac_krein(const StringData& s, const ProbeSettings& cfg = {}) {
  Verdict v = detail::make_verdict("string.kac_krein", Claim::Discrete,
                                   "Kac-Krein: L = inf needs x_n sum_{j>=n} m_j -> 0; "
                                   "L < inf = M needs (L - x_n) sum_{j<=n} m_j -> 0");
  v.implies = Claim::NotDiscrete;
  v.jacobi_level = true;
  Verdict h = hamburger(s, cfg);
  v.evidence = h.evidence;
  if (h.outcome == Outcome::Fails) {
    v.outcome = Outcome::Holds;
    v.reason = "limit-circle string: every self-adjoint extension is discrete";
    return v;
  }
  if (h.outcome == Outcome::Inconclusive) {
    v.reason = "self-adjointness undecided";
    return v;
  }
  const ProbeResult L = s.total_length(cfg), M = s.total_mass(cfg);
  v.evidence.push_back(L);
  v.evidence.push_back(M);
  const bool L_inf = L.diverges(), M_inf = M.diverges();
  const bool L_fin = L.kind == ProbeKind::Converges, M_fin = M.kind == ProbeKind::Converges;
  ZeroTest z = ZeroTest::Unknown;
  if (L_inf) {
    if (M_inf) {
      v.outcome = Outcome::Fails;
      v.reason = "infinite length and infinite mass";
      return v;
    }
    if (!M_fin) {
      v.reason = "total mass undecided";
      return v;
    }
    if (s.pairs) {
      const auto parts = detail::split(*s.pairs);
      ProbeResult a = limit_probe(parts.x_even * parts.tailm_even, cfg, "x_{2n} sum_{j>=2n} m_j");
      ProbeResult b = limit_probe(parts.x_odd * parts.tailm_odd, cfg, "x_{2n-1} sum_{j>=2n-1} m_j");
      v.evidence.push_back(a);
      v.evidence.push_back(b);
      z = detail::both_zero(a, b);
    } else {
      ProbeResult a = limit_probe(partial_sum(s.l) * tail_sum(s.m), cfg, "x_n sum_{j>=n} m_j");
      v.evidence.push_back(a);
      z = limit_is_zero(a);
    }
    v.reason = "infinite length";
  } else if (L_fin && M_inf) {
    if (s.pairs) {
      const auto parts = detail::split(*s.pairs);
      ProbeResult a = limit_probe(parts.taill_even * parts.headm_even, cfg, "(L - x_{2n}) sum_{j<=2n} m_j");
      ProbeResult b = limit_probe(parts.taill_odd * parts.headm_odd, cfg, "(L - x_{2n-1}) sum_{j<=2n-1} m_j");
      v.evidence.push_back(a);
      v.evidence.push_back(b);
      z = detail::both_zero(a, b);
    } else {
      ProbeResult a = limit_probe(shift(tail_sum(s.l), 1) * partial_sum(s.m), cfg, "(L - x_n) sum_{j<=n} m_j");
      v.evidence.push_back(a);
      z = limit_is_zero(a);
    }
    v.reason = "finite length, infinite mass";
  } else if (L_fin && M_fin) {
    v.outcome = Outcome::Holds;
    v.reason = "regular string (finite length and mass)";
    return v;
  } else {
    v.reason = "total length or mass undecided";
    return v;
  }
  if (z == ZeroTest::Zero) v.outcome = Outcome::Holds;
  if (z == ZeroTest::NonZero) v.outcome = Outcome::Fails;
  if (z == ZeroTest::Unknown) v.reason += "; limit undecided";
  return v;
}

struct JacobiSplit {
  JacobiOperatorSpec J_X;
  std::optional<JacobiOperatorSpec> J_beta;
  StringData X_string;
  std::optional<StringData> beta_string;
  std::string note;
};

// J_X: m = d, l = d^3.  J_beta: m = d, l = beta + d (needs beta_n + d_n > 0).
inline JacobiSplit jx_jbeta_split(const Partition& X, const Seq& beta) {
  StringData xs = StringData::make(X.d(), pow(X.d(), 3.0));
  JacobiSplit out{build_J_ml(xs, "J_X"), std::nullopt, xs, std::nullopt, ""};
  const Seq lb = beta + X.d();
  bool positive = true;
  for (long n = 1; n <= 64 && positive; ++n) positive = lb(n) > 0;
  if (const auto& e = lb.expansion(); positive && e) {
    if (auto sg = eventual_sign(*e); sg && *sg < 0) positive = false;
  }
  if (!positive) {
    out.note = "beta_n + d_n > 0 fails; J_beta unavailable";
    return out;
  }
  StringData bs = StringData::make(X.d(), lb);
  out.beta_string = bs;
  out.J_beta = build_J_ml(bs, "J_beta");
  return out;
}

}  // namespace pointspec

#endif
