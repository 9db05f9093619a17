#ifndef POINTSPEC_PROBES_HPP
#define POINTSPEC_PROBES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sequence.hpp"

namespace pointspec {

enum class Outcome { Holds, Fails, Inconclusive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "Holds";
    case Outcome::Fails: return "Fails";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

enum class ProbeKind { DivergesToInf, DivergesToNegInf, Converges, LimitIs, LimInf, LimSup, Indeterminate };
enum class ProbeMethod { ExactSymbolic, NumericTail };

inline const char* to_string(ProbeKind k) {
  switch (k) {
    case ProbeKind::DivergesToInf: return "DivergesToInf";
    case ProbeKind::DivergesToNegInf: return "DivergesToNegInf";
    case ProbeKind::Converges: return "Converges";
    case ProbeKind::LimitIs: return "LimitIs";
    case ProbeKind::LimInf: return "LimInf";
    case ProbeKind::LimSup: return "LimSup";
    case ProbeKind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

inline const char* to_string(ProbeMethod m) {
  return m == ProbeMethod::ExactSymbolic ? "ExactSymbolic" : "NumericTail";
}

struct ProbeSettings {
  long horizon = 100000;
  double rel_tol = 1e-8;
  double checkpoint_ratio = 10.0;
};

struct ProbeResult {
  std::string subject;
  ProbeKind kind = ProbeKind::Indeterminate;
  double value = std::numeric_limits<double>::quiet_NaN();
  ProbeMethod method = ProbeMethod::NumericTail;
  long horizon = 0;  // 0 for symbolic results
  double tolerance = 0.0;
  std::string detail;

  bool exact() const { return method == ProbeMethod::ExactSymbolic; }
  const char* confidence() const { return exact() ? "exact" : "numeric"; }
  bool diverges() const {
    return kind == ProbeKind::DivergesToInf || kind == ProbeKind::DivergesToNegInf;
  }
  bool decided() const { return kind != ProbeKind::Indeterminate; }
  // Limit value, +-inf for divergence, nullopt otherwise.
  std::optional<double> limit() const {
    if (kind == ProbeKind::LimitIs) return value;
    if (kind == ProbeKind::DivergesToInf) return std::numeric_limits<double>::infinity();
    if (kind == ProbeKind::DivergesToNegInf) return -std::numeric_limits<double>::infinity();
    return std::nullopt;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(10);
    os << subject << ": " << to_string(kind);
    if (kind == ProbeKind::Converges || kind == ProbeKind::LimitIs || kind == ProbeKind::LimInf ||
        kind == ProbeKind::LimSup)
      os << "(" << value << ")";
    os << " [" << to_string(method);
    if (!exact()) os << ", horizon " << horizon << ", tol " << tolerance;
    os << "]";
    if (!detail.empty()) os << " " << detail;
    return os.str();
  }
};

namespace detail {

inline ProbeResult symbolic(std::string subject, ProbeKind k, double v, std::string detail) {
  ProbeResult r;
  r.subject = std::move(subject);
  r.kind = k;
  r.value = v;
  r.method = ProbeMethod::ExactSymbolic;
  r.detail = std::move(detail);
  return r;
}

inline std::vector<long> checkpoints(long first, long horizon, double ratio) {
  std::vector<long> out;
  double c = std::max(10.0, static_cast<double>(first) * ratio);
  while (c < static_cast<double>(horizon)) {
    out.push_back(static_cast<long>(std::llround(c)));
    c *= ratio;
  }
  out.push_back(horizon);
  return out;
}

// Values on [first, horizon], or nullopt when evaluation leaves the domain.
inline std::optional<std::vector<double>> sample(const Seq& s, long first, long horizon,
                                                 std::string* why) {
  try {
    auto v = s.values(first, horizon);
    for (double x : v)
      if (!std::isfinite(x)) {
        if (why) *why = "non-finite term";
        return std::nullopt;
      }
    return v;
  } catch (const DomainError& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

inline double sum_range(const std::vector<double>& v, long first, long lo, long hi) {
  long double s = 0.0L;
  for (long n = lo; n <= hi; ++n) s += v[n - first];
  return static_cast<double>(s);
}

}  // namespace detail

// Sum of a convergent series: direct sum up to m plus the asymptotic tail from m on.
inline std::optional<std::pair<double, double>> series_value(const Seq& s, const Expansion& e) {
  auto tail = tail_sum(e);
  if (!tail) return std::nullopt;
  const long f = s.first_index();
  auto at = [&](long m) -> std::optional<double> {
    try {
      long double acc = 0.0L;
      for (long n = f; n < m; ++n) acc += s(n);
      return static_cast<double>(acc) + tail->value(static_cast<double>(m));
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  auto a = at(detail::kConstantFitIndex);
  auto b = at(16 * detail::kConstantFitIndex);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*b, std::abs(*b - *a));
}

inline ProbeResult series_probe(const Seq& s, const ProbeSettings& cfg = {},
                                std::string subject = "") {
  if (subject.empty()) subject = "sum " + s.describe();
  const auto& e = s.expansion();
  if (e) {
    if (e->is_zero()) return detail::symbolic(subject, ProbeKind::Converges, 0.0, "terms vanish");
    auto sz = e->size();
    auto lead = e->leading();
    if (sz && is_summable(*sz)) {
      auto v = series_value(s, *e);
      ProbeResult r = detail::symbolic(subject, ProbeKind::Converges, v ? v->first : NAN,
                                       "terms O(" + to_string(*sz) + ")");
      if (v) r.tolerance = v->second;
      if (v) return r;
    } else if (lead) {
      return detail::symbolic(subject,
                              lead->coef > 0 ? ProbeKind::DivergesToInf : ProbeKind::DivergesToNegInf,
                              NAN, "terms ~ " + Expansion::from_terms({*lead}).str());
    }
  }

  ProbeResult r;
  r.subject = subject;
  r.horizon = cfg.horizon;
  r.tolerance = cfg.rel_tol;
  const long f = s.first_index();
  std::string why;
  auto v = detail::sample(s, f, cfg.horizon, &why);
  if (!v) {
    r.detail = "not evaluable to horizon: " + why;
    return r;
  }
  auto cps = detail::checkpoints(f, cfg.horizon, cfg.checkpoint_ratio);
  std::vector<double> S;
  for (long c : cps) S.push_back(detail::sum_range(*v, f, f, c));
  if (S.size() < 3) {
    r.detail = "horizon too short";
    return r;
  }
  {
    const long lo = std::max(f, static_cast<long>(cfg.horizon / cfg.checkpoint_ratio));
    bool pos = false, neg = false;
    for (long n = lo; n <= cfg.horizon; ++n) {
      if ((*v)[n - f] > 0) pos = true;
      if ((*v)[n - f] < 0) neg = true;
    }
    if (pos && neg) {
      r.detail = "terms change sign in the last block";
      return r;
    }
  }
  std::vector<double> inc;
  for (std::size_t k = 1; k < S.size(); ++k) inc.push_back(S[k] - S[k - 1]);
  const std::size_t m = inc.size();
  const double i1 = inc[m - 2], i2 = inc[m - 1];
  const double scale = std::max(1.0, std::abs(S.back()));
  if (std::abs(i2) <= cfg.rel_tol * scale && std::abs(i1) <= cfg.rel_tol * scale) {
    r.kind = ProbeKind::Converges;
    r.value = S.back();
    r.detail = "tail increments below tolerance";
    return r;
  }
  if ((i1 > 0) != (i2 > 0) || i1 == 0.0) {
    r.detail = "increments change sign";
    return r;
  }
  // normalise the last (possibly partial) block to a full ratio step
  const double span_last = std::log(static_cast<double>(cps[m]) / cps[m - 1]);
  const double q = std::pow(i2 / i1, std::log(cfg.checkpoint_ratio) / span_last);
  std::ostringstream os;
  os.precision(4);
  os << "increment ratio " << q;
  r.detail = os.str();
  if (q < 0.85) {
    r.kind = ProbeKind::Converges;
    double tail = i2 * q / (1.0 - q);
    r.value = S.back() + tail;
    r.tolerance = std::max(cfg.rel_tol * scale, std::abs(tail));
  } else if (q > 0.95) {
    r.kind = i2 > 0 ? ProbeKind::DivergesToInf : ProbeKind::DivergesToNegInf;
  }
  return r;
}

inline ProbeResult limit_probe(const Seq& s, const ProbeSettings& cfg = {},
                               std::string subject = "") {
  if (subject.empty()) subject = "lim " + s.describe();
  const auto& e = s.expansion();
  if (e) {
    if (e->is_zero()) return detail::symbolic(subject, ProbeKind::LimitIs, 0.0, "identically zero");
    auto lead = e->leading();
    if (lead) {
      const std::string how = "leading term " + Expansion::from_terms({*lead}).str();
      if (tends_to_zero(lead->scale))
        return detail::symbolic(subject, ProbeKind::LimitIs, 0.0, how);
      if (is_constant_scale(lead->scale)) {
        // a constant leading term with a non-vanishing remainder leaves the limit open
        if (!e->remainder() || tends_to_zero(*e->remainder()))
          return detail::symbolic(subject, ProbeKind::LimitIs, lead->coef, how);
      } else if (!is_bounded(lead->scale)) {
        return detail::symbolic(
            subject, lead->coef > 0 ? ProbeKind::DivergesToInf : ProbeKind::DivergesToNegInf, NAN,
            how);
      }
    } else if (e->remainder() && tends_to_zero(*e->remainder())) {
      return detail::symbolic(subject, ProbeKind::LimitIs, 0.0, "o(1) remainder only");
    }
  }

  ProbeResult r;
  r.subject = subject;
  r.horizon = cfg.horizon;
  r.tolerance = cfg.rel_tol;
  const long f = s.first_index();
  std::string why;
  auto v = detail::sample(s, f, cfg.horizon, &why);
  if (!v) {
    r.detail = "not evaluable to horizon: " + why;
    return r;
  }
  auto cps = detail::checkpoints(f, cfg.horizon, cfg.checkpoint_ratio);
  if (cps.size() < 3) {
    r.detail = "horizon too short";
    return r;
  }
  // Take the final three checkpoints on a geometric grid ending at the horizon.
  const long h = cfg.horizon;
  const long h1 = static_cast<long>(h / cfg.checkpoint_ratio);
  const long h2 = static_cast<long>(h1 / cfg.checkpoint_ratio);
  if (h2 < f) {
    r.detail = "horizon too short";
    return r;
  }
  const double a = (*v)[h2 - f], b = (*v)[h1 - f], c = (*v)[h - f];
  const double scale = std::max(1.0, std::abs(c));
  // oscillation check on the last decade
  double lo = c, hi = c;
  for (long n = h1; n <= h; ++n) {
    lo = std::min(lo, (*v)[n - f]);
    hi = std::max(hi, (*v)[n - f]);
  }
  bool monotone_tail = true;
  for (long n = h1 + 1; n <= h && monotone_tail; ++n) {
    double dprev = (*v)[n - 1 - f] - (*v)[n - 2 - f];
    double dcur = (*v)[n - f] - (*v)[n - 1 - f];
    if (dprev * dcur < 0 && std::abs(dcur) > cfg.rel_tol * scale) monotone_tail = false;
  }
  if (!monotone_tail) {
    r.kind = ProbeKind::Indeterminate;
    std::ostringstream os;
    os.precision(10);
    os << "oscillates; liminf ~ " << lo << ", limsup ~ " << hi;
    r.detail = os.str();
    return r;
  }
  if (std::abs(c - b) <= cfg.rel_tol * scale) {
    r.kind = ProbeKind::LimitIs;
    r.value = c;
    r.detail = "stationary at horizon";
    return r;
  }
  const double d1 = b - a, d2 = c - b;
  if (d1 != 0.0 && d1 * d2 > 0) {
    const double q = d2 / d1;
    if (q > 0.0 && q < 0.9) {
      const double lim = c + d2 * q / (1.0 - q);
      r.kind = ProbeKind::LimitIs;
      r.value = lim;
      r.tolerance = std::max(cfg.rel_tol * scale, std::abs(d2 * q / (1.0 - q)) * 0.1);
      r.detail = "three-point extrapolation";
      return r;
    }
    if (q >= 0.95) {
      r.kind = d2 > 0 ? ProbeKind::DivergesToInf : ProbeKind::DivergesToNegInf;
      std::ostringstream os;
      os.precision(4);
      os << "checkpoint differences grow, ratio " << q;
      r.detail = os.str();
      return r;
    }
  }
  r.detail = "no stable extrapolation";
  return r;
}

struct LpTest {
  enum class Kind { Finite, Bounded, Null };  // l^p, l^inf, c_0
  Kind kind = Kind::Finite;
  double p = 2.0;
  static LpTest finite(double p) { return {Kind::Finite, p}; }
  static LpTest bounded() { return {Kind::Bounded, INFINITY}; }
  static LpTest null() { return {Kind::Null, INFINITY}; }
  std::string str() const {
    if (kind == Kind::Bounded) return "l_inf";
    if (kind == Kind::Null) return "c_0";
    std::ostringstream os;
    os << "l_" << p;
    return os.str();
  }
};

struct Membership {
  Outcome outcome = Outcome::Inconclusive;
  ProbeResult evidence;
};

inline Membership lp_membership(const Seq& s, LpTest t, const ProbeSettings& cfg = {}) {
  Membership m;
  if (t.kind == LpTest::Kind::Finite) {
    if (!(t.p > 0)) throw DomainError("lp exponent must be positive");
    Seq a = t.p == 1.0 ? abs(s) : pow(abs(s), t.p);
    m.evidence = series_probe(a, cfg, s.describe() + " in " + t.str());
    if (m.evidence.kind == ProbeKind::Converges) m.outcome = Outcome::Holds;
    if (m.evidence.diverges()) m.outcome = Outcome::Fails;
    return m;
  }
  m.evidence = limit_probe(abs(s), cfg, s.describe() + " in " + t.str());
  if (t.kind == LpTest::Kind::Null) {
    if (m.evidence.kind == ProbeKind::LimitIs)
      m.outcome = std::abs(m.evidence.value) <= m.evidence.tolerance ? Outcome::Holds : Outcome::Fails;
    if (m.evidence.diverges()) m.outcome = Outcome::Fails;
  } else {
    if (m.evidence.kind == ProbeKind::LimitIs) m.outcome = Outcome::Holds;
    if (m.evidence.diverges()) m.outcome = Outcome::Fails;
  }
  return m;
}

// Does s(n) >= 0 hold for all large n?
struct SignCheck {
  Outcome outcome = Outcome::Inconclusive;
  ProbeMethod method = ProbeMethod::NumericTail;
  std::string detail;
};

inline SignCheck eventually_nonnegative(const Seq& s, const ProbeSettings& cfg = {}) {
  SignCheck c;
  const auto& e = s.expansion();
  if (e) {
    if (e->is_zero()) return {Outcome::Holds, ProbeMethod::ExactSymbolic, "identically zero"};
    if (auto sg = eventual_sign(*e)) {
      c.method = ProbeMethod::ExactSymbolic;
      c.outcome = *sg >= 0 ? Outcome::Holds : Outcome::Fails;
      c.detail = "leading term " + Expansion::from_terms({*e->leading()}).str();
      return c;
    }
  }
  const long f = s.first_index();
  const long lo = std::max(f, static_cast<long>(cfg.horizon / cfg.checkpoint_ratio));
  std::string why;
  auto v = detail::sample(s, lo, cfg.horizon, &why);
  if (!v) {
    c.detail = why;
    return c;
  }
  bool all_nonneg = true, all_neg = true;
  for (double x : *v) {
    if (x < 0) all_nonneg = false;
    if (x >= 0) all_neg = false;
  }
  std::ostringstream os;
  os << "scanned n in [" << lo << ", " << cfg.horizon << "]";
  c.detail = os.str();
  if (all_nonneg) c.outcome = Outcome::Holds;
  if (all_neg) c.outcome = Outcome::Fails;
  return c;
}

// inf_n s(n) > -inf, with the smallest C = 2^k (k <= 30) such that s(n) >= -C on the scanned range.
struct LowerBound {
  Outcome outcome = Outcome::Inconclusive;
  ProbeMethod method = ProbeMethod::NumericTail;
  std::optional<double> witness;
  double observed_inf = NAN;
  std::string detail;
};

inline LowerBound bounded_below(const Seq& s, const ProbeSettings& cfg = {}) {
  LowerBound b;
  const long f = s.first_index();
  std::string why;
  auto v = detail::sample(s, f, cfg.horizon, &why);
  if (v) {
    b.observed_inf = *std::min_element(v->begin(), v->end());
    const double need = -b.observed_inf;
    for (int k = 0; k <= 30; ++k) {
      double C = std::ldexp(1.0, k);
      if (C >= need) {
        b.witness = C;
        break;
      }
    }
  }
  const auto& e = s.expansion();
  if (e) {
    auto lead = e->leading();
    if (e->is_zero()) {
      b.method = ProbeMethod::ExactSymbolic;
      b.outcome = Outcome::Holds;
      b.detail = "identically zero";
      return b;
    }
    if (lead) {
      b.method = ProbeMethod::ExactSymbolic;
      b.detail = "leading term " + Expansion::from_terms({*lead}).str();
      if (!is_bounded(lead->scale) && lead->coef < 0) {
        b.outcome = Outcome::Fails;
        b.witness.reset();
        return b;
      }
      b.outcome = Outcome::Holds;
      if (!b.witness) b.outcome = Outcome::Inconclusive;
      if (!b.witness) b.detail += "; no witness C <= 2^30 on the scanned range";
      return b;
    }
    if (e->remainder() && is_bounded(*e->remainder()) && b.witness) {
      b.method = ProbeMethod::ExactSymbolic;
      b.outcome = Outcome::Holds;
      b.detail = "bounded remainder";
      return b;
    }
  }
  if (!v) {
    b.detail = "not evaluable: " + why;
    return b;
  }
  // numeric: compare running minima over successive decades
  auto cps = detail::checkpoints(f, cfg.horizon, cfg.checkpoint_ratio);
  std::vector<double> mins;
  long lo = f;
  for (long c : cps) {
    double m = INFINITY;
    for (long n = lo; n <= c; ++n) m = std::min(m, (*v)[n - f]);
    mins.push_back(m);
    lo = c + 1;
  }
  const std::size_t k = mins.size();
  // decade minima that keep dropping by non-shrinking steps
  if (k >= 3 && mins[k - 1] < mins[k - 2] && mins[k - 2] < mins[k - 3] && mins[k - 1] < 0 &&
      (mins[k - 2] - mins[k - 1]) >= 0.5 * (mins[k - 3] - mins[k - 2])) {
    b.outcome = Outcome::Fails;
    b.witness.reset();
    b.detail = "decade minima decrease without settling";
    return b;
  }
  double earlier = INFINITY;
  for (std::size_t i = 0; i + 1 < k; ++i) earlier = std::min(earlier, mins[i]);
  if (mins.back() >= earlier - cfg.rel_tol * std::max(1.0, std::abs(earlier)) && b.witness) {
    b.outcome = Outcome::Holds;
    b.detail = "last-decade minimum does not undercut earlier values";
  } else {
    b.detail = "minimum still moving at horizon";
  }
  return b;
}

inline LowerBound bounded_above(const Seq& s, const ProbeSettings& cfg = {}) {
  LowerBound b = bounded_below(-s, cfg);
  b.observed_inf = -b.observed_inf;
  return b;
}

}  // namespace pointspec

#endif
