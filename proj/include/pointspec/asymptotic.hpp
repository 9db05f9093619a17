#ifndef POINTSPEC_ASYMPTOTIC_HPP
#define POINTSPEC_ASYMPTOTIC_HPP

// Truncated asymptotic expansions in n -> infinity built from terms
//   c * rate^n * n^power * (log n)^logpow
// plus an optional remainder bound O(scale) or o(scale).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pointspec {

inline constexpr int kExpansionDepth = 12;

struct Scale {
  double rate = 1.0;
  double power = 0.0;
  double logpow = 0.0;
};

namespace detail {

inline bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool is_nonneg_integer(double p) {
  return p >= 0.0 && std::abs(p - std::round(p)) < 1e-12;
}

// binom(p, j) for real p.
inline double binom(double p, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (p - i) / (i + 1);
  return r;
}

// p (p-1) ... (p-m+1)
inline double falling(double p, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= (p - i);
  return r;
}

// B_2, B_4, ..., B_12
inline constexpr std::array<double, 6> kBernoulliEven = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};

inline double factorial(int m) {
  double r = 1.0;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

// sum_{k>=0} k^i r^k for 0 < r < 1, with 0^0 = 1.
inline double polylog_neg(int i, double r) {
  double s = (i == 0) ? 1.0 : 0.0;
  double prev = 0.0;
  for (long k = 1; k < 10000000; ++k) {
    double t = std::pow(static_cast<double>(k), i) * std::pow(r, static_cast<double>(k));
    s += t;
    if (t < 1e-18 * std::abs(s) && t < prev) break;
    prev = t;
  }
  return s;
}

}  // namespace detail

inline bool is_unit_rate(const Scale& s) { return detail::near(s.rate, 1.0, 1e-12); }

// -1, 0, +1 as a grows slower / same / faster than b.
inline int compare(const Scale& a, const Scale& b) {
  if (!detail::near(a.rate, b.rate, 1e-12)) return a.rate < b.rate ? -1 : 1;
  if (!detail::near(a.power, b.power, 1e-9)) return a.power < b.power ? -1 : 1;
  if (!detail::near(a.logpow, b.logpow, 1e-9)) return a.logpow < b.logpow ? -1 : 1;
  return 0;
}

inline Scale operator*(const Scale& a, const Scale& b) {
  return {a.rate * b.rate, a.power + b.power, a.logpow + b.logpow};
}

inline Scale pow(const Scale& a, double e) {
  return {std::pow(a.rate, e), a.power * e, a.logpow * e};
}

inline bool tends_to_zero(const Scale& s) {
  if (!is_unit_rate(s)) return s.rate < 1.0;
  if (std::abs(s.power) > 1e-9) return s.power < 0.0;
  return s.logpow < -1e-9;
}

inline bool is_bounded(const Scale& s) {
  if (!is_unit_rate(s)) return s.rate < 1.0;
  if (std::abs(s.power) > 1e-9) return s.power < 0.0;
  return s.logpow < 1e-9;
}

inline bool is_summable(const Scale& s) {
  if (!is_unit_rate(s)) return s.rate < 1.0;
  if (std::abs(s.power + 1.0) > 1e-9) return s.power < -1.0;
  return s.logpow < -1.0 - 1e-9;
}

inline bool is_constant_scale(const Scale& s) { return compare(s, Scale{}) == 0; }

inline double evaluate(const Scale& s, double n) {
  double v = std::exp(n * std::log(s.rate) + s.power * std::log(n));
  if (s.logpow != 0.0) v *= std::pow(std::log(n), s.logpow);
  return v;
}

inline std::string to_string(const Scale& s) {
  std::ostringstream os;
  os.precision(6);
  bool any = false;
  if (!is_unit_rate(s)) {
    os << s.rate << "^n";
    any = true;
  }
  if (std::abs(s.power) > 1e-12) {
    os << (any ? " " : "") << "n^" << s.power;
    any = true;
  }
  if (std::abs(s.logpow) > 1e-12) {
    os << (any ? " " : "") << "log(n)^" << s.logpow;
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

struct Term {
  double coef = 0.0;
  Scale scale;
};

class Expansion {
 public:
  // The exact zero sequence.
  Expansion() = default;

  static Expansion monomial(double c, Scale s) {
    return from_terms({Term{c, s}});
  }

  static Expansion constant(double c) { return monomial(c, Scale{}); }

  // A sequence known only up to O(s) (or o(s)).
  static Expansion bound(Scale s, bool little_o = false) {
    Expansion e;
    e.rem_ = s;
    e.little_o_ = little_o;
    return e;
  }

  static Expansion from_terms(std::vector<Term> raw, std::optional<Scale> rem = std::nullopt,
                              bool little_o = false) {
    std::vector<double> mags;
    mags.reserve(raw.size());
    for (const auto& t : raw) mags.push_back(std::abs(t.coef));
    return normalize(std::move(raw), std::move(mags), rem, little_o);
  }

  const std::vector<Term>& terms() const { return terms_; }
  const std::optional<Scale>& remainder() const { return rem_; }
  bool little_o() const { return little_o_; }
  bool is_exact() const { return !rem_.has_value(); }
  bool is_zero() const { return terms_.empty() && !rem_; }
  const Term* leading() const { return terms_.empty() ? nullptr : &terms_.front(); }

  // Scale of the dominant part (leading term, else the remainder).
  std::optional<Scale> size() const {
    if (!terms_.empty()) return terms_.front().scale;
    return rem_;
  }

  double value(double n) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coef * evaluate(t.scale, n);
    return s;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(10);
    if (is_zero()) return "0";
    bool first = true;
    for (const auto& t : terms_) {
      if (!first) os << " + ";
      os << t.coef << "*" << to_string(t.scale);
      first = false;
    }
    if (rem_) {
      if (!first) os << " + ";
      os << (little_o_ ? "o(" : "O(") << to_string(*rem_) << ")";
    }
    return os.str();
  }

  friend Expansion operator+(const Expansion& a, const Expansion& b) {
    std::vector<Term> raw = a.terms_;
    raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
    std::vector<double> mags;
    for (const auto& t : raw) mags.push_back(std::abs(t.coef));
    auto [rem, lo] = max_remainder(a, b);
    return normalize(std::move(raw), std::move(mags), rem, lo);
  }

  friend Expansion operator*(double c, const Expansion& a) {
    if (c == 0.0) return Expansion{};
    Expansion r = a;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  friend Expansion operator-(const Expansion& a) { return -1.0 * a; }
  friend Expansion operator-(const Expansion& a, const Expansion& b) { return a + (-b); }

  friend Expansion operator*(const Expansion& a, const Expansion& b) {
    if (a.is_zero() || b.is_zero()) return Expansion{};
    std::vector<Term> raw;
    std::vector<double> mags;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        raw.push_back({x.coef * y.coef, x.scale * y.scale});
        mags.push_back(std::abs(x.coef * y.coef));
      }
    std::optional<Scale> rem;
    bool lo = true;
    auto consider = [&](Scale s, bool strict) {
      if (!rem || compare(s, *rem) > 0) {
        rem = s;
        lo = strict;
      } else if (compare(s, *rem) == 0) {
        lo = lo && strict;
      }
    };
    if (b.rem_) consider(*a.size() * *b.rem_, b.little_o_);
    if (a.rem_) consider(*b.size() * *a.rem_, a.little_o_);
    return normalize(std::move(raw), std::move(mags), rem, rem ? lo : false);
  }

 private:
  static std::pair<std::optional<Scale>, bool> max_remainder(const Expansion& a,
                                                             const Expansion& b) {
    if (!a.rem_) return {b.rem_, b.little_o_};
    if (!b.rem_) return {a.rem_, a.little_o_};
    int c = compare(*a.rem_, *b.rem_);
    if (c > 0) return {a.rem_, a.little_o_};
    if (c < 0) return {b.rem_, b.little_o_};
    return {a.rem_, a.little_o_ && b.little_o_};
  }

  static Expansion normalize(std::vector<Term> raw, std::vector<double> mags,
                             std::optional<Scale> rem, bool little_o) {
    std::vector<std::size_t> idx(raw.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      return compare(raw[i].scale, raw[j].scale) > 0;
    });
    Expansion out;
    out.rem_ = rem;
    out.little_o_ = rem ? little_o : false;
    std::size_t i = 0;
    while (i < idx.size()) {
      Term acc = raw[idx[i]];
      double mag = mags[idx[i]];
      std::size_t j = i + 1;
      while (j < idx.size() && compare(raw[idx[j]].scale, acc.scale) == 0) {
        acc.coef += raw[idx[j]].coef;
        mag += mags[idx[j]];
        ++j;
      }
      i = j;
      if (!std::isfinite(acc.coef) || std::abs(acc.coef) <= 1e-10 * mag || acc.coef == 0.0)
        continue;
      if (rem) {
        int c = compare(acc.scale, *rem);
        if (c < 0 || (c == 0 && !little_o)) continue;
      }
      out.terms_.push_back(acc);
    }
    if (static_cast<int>(out.terms_.size()) > kExpansionDepth) {
      Scale cut = out.terms_[kExpansionDepth].scale;
      out.terms_.resize(kExpansionDepth);
      if (!out.rem_ || compare(cut, *out.rem_) >= 0) {
        out.rem_ = cut;
        out.little_o_ = false;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
  std::optional<Scale> rem_;
  bool little_o_ = false;
};

// a^e via the binomial series around the leading term. Needs a positive leading
// coefficient unless e is an integer.
inline std::optional<Expansion> power(const Expansion& a, double e) {
  if (e == 0.0) return Expansion::constant(1.0);
  if (e == 1.0) return a;
  if (a.is_zero()) {
    if (e > 0.0) return Expansion{};
    return std::nullopt;
  }
  const Term* lead = a.leading();
  if (!lead) {
    if (e > 0.0) return Expansion::bound(pow(*a.remainder(), e), a.little_o());
    return std::nullopt;
  }
  bool integer = std::abs(e - std::round(e)) < 1e-12;
  if (lead->coef < 0.0 && !integer) return std::nullopt;
  Scale s_inv = pow(lead->scale, -1.0);
  // u = a / lead - 1
  std::vector<Term> rel;
  for (std::size_t i = 1; i < a.terms().size(); ++i)
    rel.push_back({a.terms()[i].coef / lead->coef, a.terms()[i].scale * s_inv});
  std::optional<Scale> rel_rem;
  if (a.remainder()) rel_rem = *a.remainder() * s_inv;
  Expansion u = Expansion::from_terms(rel, rel_rem, a.little_o());
  Expansion acc = Expansion::constant(1.0);
  if (!u.is_zero()) {
    Expansion uj = Expansion::constant(1.0);
    const int J = kExpansionDepth;
    for (int j = 1; j <= J; ++j) {
      uj = uj * u;
      double b = detail::binom(e, j);
      if (b == 0.0) break;
      acc = acc + b * uj;
    }
    bool terminates = detail::is_nonneg_integer(e) && e <= J;
    if (!terminates) acc = acc + Expansion::bound(pow(*u.size(), J + 1.0));
  }
  double ce = std::pow(lead->coef, e);
  return Expansion::monomial(ce, pow(lead->scale, e)) * acc;
}

inline std::optional<Expansion> reciprocal(const Expansion& a) { return power(a, -1.0); }

// n -> n + k
inline Expansion shift(const Expansion& a, long k) {
  if (k == 0 || a.is_zero()) return a;
  std::vector<Term> raw;
  std::optional<Scale> rem = a.remainder();
  bool lo = a.little_o();
  auto widen = [&](Scale s) {
    if (!rem || compare(s, *rem) > 0) {
      rem = s;
      lo = false;
    }
  };
  const double kd = static_cast<double>(k);
  for (const auto& t : a.terms()) {
    double c = t.coef * std::pow(t.scale.rate, kd);
    const double p = t.scale.power;
    if (std::abs(t.scale.logpow) > 1e-12) {
      raw.push_back({c, t.scale});
      widen({t.scale.rate, p - 1.0, t.scale.logpow});
      continue;
    }
    bool finite = detail::is_nonneg_integer(p) && p <= kExpansionDepth;
    int J = finite ? static_cast<int>(std::round(p)) : kExpansionDepth;
    for (int j = 0; j <= J; ++j) {
      double b = detail::binom(p, j) * std::pow(kd, j);
      if (b == 0.0) continue;
      raw.push_back({c * b, {t.scale.rate, p - j, 0.0}});
    }
    if (!finite) widen({t.scale.rate, p - J - 1.0, 0.0});
  }
  return Expansion::from_terms(std::move(raw), rem, lo);
}

inline std::optional<int> eventual_sign(const Expansion& a) {
  if (a.is_zero()) return 0;
  if (const Term* t = a.leading()) return t->coef > 0 ? 1 : -1;
  return std::nullopt;
}

inline std::optional<Expansion> abs(const Expansion& a) {
  auto s = eventual_sign(a);
  if (!s) return std::nullopt;
  return (*s < 0) ? -a : a;
}

// Eventually smaller of a and b.
inline std::optional<Expansion> min(const Expansion& a, const Expansion& b) {
  auto s = eventual_sign(a - b);
  if (!s) return std::nullopt;
  return (*s <= 0) ? a : b;
}

inline std::optional<Expansion> max(const Expansion& a, const Expansion& b) {
  auto s = eventual_sign(a - b);
  if (!s) return std::nullopt;
  return (*s >= 0) ? a : b;
}

// sum_{j >= n} a(j). Requires a summable expansion.
inline std::optional<Expansion> tail_sum(const Expansion& a) {
  if (a.is_zero()) return Expansion{};
  auto sz = a.size();
  if (!is_summable(*sz)) return std::nullopt;
  std::vector<Term> raw;
  std::optional<Scale> rem;
  bool lo = false;
  auto widen = [&](Scale s, bool strict) {
    if (!rem || compare(s, *rem) > 0) {
      rem = s;
      lo = strict;
    }
  };
  const int J = kExpansionDepth;
  for (const auto& t : a.terms()) {
    const Scale& s = t.scale;
    const double p = s.power;
    if (!is_unit_rate(s)) {
      if (std::abs(s.logpow) > 1e-12) {
        double l0 = detail::polylog_neg(0, s.rate);
        raw.push_back({t.coef * l0, s});
        widen({s.rate, p - 1.0, s.logpow}, false);
        continue;
      }
      bool finite = detail::is_nonneg_integer(p) && p <= J;
      int I = finite ? static_cast<int>(std::round(p)) : J;
      for (int i = 0; i <= I; ++i) {
        double b = detail::binom(p, i);
        if (b == 0.0) continue;
        raw.push_back({t.coef * b * detail::polylog_neg(i, s.rate), {s.rate, p - i, 0.0}});
      }
      if (!finite) widen({s.rate, p - I - 1.0, 0.0}, false);
      continue;
    }
    if (std::abs(s.logpow) > 1e-12) {
      if (std::abs(p + 1.0) < 1e-9) {
        // sum_{j>=n} (log j)^q / j = -(log n)^{q+1}/(q+1) + ...
        raw.push_back({-t.coef / (s.logpow + 1.0), {1.0, 0.0, s.logpow + 1.0}});
        widen({1.0, 0.0, s.logpow}, false);
      } else {
        raw.push_back({t.coef / (-p - 1.0), {1.0, p + 1.0, s.logpow}});
        widen({1.0, p + 1.0, s.logpow - 1.0}, false);
      }
      continue;
    }
    raw.push_back({t.coef / (-p - 1.0), {1.0, p + 1.0, 0.0}});
    raw.push_back({t.coef / 2.0, {1.0, p, 0.0}});
    for (int k = 1; k <= static_cast<int>(detail::kBernoulliEven.size()); ++k) {
      double c = -detail::kBernoulliEven[k - 1] / detail::factorial(2 * k) *
                 detail::falling(p, 2 * k - 1);
      if (c == 0.0) continue;
      raw.push_back({t.coef * c, {1.0, p - 2 * k + 1, 0.0}});
    }
    widen({1.0, p - 2.0 * detail::kBernoulliEven.size() - 1.0, 0.0}, false);
  }
  if (a.remainder()) {
    Scale r = *a.remainder();
    if (is_unit_rate(r)) {
      if (std::abs(r.power + 1.0) < 1e-9)
        widen({1.0, 0.0, r.logpow + 1.0}, a.little_o());
      else
        widen({1.0, r.power + 1.0, r.logpow}, a.little_o());
    } else {
      widen(r, a.little_o());
    }
  }
  return Expansion::from_terms(std::move(raw), rem, lo);
}

// Non-constant part of sum_{j <= n} a(j); the additive constant is fixed by the
// caller from actual values. Returns nullopt when a term has no closed form
// (log log growth).
inline std::optional<Expansion> partial_sum_nonconstant(const Expansion& a) {
  if (a.is_zero()) return Expansion{};
  std::vector<Term> raw;
  std::optional<Scale> rem;
  bool lo = false;
  auto widen = [&](Scale s, bool strict) {
    if (!rem || compare(s, *rem) > 0) {
      rem = s;
      lo = strict;
    }
  };
  const int J = kExpansionDepth;
  for (const auto& t : a.terms()) {
    const Scale& s = t.scale;
    const double p = s.power;
    if (!is_unit_rate(s) && s.rate < 1.0) {
      auto tail = tail_sum(Expansion::monomial(t.coef, s));
      if (!tail) return std::nullopt;
      Expansion part = -shift(*tail, 1);
      raw.insert(raw.end(), part.terms().begin(), part.terms().end());
      if (part.remainder()) widen(*part.remainder(), false);
      continue;
    }
    if (!is_unit_rate(s)) {
      if (std::abs(s.logpow) > 1e-12) {
        raw.push_back({t.coef * detail::polylog_neg(0, 1.0 / s.rate), s});
        widen({s.rate, p - 1.0, s.logpow}, false);
        continue;
      }
      bool finite = detail::is_nonneg_integer(p) && p <= J;
      int I = finite ? static_cast<int>(std::round(p)) : J;
      for (int i = 0; i <= I; ++i) {
        double b = detail::binom(p, i) * ((i % 2) ? -1.0 : 1.0);
        if (b == 0.0) continue;
        raw.push_back({t.coef * b * detail::polylog_neg(i, 1.0 / s.rate), {s.rate, p - i, 0.0}});
      }
      if (!finite) widen({s.rate, p - I - 1.0, 0.0}, false);
      continue;
    }
    if (std::abs(s.logpow) > 1e-12) {
      const double q = s.logpow;
      if (std::abs(p + 1.0) < 1e-9) {
        if (std::abs(q + 1.0) < 1e-9) return std::nullopt;
        raw.push_back({t.coef / (q + 1.0), {1.0, 0.0, q + 1.0}});
        widen({1.0, 0.0, q}, false);
      } else {
        raw.push_back({t.coef / (p + 1.0), {1.0, p + 1.0, q}});
        widen({1.0, p + 1.0, q - 1.0}, false);
      }
      continue;
    }
    if (std::abs(p + 1.0) < 1e-9) {
      raw.push_back({t.coef, {1.0, 0.0, 1.0}});
    } else {
      raw.push_back({t.coef / (p + 1.0), {1.0, p + 1.0, 0.0}});
    }
    raw.push_back({t.coef / 2.0, {1.0, p, 0.0}});
    bool finite = detail::is_nonneg_integer(p);
    for (int k = 1; k <= static_cast<int>(detail::kBernoulliEven.size()); ++k) {
      double c = detail::kBernoulliEven[k - 1] / detail::factorial(2 * k) *
                 detail::falling(p, 2 * k - 1);
      if (c == 0.0) continue;
      raw.push_back({t.coef * c, {1.0, p - 2 * k + 1, 0.0}});
    }
    if (!(finite && p < 2.0 * detail::kBernoulliEven.size()))
      widen({1.0, p - 2.0 * detail::kBernoulliEven.size() - 1.0, 0.0}, false);
  }
  if (a.remainder()) {
    Scale r = *a.remainder();
    if (is_unit_rate(r)) {
      if (std::abs(r.power + 1.0) < 1e-9) {
        if (std::abs(r.logpow + 1.0) < 1e-9) return std::nullopt;
        if (r.logpow < -1.0)
          widen({1.0, 0.0, r.logpow + 1.0}, a.little_o());
        else
          widen({1.0, 0.0, r.logpow + 1.0}, a.little_o());
      } else {
        widen({1.0, r.power + 1.0, r.logpow}, a.little_o());
      }
    } else {
      widen(r, a.little_o());
    }
  }
  return Expansion::from_terms(std::move(raw), rem, lo);
}

}  // namespace pointspec

#endif
