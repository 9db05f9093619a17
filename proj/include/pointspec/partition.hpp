#ifndef POINTSPEC_PARTITION_HPP
#define POINTSPEC_PARTITION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "probes.hpp"

namespace pointspec {

// Interaction sites 0 = x_0 < x_1 < x_2 < ... with gaps d_n = x_n - x_{n-1}.
class Partition {
 public:
  static Partition from_gaps(Seq d) {
    Partition p;
    p.d_ = std::move(d);
    p.x_ = partial_sum(p.d_);
    p.check();
    return p;
  }

  // x must have a closed form with x(0) = 0.
  static Partition from_points(Seq x) {
    auto x0 = x.at_zero();
    if (!x0) throw DomainError("points " + x.describe() + " have no value at 0");
    if (*x0 != 0.0) throw DomainError("points must start at x_0 = 0");
    Partition p;
    p.d_ = gap(x);
    p.x_ = std::move(x);
    p.from_points_ = true;
    p.check();
    return p;
  }

  const Seq& d() const { return d_; }
  const Seq& x() const { return x_; }
  Seq r() const { return sqrt(d_ + shift(d_, 1)); }
  double d(long n) const { return d_(n); }
  double x(long n) const { return n == 0 ? 0.0 : x_(n); }
  double r(long n) const { return std::sqrt(d_(n) + d_(n + 1)); }
  bool defined_by_points() const { return from_points_; }
  std::string describe() const {
    return from_points_ ? "x_n = " + x_.describe() : "d_n = " + d_.describe();
  }

  // b = sum d_n
  ProbeResult total_length(const ProbeSettings& cfg = {}) const {
    return series_probe(d_, cfg, "total length sum d_n");
  }
  ProbeResult d_limit(const ProbeSettings& cfg = {}) const {
    return limit_probe(d_, cfg, "lim d_n");
  }

  // d_* = inf d_n: zero when d_n -> 0, otherwise the smaller of the
  // scanned minimum and the limit.
  ProbeResult d_lower(const ProbeSettings& cfg = {}) const { return extremum(cfg, false); }
  // d^* = sup d_n
  ProbeResult d_upper(const ProbeSettings& cfg = {}) const { return extremum(cfg, true); }

  // The gaps are exactly c/n.
  bool is_inverse_n() const {
    const SequenceSpec* s = d_.leaf();
    return s && s->form == SequenceSpec::Form::Power && s->p == -1.0 && s->c == 1.0;
  }

 private:
  void check() const {
    for (long n = 1; n <= 64; ++n)
      if (!(d_(n) > 0.0))
        throw DomainError("partition gaps must be positive; d_" + std::to_string(n) + " = " +
                          std::to_string(d_(n)));
    if (const auto& e = d_.expansion()) {
      if (auto sg = eventual_sign(*e); sg && *sg < 0)
        throw DomainError("partition gaps eventually negative: " + d_.describe());
    }
  }

  ProbeResult extremum(const ProbeSettings& cfg, bool upper) const {
    ProbeResult lim = d_limit(cfg);
    const char* name = upper ? "sup d_n" : "inf d_n";
    ProbeResult r;
    r.subject = name;
    r.kind = ProbeKind::LimitIs;
    r.method = ProbeMethod::NumericTail;
    r.horizon = cfg.horizon;
    r.tolerance = cfg.rel_tol;
    if (upper && lim.kind == ProbeKind::DivergesToInf) {
      lim.subject = name;
      return lim;
    }
    const SequenceSpec* s = d_.leaf();
    if (s && s->form == SequenceSpec::Form::Power && s->p == 0.0) {
      r.method = ProbeMethod::ExactSymbolic;
      r.horizon = 0;
      r.value = s->c;
      r.detail = "constant gaps";
      return r;
    }
    std::string why;
    auto v = detail::sample(d_, 1, cfg.horizon, &why);
    if (!v) {
      r.kind = ProbeKind::Indeterminate;
      r.detail = why;
      return r;
    }
    double m = upper ? *std::max_element(v->begin(), v->end())
                     : *std::min_element(v->begin(), v->end());
    if (lim.kind == ProbeKind::LimitIs) {
      if (!upper && lim.exact() && lim.value == 0.0) {
        r.method = ProbeMethod::ExactSymbolic;
        r.horizon = 0;
        r.value = 0.0;
        r.detail = "d_n -> 0";
        return r;
      }
      m = upper ? std::max(m, lim.value) : std::min(m, lim.value);
      r.detail = "scan combined with " + lim.str();
    } else {
      r.detail = "scanned to horizon";
    }
    r.value = m;
    return r;
  }

  Seq d_;
  Seq x_;
  bool from_points_ = false;
};

}  // namespace pointspec

#endif
