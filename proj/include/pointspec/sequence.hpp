#ifndef POINTSPEC_SEQUENCE_HPP
#define POINTSPEC_SEQUENCE_HPP

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asymptotic.hpp"
#include "errors.hpp"

namespace pointspec {

struct PowerTerm {
  double c = 0.0;
  double p = 0.0;
};

// Serializable leaf forms of a real sequence indexed by n >= 1.
struct SequenceSpec {
  enum class Form { Power, Affine, Poly, PowerSum, Geometric, Table };

  Form form = Form::Power;
  double c = 0.0;  // Power, Geometric
  double p = 0.0;  // Power
  double c0 = 0.0;
  double c1 = 0.0;
  std::vector<double> coeffs;  // coeffs[k] * n^k
  std::vector<PowerTerm> terms;
  double ratio = 1.0;  // Geometric: c * ratio^n
  std::vector<double> values;
  std::optional<PowerTerm> tail_hint;

  static SequenceSpec power(double c, double p) {
    SequenceSpec s;
    s.form = Form::Power;
    s.c = c;
    s.p = p;
    return s;
  }
  static SequenceSpec constant(double c) { return power(c, 0.0); }
  static SequenceSpec affine(double c0, double c1) {
    SequenceSpec s;
    s.form = Form::Affine;
    s.c0 = c0;
    s.c1 = c1;
    return s;
  }
  static SequenceSpec poly(std::vector<double> coeffs) {
    SequenceSpec s;
    s.form = Form::Poly;
    s.coeffs = std::move(coeffs);
    return s;
  }
  static SequenceSpec power_sum(std::vector<PowerTerm> terms) {
    SequenceSpec s;
    s.form = Form::PowerSum;
    s.terms = std::move(terms);
    return s;
  }
  static SequenceSpec geometric(double c, double ratio) {
    SequenceSpec s;
    s.form = Form::Geometric;
    s.c = c;
    s.ratio = ratio;
    return s;
  }
  static SequenceSpec table(std::vector<double> values,
                            std::optional<PowerTerm> tail_hint = std::nullopt) {
    SequenceSpec s;
    s.form = Form::Table;
    s.values = std::move(values);
    s.tail_hint = tail_hint;
    return s;
  }

  // All forms except Table reduce to a finite sum of c * ratio^n * n^p.
  std::vector<Term> closed_terms() const {
    std::vector<Term> out;
    switch (form) {
      case Form::Power:
        out.push_back({c, {1.0, p, 0.0}});
        break;
      case Form::Affine:
        out.push_back({c0, {}});
        out.push_back({c1, {1.0, 1.0, 0.0}});
        break;
      case Form::Poly:
        for (std::size_t k = 0; k < coeffs.size(); ++k)
          out.push_back({coeffs[k], {1.0, static_cast<double>(k), 0.0}});
        break;
      case Form::PowerSum:
        for (const auto& t : terms) out.push_back({t.c, {1.0, t.p, 0.0}});
        break;
      case Form::Geometric:
        out.push_back({c, {ratio, 0.0, 0.0}});
        break;
      case Form::Table:
        break;
    }
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (form) {
      case Form::Power:
        os << c << "*n^" << p;
        break;
      case Form::Affine:
        os << c0 << (c1 < 0 ? " - " : " + ") << std::abs(c1) << "*n";
        break;
      case Form::Poly:
        os << "poly(";
        for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? "," : "") << coeffs[k];
        os << ")";
        break;
      case Form::PowerSum:
        for (std::size_t k = 0; k < terms.size(); ++k)
          os << (k ? " + " : "") << terms[k].c << "*n^" << terms[k].p;
        break;
      case Form::Geometric:
        os << c << "*" << ratio << "^n";
        break;
      case Form::Table:
        os << "table[" << values.size() << "]";
        if (tail_hint) os << " ~ " << tail_hint->c << "*n^" << tail_hint->p;
        break;
    }
    return os.str();
  }
};

class SeqNode {
 public:
  virtual ~SeqNode() = default;
  virtual double eval(long n) const = 0;
  virtual long first_index() const { return 1; }
  virtual std::string describe() const = 0;
  // Value of the closed form at n = 0, where one exists.
  virtual std::optional<double> at_zero() const { return std::nullopt; }
  virtual void fill(long first, long last, double* out) const {
    for (long n = first; n <= last; ++n) out[n - first] = eval(n);
  }
  virtual const SequenceSpec* leaf() const { return nullptr; }

  const std::optional<Expansion>& expansion() const {
    std::call_once(once_, [this] { cache_ = expand(); });
    return cache_;
  }

 protected:
  virtual std::optional<Expansion> expand() const = 0;

 private:
  mutable std::once_flag once_;
  mutable std::optional<Expansion> cache_;
};

// Immutable handle to a sequence expression.
class Seq {
 public:
  Seq() = default;
  explicit Seq(std::shared_ptr<const SeqNode> node) : node_(std::move(node)) {}
  Seq(const SequenceSpec& spec);  // NOLINT(google-explicit-constructor)

  double operator()(long n) const {
    if (n < node_->first_index())
      throw DomainError("index " + std::to_string(n) + " below first index " +
                        std::to_string(node_->first_index()) + " of " + describe());
    double v = node_->eval(n);
    return v;
  }
  const std::optional<Expansion>& expansion() const { return node_->expansion(); }
  long first_index() const { return node_->first_index(); }
  std::string describe() const { return node_->describe(); }
  std::optional<double> at_zero() const { return node_->at_zero(); }
  const SequenceSpec* leaf() const { return node_->leaf(); }
  const SeqNode& node() const { return *node_; }

  // Values for n in [first, last].
  std::vector<double> values(long first, long last) const {
    if (first < node_->first_index()) throw DomainError("values below first index of " + describe());
    std::vector<double> out(static_cast<std::size_t>(std::max(0L, last - first + 1)));
    if (!out.empty()) node_->fill(first, last, out.data());
    return out;
  }

 private:
  std::shared_ptr<const SeqNode> node_;
};

namespace detail {

class LeafNode final : public SeqNode {
 public:
  explicit LeafNode(SequenceSpec s) : s_(std::move(s)) {}

  double eval(long n) const override {
    if (n < 1) throw DomainError("sequence index must be >= 1, got " + std::to_string(n));
    const double x = static_cast<double>(n);
    switch (s_.form) {
      case SequenceSpec::Form::Power:
        return s_.c * std::pow(x, s_.p);
      case SequenceSpec::Form::Affine:
        return s_.c0 + s_.c1 * x;
      case SequenceSpec::Form::Poly: {
        double v = 0.0;
        for (std::size_t k = s_.coeffs.size(); k-- > 0;) v = v * x + s_.coeffs[k];
        return v;
      }
      case SequenceSpec::Form::PowerSum: {
        double v = 0.0;
        for (const auto& t : s_.terms) v += t.c * std::pow(x, t.p);
        return v;
      }
      case SequenceSpec::Form::Geometric:
        return s_.c * std::pow(s_.ratio, x);
      case SequenceSpec::Form::Table:
        if (static_cast<std::size_t>(n) <= s_.values.size()) return s_.values[n - 1];
        if (s_.tail_hint) return s_.tail_hint->c * std::pow(x, s_.tail_hint->p);
        throw DomainError("table of length " + std::to_string(s_.values.size()) +
                          " has no entry " + std::to_string(n) + " and no tail_hint");
    }
    return 0.0;
  }

  std::optional<double> at_zero() const override {
    if (s_.form == SequenceSpec::Form::Table) return std::nullopt;
    double v = 0.0;
    for (const auto& t : s_.closed_terms()) {
      if (t.coef == 0.0) continue;
      if (t.scale.power < 0.0) return std::nullopt;
      if (t.scale.power == 0.0) v += t.coef;
    }
    return v;
  }

  std::string describe() const override { return s_.describe(); }
  const SequenceSpec* leaf() const override { return &s_; }

 protected:
  std::optional<Expansion> expand() const override {
    if (s_.form == SequenceSpec::Form::Table) {
      if (!s_.tail_hint) return std::nullopt;
      if (s_.tail_hint->c == 0.0) return Expansion::bound({1.0, s_.tail_hint->p, 0.0}, true);
      return Expansion::from_terms({Term{s_.tail_hint->c, {1.0, s_.tail_hint->p, 0.0}}},
                                   Scale{1.0, s_.tail_hint->p, 0.0}, true);
    }
    if (s_.form == SequenceSpec::Form::Geometric && s_.ratio <= 0.0) return std::nullopt;
    return Expansion::from_terms(s_.closed_terms());
  }

 private:
  SequenceSpec s_;
};

class SumNode final : public SeqNode {
 public:
  SumNode(Seq a, Seq b, double cb) : a_(std::move(a)), b_(std::move(b)), cb_(cb) {}
  double eval(long n) const override { return a_(n) + cb_ * b_(n); }
  long first_index() const override { return std::max(a_.first_index(), b_.first_index()); }
  std::optional<double> at_zero() const override {
    auto x = a_.at_zero(), y = b_.at_zero();
    if (!x || !y) return std::nullopt;
    return *x + cb_ * *y;
  }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first, last, out);
    std::vector<double> t(static_cast<std::size_t>(last - first + 1));
    b_.node().fill(first, last, t.data());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] += cb_ * t[i];
  }
  std::string describe() const override {
    return "(" + a_.describe() + (cb_ == 1.0 ? " + " : " - ") + b_.describe() + ")";
  }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    const auto& y = b_.expansion();
    if (!x || !y) return std::nullopt;
    return *x + cb_ * *y;
  }

 private:
  Seq a_, b_;
  double cb_;
};

class ProductNode final : public SeqNode {
 public:
  ProductNode(Seq a, Seq b) : a_(std::move(a)), b_(std::move(b)) {}
  double eval(long n) const override { return a_(n) * b_(n); }
  long first_index() const override { return std::max(a_.first_index(), b_.first_index()); }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first, last, out);
    std::vector<double> t(static_cast<std::size_t>(last - first + 1));
    b_.node().fill(first, last, t.data());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] *= t[i];
  }
  std::string describe() const override { return a_.describe() + "*" + b_.describe(); }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    const auto& y = b_.expansion();
    if (x && x->is_zero()) return Expansion{};
    if (y && y->is_zero()) return Expansion{};
    if (!x || !y) return std::nullopt;
    return *x * *y;
  }

 private:
  Seq a_, b_;
};

class ScaledNode final : public SeqNode {
 public:
  ScaledNode(double c, Seq a) : c_(c), a_(std::move(a)) {}
  double eval(long n) const override { return c_ * a_(n); }
  long first_index() const override { return a_.first_index(); }
  std::optional<double> at_zero() const override {
    auto x = a_.at_zero();
    if (!x) return std::nullopt;
    return c_ * *x;
  }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first, last, out);
    for (long i = 0; i <= last - first; ++i) out[i] *= c_;
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(12);
    os << c_ << "*" << a_.describe();
    return os.str();
  }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    return c_ * *x;
  }

 private:
  double c_;
  Seq a_;
};

class PowNode final : public SeqNode {
 public:
  PowNode(Seq a, double e) : a_(std::move(a)), e_(e) {}
  double eval(long n) const override {
    double x = a_(n);
    double v = (e_ == -1.0) ? 1.0 / x : (e_ == 0.5 ? std::sqrt(x) : std::pow(x, e_));
    if (std::isnan(v))
      throw DomainError("power " + std::to_string(e_) + " of negative value in " + describe());
    return v;
  }
  long first_index() const override { return a_.first_index(); }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first, last, out);
    for (long i = 0; i <= last - first; ++i) {
      double x = out[i];
      out[i] = (e_ == -1.0) ? 1.0 / x : (e_ == 0.5 ? std::sqrt(x) : std::pow(x, e_));
    }
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "(" << a_.describe() << ")^" << e_;
    return os.str();
  }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    return power(*x, e_);
  }

 private:
  Seq a_;
  double e_;
};

class AbsNode final : public SeqNode {
 public:
  explicit AbsNode(Seq a) : a_(std::move(a)) {}
  double eval(long n) const override { return std::abs(a_(n)); }
  long first_index() const override { return a_.first_index(); }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first, last, out);
    for (long i = 0; i <= last - first; ++i) out[i] = std::abs(out[i]);
  }
  std::string describe() const override { return "|" + a_.describe() + "|"; }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    return pointspec::abs(*x);
  }

 private:
  Seq a_;
};

class MinNode final : public SeqNode {
 public:
  MinNode(Seq a, Seq b, bool is_max) : a_(std::move(a)), b_(std::move(b)), max_(is_max) {}
  double eval(long n) const override {
    return max_ ? std::max(a_(n), b_(n)) : std::min(a_(n), b_(n));
  }
  long first_index() const override { return std::max(a_.first_index(), b_.first_index()); }
  std::string describe() const override {
    return std::string(max_ ? "max(" : "min(") + a_.describe() + ", " + b_.describe() + ")";
  }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    const auto& y = b_.expansion();
    if (!x || !y) return std::nullopt;
    return max_ ? pointspec::max(*x, *y) : pointspec::min(*x, *y);
  }

 private:
  Seq a_, b_;
  bool max_;
};

class ShiftNode final : public SeqNode {
 public:
  ShiftNode(Seq a, long k) : a_(std::move(a)), k_(k) {}
  double eval(long n) const override { return a_(n + k_); }
  long first_index() const override { return std::max(1L, a_.first_index() - k_); }
  void fill(long first, long last, double* out) const override {
    a_.node().fill(first + k_, last + k_, out);
  }
  std::string describe() const override {
    return a_.describe() + "[n" + (k_ >= 0 ? "+" : "") + std::to_string(k_) + "]";
  }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    return shift(*x, k_);
  }

 private:
  Seq a_;
  long k_;
};

// a(n) - a(n-1), using the closed-form value a(0) at n = 1.
class GapNode final : public SeqNode {
 public:
  explicit GapNode(Seq a) : a_(std::move(a)) {
    if (!a_.at_zero()) throw DomainError("gap sequence needs a value at 0 for " + a_.describe());
  }
  double eval(long n) const override {
    if (n == 1) return a_(1) - *a_.at_zero();
    if (const SequenceSpec* s = a_.leaf(); s && s->form != SequenceSpec::Form::Table &&
                                           s->form != SequenceSpec::Form::Geometric) {
      // c n^p (1 - (1 - 1/n)^p) without cancellation
      double v = 0.0;
      const double x = static_cast<double>(n);
      for (const auto& t : s->closed_terms())
        v += -t.coef * std::pow(x, t.scale.power) * std::expm1(t.scale.power * std::log1p(-1.0 / x));
      return v;
    }
    return a_(n) - a_(n - 1);
  }
  std::optional<double> at_zero() const override { return std::nullopt; }
  std::string describe() const override { return "gap(" + a_.describe() + ")"; }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    return *x - shift(*x, -1);
  }

 private:
  Seq a_;
};

class InterleaveNode final : public SeqNode {
 public:
  InterleaveNode(Seq odd, Seq even) : odd_(std::move(odd)), even_(std::move(even)) {}
  double eval(long k) const override {
    if (k < 1) throw DomainError("interleaved index must be >= 1");
    return (k % 2) ? odd_((k + 1) / 2) : even_(k / 2);
  }
  std::string describe() const override {
    return "interleave(" + odd_.describe() + ", " + even_.describe() + ")";
  }
  const Seq& odd() const { return odd_; }
  const Seq& even() const { return even_; }

 protected:
  std::optional<Expansion> expand() const override { return std::nullopt; }

 private:
  Seq odd_, even_;
};

inline constexpr long kConstantFitIndex = 4096;

// sum_{j = first}^{n} a(j)
class PartialSumNode final : public SeqNode {
 public:
  explicit PartialSumNode(Seq a) : a_(std::move(a)) {}
  double eval(long n) const override {
    double s = 0.0;
    for (long j = a_.first_index(); j <= n; ++j) s += a_(j);
    return s;
  }
  long first_index() const override { return a_.first_index(); }
  // the empty sum
  std::optional<double> at_zero() const override {
    if (a_.first_index() == 1) return 0.0;
    return std::nullopt;
  }
  void fill(long first, long last, double* out) const override {
    long f0 = a_.first_index();
    std::vector<double> v(static_cast<std::size_t>(last - f0 + 1));
    a_.node().fill(f0, last, v.data());
    double s = 0.0;
    for (long j = f0; j <= last; ++j) {
      s += v[j - f0];
      if (j >= first) out[j - first] = s;
    }
  }
  std::string describe() const override { return "partial_sum(" + a_.describe() + ")"; }

 protected:
  std::optional<Expansion> expand() const override {
    const auto& x = a_.expansion();
    if (!x) return std::nullopt;
    if (x->is_zero()) return Expansion{};
    auto nc = partial_sum_nonconstant(*x);
    if (!nc) return std::nullopt;
    if (nc->remainder() && compare(*nc->remainder(), Scale{}) >= 0) return nc;
    double s = 0.0;
    try {
      s = eval(kConstantFitIndex);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    double c = s - nc->value(static_cast<double>(kConstantFitIndex));
    if (std::abs(c) <= 1e-13 * std::max(1.0, std::abs(s))) return nc;
    return *nc + Expansion::constant(c);
  }

 private:
  Seq a_;
};

// sum_{j >= n} a(j), closed off with the asymptotic tail.
class TailSumNode final : public SeqNode {
 public:
  explicit TailSumNode(Seq a) : a_(std::move(a)) {}
  double eval(long n) const override {
    const auto& t = tail();
    if (!t) throw DomainError("tail sum of " + a_.describe() + " has no asymptotic closure");
    long m = std::max(n, kConstantFitIndex);
    double s = 0.0;
    for (long j = n; j < m; ++j) s += a_(j);
    return s + t->value(static_cast<double>(m));
  }
  long first_index() const override { return a_.first_index(); }
  void fill(long first, long last, double* out) const override {
    std::vector<double> v(static_cast<std::size_t>(last - first + 1));
    a_.node().fill(first, last, v.data());
    double s = eval(last);
    out[last - first] = s;
    for (long j = last - 1; j >= first; --j) {
      s += v[j - first];
      out[j - first] = s;
    }
  }
  std::string describe() const override { return "tail_sum(" + a_.describe() + ")"; }

 protected:
  std::optional<Expansion> expand() const override { return tail(); }

 private:
  const std::optional<Expansion>& tail() const {
    std::call_once(once_, [this] {
      const auto& x = a_.expansion();
      if (x) t_ = tail_sum(*x);
    });
    return t_;
  }
  Seq a_;
  mutable std::once_flag once_;
  mutable std::optional<Expansion> t_;
};

}  // namespace detail

inline Seq::Seq(const SequenceSpec& spec) : node_(std::make_shared<detail::LeafNode>(spec)) {}

inline Seq constant(double c) { return Seq(SequenceSpec::constant(c)); }
inline Seq power_seq(double c, double p) { return Seq(SequenceSpec::power(c, p)); }

inline Seq operator+(const Seq& a, const Seq& b) {
  return Seq(std::make_shared<detail::SumNode>(a, b, 1.0));
}
inline Seq operator-(const Seq& a, const Seq& b) {
  return Seq(std::make_shared<detail::SumNode>(a, b, -1.0));
}
inline Seq operator*(const Seq& a, const Seq& b) {
  return Seq(std::make_shared<detail::ProductNode>(a, b));
}
inline Seq operator*(double c, const Seq& a) {
  return Seq(std::make_shared<detail::ScaledNode>(c, a));
}
inline Seq operator*(const Seq& a, double c) { return c * a; }
inline Seq operator-(const Seq& a) { return -1.0 * a; }
inline Seq operator-(const Seq& a, double c) { return a + constant(-c); }
inline Seq operator+(const Seq& a, double c) { return a + constant(c); }
inline Seq operator+(double c, const Seq& a) { return constant(c) + a; }
inline Seq operator-(double c, const Seq& a) { return constant(c) - a; }
// Powers of a Power leaf stay a leaf, so 1/(1/n) evaluates to n exactly.
inline Seq pow(const Seq& a, double e) {
  if (const SequenceSpec* s = a.leaf(); s && s->form == SequenceSpec::Form::Power && s->c > 0.0)
    return Seq(SequenceSpec::power(std::pow(s->c, e), s->p * e));
  return Seq(std::make_shared<detail::PowNode>(a, e));
}
inline Seq reciprocal(const Seq& a) { return pow(a, -1.0); }
inline Seq sqrt(const Seq& a) { return pow(a, 0.5); }
inline Seq operator/(const Seq& a, const Seq& b) { return a * reciprocal(b); }
inline Seq operator/(double c, const Seq& b) { return c * reciprocal(b); }
inline Seq abs(const Seq& a) { return Seq(std::make_shared<detail::AbsNode>(a)); }
inline Seq min(const Seq& a, const Seq& b) {
  return Seq(std::make_shared<detail::MinNode>(a, b, false));
}
inline Seq max(const Seq& a, const Seq& b) {
  return Seq(std::make_shared<detail::MinNode>(a, b, true));
}
// n -> n + k
inline Seq shift(const Seq& a, long k) { return Seq(std::make_shared<detail::ShiftNode>(a, k)); }
inline Seq gap(const Seq& a) { return Seq(std::make_shared<detail::GapNode>(a)); }
inline Seq partial_sum(const Seq& a) { return Seq(std::make_shared<detail::PartialSumNode>(a)); }
inline Seq tail_sum(const Seq& a) { return Seq(std::make_shared<detail::TailSumNode>(a)); }
inline Seq interleave(const Seq& odd, const Seq& even) {
  return Seq(std::make_shared<detail::InterleaveNode>(odd, even));
}

inline const detail::InterleaveNode* as_interleave(const Seq& s) {
  return dynamic_cast<const detail::InterleaveNode*>(&s.node());
}

inline double eval_seq(const Seq& s, long n) { return s(n); }

}  // namespace pointspec

#endif
