#ifndef POINTSPEC_JACOBI_HPP
#define POINTSPEC_JACOBI_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "partition.hpp"

namespace pointspec {

enum class JacobiKind { DeltaB1, DeltaB2, DeltaPrimeB1, DeltaPrimeB2, StringMl, DeltaPotential, Free };
enum class Gauge { Signed, PositiveOffdiag };

inline const char* to_string(JacobiKind k) {
  switch (k) {
    case JacobiKind::DeltaB1: return "DeltaB1";
    case JacobiKind::DeltaB2: return "DeltaB2";
    case JacobiKind::DeltaPrimeB1: return "DeltaPrimeB1";
    case JacobiKind::DeltaPrimeB2: return "DeltaPrimeB2";
    case JacobiKind::StringMl: return "StringMl";
    case JacobiKind::DeltaPotential: return "DeltaPotential";
    case JacobiKind::Free: return "Free";
  }
  return "?";
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  // offdiag[i] couples i and i+1

  std::size_t size() const { return diag.size(); }

  double norm_inf() const {
    double m = 0.0;
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      double r = std::abs(diag[i]);
      if (i > 0) r += std::abs(offdiag[i - 1]);
      if (i + 1 < n) r += std::abs(offdiag[i]);
      m = std::max(m, r);
    }
    return m;
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = offdiag[i];
    }
    return m;
  }

  TridiagonalMatrix leading(std::size_t n) const {
    TridiagonalMatrix t;
    t.diag.assign(diag.begin(), diag.begin() + n);
    t.offdiag.assign(offdiag.begin(), offdiag.begin() + (n ? n - 1 : 0));
    return t;
  }

  // index,diag,offdiag with 1-based index; the last offdiag cell is empty.
  std::string to_csv() const {
    std::ostringstream os;
    os << "index,diag,offdiag\n";
    for (std::size_t i = 0; i < diag.size(); ++i) {
      os << (i + 1) << "," << format_g17(diag[i]) << ",";
      if (i < offdiag.size()) os << format_g17(offdiag[i]);
      os << "\n";
    }
    return os.str();
  }
};

// Lazy entry generators of a semi-infinite Jacobi matrix, 1-indexed:
// a(n) on the diagonal, b(n) at (n, n+1).
class JacobiOperatorSpec {
 public:
  using Gen = std::function<double(long)>;

  JacobiOperatorSpec(JacobiKind kind, Gen a, Gen b, Gauge g = Gauge::Signed,
                     std::string label = "")
      : kind_(kind), gauge_(g), a_(std::move(a)), b_(std::move(b)), label_(std::move(label)) {}

  JacobiKind kind() const { return kind_; }
  Gauge gauge() const { return gauge_; }
  const std::string& label() const { return label_; }

  double diag(long n) const { return a_(n); }
  double offdiag(long n) const {
    double b = b_(n);
    return gauge_ == Gauge::PositiveOffdiag ? std::abs(b) : b;
  }

  JacobiOperatorSpec in_gauge(Gauge g) const {
    JacobiOperatorSpec c = *this;
    c.gauge_ = g;
    return c;
  }

  // Leading N x N section in this spec's own gauge.
  TridiagonalMatrix section(long N) const {
    if (N < 1) throw DomainError("section size must be >= 1");
    TridiagonalMatrix t;
    t.diag.resize(static_cast<std::size_t>(N));
    t.offdiag.resize(static_cast<std::size_t>(N - 1));
    for (long n = 1; n <= N; ++n) t.diag[n - 1] = diag(n);
    for (long n = 1; n < N; ++n) t.offdiag[n - 1] = offdiag(n);
    return t;
  }

 private:
  JacobiKind kind_;
  Gauge gauge_;
  Gen a_, b_;
  std::string label_;
};

// Leading N x N section in the positive off-diagonal gauge.
inline TridiagonalMatrix truncate(const JacobiOperatorSpec& J, long N) {
  return J.in_gauge(Gauge::PositiveOffdiag).section(N);
}

// Sign vector s with diag(s) * J * diag(s) = positive gauge.
inline std::vector<double> gauge_signs(const JacobiOperatorSpec& J, long N) {
  std::vector<double> s(static_cast<std::size_t>(N), 1.0);
  for (long n = 1; n < N; ++n) {
    double b = J.in_gauge(Gauge::Signed).offdiag(n);
    s[n] = b < 0 ? -s[n - 1] : s[n - 1];
  }
  return s;
}

namespace detail {

inline void require_positive_gaps(const Partition& X, long upto) {
  for (long n = 1; n <= upto; ++n)
    if (!(X.d(n) > 0)) throw DomainError("nonpositive gap d_" + std::to_string(n));
}

inline void require_nonzero(const Seq& s, const char* name, long upto) {
  for (long n = 1; n <= upto; ++n)
    if (s(n) == 0.0)
      throw DomainError(std::string(name) + "_" + std::to_string(n) + " = 0 is not allowed");
}

}  // namespace detail

// a(n) = 0, b(n) = 1; eigenvalues of the N x N section are 2 cos(k pi/(N+1)).
inline JacobiOperatorSpec build_free() {
  return JacobiOperatorSpec(JacobiKind::Free, [](long) { return 0.0; }, [](long) { return 1.0; },
                            Gauge::Signed, "free Jacobi matrix");
}

// a(n) = r_n^-2 (alpha_n + 1/d_n + 1/d_{n+1}),  b(n) = -(r_n r_{n+1} d_{n+1})^-1
inline JacobiOperatorSpec build_delta_B2(const Partition& X, const Seq& alpha,
                                         Gauge g = Gauge::Signed) {
  detail::require_positive_gaps(X, 64);
  Seq d = X.d();
  Seq inv = reciprocal(d);
  auto a = [d, inv, alpha](long n) {
    return (alpha(n) + inv(n) + inv(n + 1)) / (d(n) + d(n + 1));
  };
  auto b = [d](long n) {
    const double r1 = std::sqrt(d(n) + d(n + 1));
    const double r2 = std::sqrt(d(n + 1) + d(n + 2));
    return -1.0 / (r1 * r2 * d(n + 1));
  };
  return JacobiOperatorSpec(JacobiKind::DeltaB2, a, b, g, "delta, second parametrization");
}

// Interleaved pattern: diag (0, -d1^-2, alpha_1/d_2, -d2^-2, alpha_2/d_3, ...),
// offdiag (-d1^-2, d1^-3/2 d2^-1/2, -d2^-2, d2^-3/2 d3^-1/2, ...).
inline JacobiOperatorSpec build_delta_B1(const Partition& X, const Seq& alpha,
                                         Gauge g = Gauge::Signed) {
  detail::require_positive_gaps(X, 64);
  Seq d = X.d();
  auto a = [d, alpha](long n) {
    const long k = (n + 1) / 2;
    if (n % 2 == 0) return -1.0 / (d(k) * d(k));
    if (k == 1) return 0.0;
    return alpha(k - 1) / d(k);
  };
  auto b = [d](long n) {
    const long k = (n + 1) / 2;
    if (n % 2 == 1) return -1.0 / (d(k) * d(k));
    return 1.0 / (std::pow(d(k), 1.5) * std::sqrt(d(k + 1)));
  };
  return JacobiOperatorSpec(JacobiKind::DeltaB1, a, b, g, "delta, first parametrization");
}

// diag (d1^-2, 1/(d1 b1) + d1^-2, 1/(d2 b1) + d2^-2, 1/(d2 b2) + d2^-2, ...),
// offdiag (d1^-2, (d1 d2)^-1/2 / b1, d2^-2, (d2 d3)^-1/2 / b2, ...).
inline JacobiOperatorSpec build_deltaprime_B1(const Partition& X, const Seq& beta,
                                              Gauge g = Gauge::Signed) {
  detail::require_positive_gaps(X, 64);
  detail::require_nonzero(beta, "beta", 64);
  Seq d = X.d();
  auto a = [d, beta](long n) {
    const long k = (n + 1) / 2;
    const double dk = d(k);
    if (n % 2 == 0) return 1.0 / (dk * beta(k)) + 1.0 / (dk * dk);
    if (k == 1) return 1.0 / (dk * dk);
    return 1.0 / (dk * beta(k - 1)) + 1.0 / (dk * dk);
  };
  auto b = [d, beta](long n) {
    const long k = (n + 1) / 2;
    if (n % 2 == 1) return 1.0 / (d(k) * d(k));
    return 1.0 / (std::sqrt(d(k) * d(k + 1)) * beta(k));
  };
  return JacobiOperatorSpec(JacobiKind::DeltaPrimeB1, a, b, g, "delta-prime, first parametrization");
}

// diag (0, -(b1 + d1) d1^-3, 0, -(b2 + d2) d2^-3, ...),
// offdiag (-d1^-2, d1^-3/2 d2^-1/2, -d2^-2, ...).
inline JacobiOperatorSpec build_deltaprime_B2(const Partition& X, const Seq& beta,
                                              Gauge g = Gauge::Signed) {
  detail::require_positive_gaps(X, 64);
  Seq d = X.d();
  auto a = [d, beta](long n) {
    if (n % 2 == 1) return 0.0;
    const long k = n / 2;
    const double dk = d(k);
    return -(beta(k) + dk) / (dk * dk * dk);
  };
  auto b = [d](long n) {
    const long k = (n + 1) / 2;
    if (n % 2 == 1) return -1.0 / (d(k) * d(k));
    return 1.0 / (std::pow(d(k), 1.5) * std::sqrt(d(k + 1)));
  };
  return JacobiOperatorSpec(JacobiKind::DeltaPrimeB2, a, b, g,
                            "delta-prime, second parametrization");
}

// Which factored identity factorization_residual checks.
enum class Factorization { DeltaB1, DeltaB2, DeltaPrimeB1, DeltaPrimeB2Blocks };

namespace detail {

inline Eigen::MatrixXd shift_plus_identity(Eigen::Index n) {
  // I + U with U e_k = e_{k+1}
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  return m;
}

inline double interior_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index k = a.rows() - 1;
  return (a.topLeftCorner(k, k) - b.topLeftCorner(k, k)).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline Eigen::MatrixXd factored_form(Factorization f, const Partition& X, const Seq& s, long N) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index n = N;
  switch (f) {
    case Factorization::DeltaB2: {
      // R^-1 (B_X + diag alpha) R^-1, R = diag(r_n)
      MatrixXd B = MatrixXd::Zero(n, n);
      VectorXd rinv(n);
      for (long k = 1; k <= N; ++k) {
        B(k - 1, k - 1) = 1.0 / X.d(k) + 1.0 / X.d(k + 1) + s(k);
        if (k < N) B(k - 1, k) = B(k, k - 1) = -1.0 / X.d(k + 1);
        rinv(k - 1) = 1.0 / X.r(k);
      }
      return rinv.asDiagonal() * B * rinv.asDiagonal();
    }
    case Factorization::DeltaB1: {
      // R^-1 (Btilde_alpha - Q) R^-1, R_k = diag(d_k^1/2, d_k^3/2), Q_k = [[0,1],[1,d_k]]
      MatrixXd Bt = MatrixXd::Zero(n, n), Q = MatrixXd::Zero(n, n);
      VectorXd rinv(n);
      for (long i = 1; i <= N; ++i) {
        const long k = (i + 1) / 2;
        rinv(i - 1) = (i % 2) ? 1.0 / std::sqrt(X.d(k)) : 1.0 / std::pow(X.d(k), 1.5);
        if (i % 2 == 1 && i >= 3) Bt(i - 1, i - 1) = s(k - 1);
        if (i % 2 == 0 && i < N) Bt(i - 1, i) = Bt(i, i - 1) = 1.0;
        if (i % 2 == 1 && i < N) Q(i - 1, i) = Q(i, i - 1) = 1.0;
        if (i % 2 == 0) Q(i - 1, i - 1) = X.d(k);
      }
      return rinv.asDiagonal() * (Bt - Q) * rinv.asDiagonal();
    }
    case Factorization::DeltaPrimeB1: {
      // R^-1 (I+U) D^-1 (I+U*) R^-1, R = diag(sqrt d_k) doubled, D = diag(d1, b1, d2, b2, ...)
      VectorXd rinv(n), dinv(n);
      for (long i = 1; i <= N; ++i) {
        const long k = (i + 1) / 2;
        rinv(i - 1) = 1.0 / std::sqrt(X.d(k));
        dinv(i - 1) = (i % 2) ? 1.0 / X.d(k) : 1.0 / s(k);
      }
      MatrixXd IU = detail::shift_plus_identity(n);
      return rinv.asDiagonal() * IU * dinv.asDiagonal() * IU.transpose() * rinv.asDiagonal();
    }
    case Factorization::DeltaPrimeB2Blocks: {
      // V B' V^-1 = diag(D^-1/2, D^-3/2) [[0, I+U], [I+U*, -(B+D)]] diag(D^-1/2, D^-3/2)
      if (N % 2) throw DomainError("block form needs an even section size");
      const Eigen::Index K = n / 2;
      MatrixXd core = MatrixXd::Zero(n, n);
      MatrixXd IU = detail::shift_plus_identity(K);
      core.topRightCorner(K, K) = IU;
      core.bottomLeftCorner(K, K) = IU.transpose();
      VectorXd w(n);
      for (long k = 1; k <= K; ++k) {
        core(K + k - 1, K + k - 1) = -(s(k) + X.d(k));
        w(k - 1) = 1.0 / std::sqrt(X.d(k));
        w(K + k - 1) = 1.0 / std::pow(X.d(k), 1.5);
      }
      return w.asDiagonal() * core * w.asDiagonal();
    }
  }
  return {};
}

// Odd indices first, then even: the reindexing used for the delta-prime block form.
inline Eigen::MatrixXd odd_even_permuted(const TridiagonalMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd m = t.dense();
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; i += 2) order.push_back(i);
  for (Eigen::Index i = 1; i < n; i += 2) order.push_back(i);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = m(order[i], order[j]);
  return p;
}

// Max entrywise difference between the direct build and the factored product,
// last row and column excluded.
inline double factorization_residual(Factorization f, const Partition& X, const Seq& strengths,
                                     long N) {
  if (N < 2) throw DomainError("factorization residual needs N >= 2");
  Eigen::MatrixXd direct;
  switch (f) {
    case Factorization::DeltaB2:
      direct = build_delta_B2(X, strengths).section(N).dense();
      break;
    case Factorization::DeltaB1:
      direct = build_delta_B1(X, strengths).section(N).dense();
      break;
    case Factorization::DeltaPrimeB1:
      direct = build_deltaprime_B1(X, strengths).section(N).dense();
      break;
    case Factorization::DeltaPrimeB2Blocks:
      direct = odd_even_permuted(truncate(build_deltaprime_B2(X, strengths), N));
      // the permuted cut is exact, so compare every entry
      return (direct - factored_form(f, X, strengths, N)).cwiseAbs().maxCoeff();
  }
  return detail::interior_residual(direct, factored_form(f, X, strengths, N));
}

}  // namespace pointspec

#endif
