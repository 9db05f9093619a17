#ifndef POINTSPEC_POTENTIAL_HPP
#define POINTSPEC_POTENTIAL_HPP

#include <cmath>

#include "jacobi.hpp"

namespace pointspec {

// Step potential q = a^2 n^2 on (x_{n-1}, x_n) with d_n = 1/n.
struct PotentialCoeffs {
  long double eps1;  // a cosh a / sinh a
  long double eps2;  // a / sinh a
};

inline PotentialCoeffs potential_coeffs(long double a) {
  if (!(a > 0)) throw DomainError("potential parameter a must be positive");
  if (a < 1e-4L) {
    const long double a2 = a * a;
    return {1.0L + a2 / 3.0L - a2 * a2 / 45.0L, 1.0L - a2 / 6.0L + 7.0L * a2 * a2 / 360.0L};
  }
  const long double s = std::sinh(a);
  return {a * std::cosh(a) / s, a / s};
}

// Root of eps1(a) = 2; eps1 increases from 1 at 0+.
inline long double solve_a0(long double tol = 0.0L) {
  long double lo = 1.0L, hi = 3.0L;
  while (hi - lo > tol) {
    const long double mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (potential_coeffs(mid).eps1 < 2.0L)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5L * (lo + hi);
}

enum class PotentialOffdiag {
  NextIndex,  // (n+1) eps2
  SameIndex   // n eps2
};

// r~_n^-1 (B_X(a) + diag alpha) r~_n^-1 with r~_n = sqrt(1/n + 1/(n+1)),
// B_X(a) = tridiag((2n+1) eps1, (n+1) eps2).
inline JacobiOperatorSpec build_potential_B(const Seq& alpha, long double a,
                                            PotentialOffdiag conv = PotentialOffdiag::NextIndex) {
  const PotentialCoeffs e = potential_coeffs(a);
  auto rt2 = [](long n) {
    const long double x = static_cast<long double>(n);
    return 1.0L / x + 1.0L / (x + 1.0L);
  };
  auto diag = [e, alpha, rt2](long n) {
    const long double v =
        (static_cast<long double>(2 * n + 1) * e.eps1 + static_cast<long double>(alpha(n))) / rt2(n);
    return static_cast<double>(v);
  };
  auto off = [e, rt2, conv](long n) {
    const long double k = conv == PotentialOffdiag::NextIndex ? n + 1 : n;
    return static_cast<double>(k * e.eps2 / std::sqrt(rt2(n) * rt2(n + 1)));
  };
  return JacobiOperatorSpec(JacobiKind::DeltaPotential, diag, off, Gauge::Signed,
                            "delta with step potential");
}

}  // namespace pointspec

#endif
