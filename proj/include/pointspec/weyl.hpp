#ifndef POINTSPEC_WEYL_HPP
#define POINTSPEC_WEYL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "partition.hpp"
#include "potential.hpp"

namespace pointspec {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

enum class TripletKind {
  DeltaRaw,
  DeltaRegularized,
  MixedRaw,
  MixedRegularized,
  PotentialRaw,
  PotentialRegularized
};

inline const char* to_string(TripletKind k) {
  switch (k) {
    case TripletKind::DeltaRaw: return "DeltaRaw";
    case TripletKind::DeltaRegularized: return "DeltaRegularized";
    case TripletKind::MixedRaw: return "MixedRaw";
    case TripletKind::MixedRegularized: return "MixedRegularized";
    case TripletKind::PotentialRaw: return "PotentialRaw";
    case TripletKind::PotentialRegularized: return "PotentialRegularized";
  }
  return "?";
}

inline bool is_potential(TripletKind k) {
  return k == TripletKind::PotentialRaw || k == TripletKind::PotentialRegularized;
}
inline bool is_regularized(TripletKind k) {
  return k == TripletKind::DeltaRegularized || k == TripletKind::MixedRegularized ||
         k == TripletKind::PotentialRegularized;
}

struct WeylEval {
  Mat2c value;
  TripletKind kind;
  long n = 0;
  cplx z;
};

struct RegularizationData {
  Eigen::Matrix2d R;  // diagonal
  Eigen::Matrix2d Q;  // raw value at z = 0
};

// Interval index and coupling for the step potential a^2 n^2 on an interval of length 1/n.
struct PotentialIndex {
  long n;
  double a;
};

// sqrt with Im >= 0; for z > 0 the positive root.
inline cplx sqrt_upper(cplx z) {
  cplx s = std::sqrt(z);
  if (s.imag() < 0 || (s.imag() == 0 && s.real() < 0)) s = -s;
  return s;
}

namespace detail {

// Taylor coefficients in u = t^2, index k is the coefficient of u^k.
struct WeylSeries {
  static constexpr int K = 13;
  std::array<double, K> tcot{}, tcsc{}, ttan{}, sec{};
  WeylSeries() {
    // B_{2k}, k = 0..12
    const std::array<double, K> B = {1.0,           1.0 / 6,        -1.0 / 30,          1.0 / 42,
                                     -1.0 / 30,     5.0 / 66,       -691.0 / 2730,      7.0 / 6,
                                     -3617.0 / 510, 43867.0 / 798,  -174611.0 / 330,   854513.0 / 138,
                                     -236364091.0 / 2730};
    // |E_{2k}|
    const std::array<double, K> E = {1.0,
                                     1.0,
                                     5.0,
                                     61.0,
                                     1385.0,
                                     50521.0,
                                     2702765.0,
                                     199360981.0,
                                     19391512145.0,
                                     2404879675441.0,
                                     370371188237525.0,
                                     69348874393137901.0,
                                     15514534163557086905.0};
    double fact = 1.0, four = 1.0;
    for (int k = 0; k < K; ++k) {
      if (k > 0) {
        fact *= (2.0 * k - 1) * (2.0 * k);
        four *= 4.0;
      }
      const double sg = (k % 2 == 0) ? 1.0 : -1.0;
      tcot[k] = sg * four * B[k] / fact;
      tcsc[k] = -sg * (four - 2.0) * B[k] / fact;
      ttan[k] = k == 0 ? 0.0 : -sg * four * (four - 1.0) * B[k] / fact;
      sec[k] = E[k] / fact;
    }
  }
};

inline const WeylSeries& series() {
  static const WeylSeries s;
  return s;
}

constexpr double kSeriesRadius = 0.1;

template <std::size_t K>
inline cplx horner(const std::array<double, K>& c, cplx u, int from) {
  cplx acc = 0.0;
  for (int k = static_cast<int>(K) - 1; k >= from; --k) acc = acc * u + c[k];
  return acc;
}

// The functions below are even in t and are written in u = t^2.

// 1 - t cot t
inline cplx one_minus_tcot(cplx u) {
  if (std::abs(u) < kSeriesRadius) return -u * horner(series().tcot, u, 1);
  const cplx t = std::sqrt(u);
  return 1.0 - t * std::cos(t) / std::sin(t);
}
// 1 - t / sin t
inline cplx one_minus_tcsc(cplx u) {
  if (std::abs(u) < kSeriesRadius) return -u * horner(series().tcsc, u, 1);
  const cplx t = std::sqrt(u);
  return 1.0 - t / std::sin(t);
}
// t tan t
inline cplx ttan(cplx u) {
  if (std::abs(u) < kSeriesRadius) return u * horner(series().ttan, u, 1);
  const cplx t = std::sqrt(u);
  return t * std::tan(t);
}
// sec t - 1
inline cplx sec_minus_one(cplx u) {
  if (std::abs(u) < kSeriesRadius) return u * horner(series().sec, u, 1);
  return 1.0 / std::cos(std::sqrt(u)) - 1.0;
}
// tan t / t - 1
inline cplx tan_over_t_minus_one(cplx u) {
  if (std::abs(u) < kSeriesRadius) return u * horner(series().ttan, u, 2);
  const cplx t = std::sqrt(u);
  return std::tan(t) / t - 1.0;
}

constexpr double kPoleRelDist = 1e-6;

// Poles sit at z_k = shift + (c_k / d)^2 with c_k = k pi (sine) or (k - 1/2) pi (cosine).
inline void check_pole(cplx z, double d, double shift, bool cosine_zeros) {
  const double pi = std::numbers::pi;
  const double s = std::abs(z - shift) * d * d;
  const double c = std::sqrt(s) / pi + (cosine_zeros ? 0.5 : 0.0);
  for (double k : {std::floor(c), std::ceil(c)}) {
    const double ck = cosine_zeros ? (k - 0.5) * pi : k * pi;
    if (k < 1 || ck <= 0) continue;
    const double zk = shift + ck * ck / (d * d);
    if (std::abs(z - zk) < kPoleRelDist * std::abs(zk)) {
      std::ostringstream os;
      os.precision(17);
      os << "Weyl function evaluated at z = " << z << " within relative distance " << kPoleRelDist
         << " of the pole " << zk;
      throw PoleError(os.str(), zk);
    }
  }
}

inline void require_length(double d) {
  if (!(d > 0) || !std::isfinite(d)) throw DomainError("interval length must be positive and finite");
}

inline PotentialIndex require_potential(const std::optional<PotentialIndex>& p) {
  if (!p) throw DomainError("potential Weyl functions need the interval index n and the coupling a");
  if (p->n < 1 || !(p->a > 0)) throw DomainError("potential Weyl functions need n >= 1 and a > 0");
  return *p;
}

inline Mat2c sym(cplx diag1, cplx off, cplx diag2) {
  Mat2c m;
  m << diag1, off, off, diag2;
  return m;
}

}  // namespace detail

// Weyl matrix of a single interval in the unregularized triplet.
// For the potential kinds d is ignored and 1/n is used.
inline WeylEval weyl_raw(TripletKind kind, double d, cplx z,
                         std::optional<PotentialIndex> extra = std::nullopt) {
  using namespace detail;
  WeylEval out{Mat2c::Zero(), kind, extra ? extra->n : 0, z};
  switch (kind) {
    case TripletKind::DeltaRaw:
    case TripletKind::DeltaRegularized: {
      require_length(d);
      check_pole(z, d, 0.0, false);
      const cplx u = z * d * d;
      out.value = -(1.0 / d) * sym(1.0 - one_minus_tcot(u), 1.0 - one_minus_tcsc(u), 1.0 - one_minus_tcot(u));
      out.kind = TripletKind::DeltaRaw;
      break;
    }
    case TripletKind::MixedRaw:
    case TripletKind::MixedRegularized: {
      require_length(d);
      check_pole(z, d, 0.0, true);
      const cplx u = z * d * d;
      out.value = sym(ttan(u) / d, 1.0 + sec_minus_one(u), d * (1.0 + tan_over_t_minus_one(u)));
      out.kind = TripletKind::MixedRaw;
      break;
    }
    case TripletKind::PotentialRaw:
    case TripletKind::PotentialRegularized: {
      const PotentialIndex p = require_potential(extra);
      const double n = static_cast<double>(p.n);
      const double shift = p.a * p.a * n * n;
      check_pole(z, 1.0 / n, shift, false);
      const cplx u = (z - shift) / (n * n);
      out.value = -n * sym(1.0 - one_minus_tcot(u), 1.0 - one_minus_tcsc(u), 1.0 - one_minus_tcot(u));
      out.kind = TripletKind::PotentialRaw;
      break;
    }
  }
  return out;
}

inline RegularizationData regularization_data(TripletKind kind, double d,
                                              std::optional<PotentialIndex> extra = std::nullopt) {
  RegularizationData r;
  r.R.setZero();
  switch (kind) {
    case TripletKind::DeltaRaw:
    case TripletKind::DeltaRegularized:
      detail::require_length(d);
      r.R.diagonal().setConstant(std::sqrt(d));
      r.Q.setConstant(-1.0 / d);
      break;
    case TripletKind::MixedRaw:
    case TripletKind::MixedRegularized:
      detail::require_length(d);
      r.R.diagonal() << std::sqrt(d), d * std::sqrt(d);
      r.Q << 0.0, 1.0, 1.0, d;
      break;
    case TripletKind::PotentialRaw:
    case TripletKind::PotentialRegularized: {
      const PotentialIndex p = detail::require_potential(extra);
      const double n = static_cast<double>(p.n);
      const PotentialCoeffs e = potential_coeffs(p.a);
      r.R.diagonal().setConstant(1.0 / std::sqrt(n));
      r.Q << -n * static_cast<double>(e.eps1), -n * static_cast<double>(e.eps2),
          -n * static_cast<double>(e.eps2), -n * static_cast<double>(e.eps1);
      break;
    }
  }
  return r;
}

inline WeylEval regularize(const WeylEval& raw, const RegularizationData& reg) {
  const Eigen::Vector2d r = reg.R.diagonal();
  if (r(0) == 0.0 || r(1) == 0.0 || reg.R(0, 1) != 0.0 || reg.R(1, 0) != 0.0)
    throw DomainError("regularization R must be diagonal and invertible");
  WeylEval out = raw;
  const Mat2c shifted = raw.value - reg.Q.cast<cplx>();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.value(i, j) = shifted(i, j) / (r(i) * r(j));
  switch (raw.kind) {
    case TripletKind::DeltaRaw: out.kind = TripletKind::DeltaRegularized; break;
    case TripletKind::MixedRaw: out.kind = TripletKind::MixedRegularized; break;
    case TripletKind::PotentialRaw: out.kind = TripletKind::PotentialRegularized; break;
    default: break;
  }
  return out;
}

// Regularized Weyl matrix, written without the cancellation in R^-1 (M~ - Q) R^-1.
inline WeylEval weyl_regularized(TripletKind kind, double d, cplx z,
                                 std::optional<PotentialIndex> extra = std::nullopt) {
  using namespace detail;
  WeylEval out{Mat2c::Zero(), kind, extra ? extra->n : 0, z};
  switch (kind) {
    case TripletKind::DeltaRaw:
    case TripletKind::DeltaRegularized: {
      require_length(d);
      check_pole(z, d, 0.0, false);
      const cplx u = z * d * d;
      out.value = (1.0 / (d * d)) * sym(one_minus_tcot(u), one_minus_tcsc(u), one_minus_tcot(u));
      out.kind = TripletKind::DeltaRegularized;
      break;
    }
    case TripletKind::MixedRaw:
    case TripletKind::MixedRegularized: {
      require_length(d);
      check_pole(z, d, 0.0, true);
      const cplx u = z * d * d;
      out.value = (1.0 / (d * d)) * sym(ttan(u), sec_minus_one(u), tan_over_t_minus_one(u));
      out.kind = TripletKind::MixedRegularized;
      break;
    }
    case TripletKind::PotentialRaw:
    case TripletKind::PotentialRegularized: {
      const PotentialIndex p = require_potential(extra);
      const double n = static_cast<double>(p.n);
      const double shift = p.a * p.a * n * n;
      check_pole(z, 1.0 / n, shift, false);
      const cplx u = (z - shift) / (n * n);
      const cplx u0 = -static_cast<double>(p.a) * p.a;
      out.value = (n * n) * sym(one_minus_tcot(u) - one_minus_tcot(u0), one_minus_tcsc(u) - one_minus_tcsc(u0),
                                one_minus_tcot(u) - one_minus_tcot(u0));
      out.kind = TripletKind::PotentialRegularized;
      break;
    }
  }
  return out;
}

inline WeylEval weyl_eval(TripletKind kind, double d, cplx z, std::optional<PotentialIndex> extra = std::nullopt) {
  return is_regularized(kind) ? weyl_regularized(kind, d, z, extra) : weyl_raw(kind, d, z, extra);
}

// Central differences at h and h/2 combined by Richardson extrapolation.
inline Eigen::Matrix2d weyl_derivative_at_zero(TripletKind kind, double d, double h = 1e-4,
                                               std::optional<PotentialIndex> extra = std::nullopt) {
  auto D = [&](double s) {
    return ((weyl_eval(kind, d, s, extra).value - weyl_eval(kind, d, -s, extra).value) / (2.0 * s)).real().eval();
  };
  return ((4.0 * D(h / 2) - D(h)) / 3.0).eval();
}

// Closed form of the potential-triplet derivative at 0.
inline Eigen::Matrix2d potential_derivative_at_zero(long double a) {
  const PotentialCoeffs e = potential_coeffs(a);
  const long double a2 = 2.0L * a * a;
  const double dg = static_cast<double>((e.eps1 - e.eps2 * e.eps2) / a2);
  const double of = static_cast<double>((e.eps2 - e.eps1 * e.eps2) / a2);
  Eigen::Matrix2d m;
  m << dg, of, of, dg;
  return m;
}

// 2x2 matrix utilities.
inline double spectral_norm(const Mat2c& m) {
  const Eigen::Matrix2cd g = m.adjoint() * m;
  const double tr = g.trace().real();
  const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return std::sqrt(tr / 2 + disc);
}
inline double smallest_singular_value(const Mat2c& m) {
  const double s1 = spectral_norm(m);
  const double det = std::abs(m.determinant());
  return s1 > 0 ? det / s1 : 0.0;
}
inline Eigen::Matrix2d imag_part(const Mat2c& m) {
  return ((m - m.adjoint()) / cplx(0.0, 2.0)).real();
}
inline std::pair<double, double> symmetric_eigenvalues(const Eigen::Matrix2d& s) {
  const double mid = 0.5 * (s(0, 0) + s(1, 1));
  const double rad = std::hypot(0.5 * (s(0, 0) - s(1, 1)), 0.5 * (s(0, 1) + s(1, 0)));
  return {mid - rad, mid + rad};
}

struct ScanRow {
  long n;
  double norm_M;
  double norm_im_inv;  // inf when Im M is singular
  double norm_M_inv;
};

struct TripletScan {
  TripletKind kind;
  long n_max = 0;
  std::vector<ScanRow> rows;
  double sup_norm_M = 0, sup_norm_im_inv = 0, sup_norm_M_inv = 0;
  // log-log slopes over the last two decades of n
  double slope_norm_M = 0, slope_norm_im_inv = 0, slope_norm_M_inv = 0;
  bool bounded_M = false, bounded_im_inv = false, bounded_M_inv = false;
  bool ordinary = false;
  std::string verdict() const { return ordinary ? "Ordinary" : "NotOrdinary"; }
  std::string to_csv() const {
    std::string s = "n,norm_M,norm_im_inv\n";
    for (const auto& r : rows)
      s += std::to_string(r.n) + "," + format_g17(r.norm_M) + "," + format_g17(r.norm_im_inv) + "\n";
    return s;
  }
};

constexpr double kUnboundedSlope = 0.2;

namespace detail {

// Least-squares slope of log v against log n over n in [n_max/100, n_max].
inline double loglog_slope(const std::vector<ScanRow>& rows, double ScanRow::*field) {
  const long n_max = rows.back().n;
  const long n_lo = std::max<long>(1, n_max / 100);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& r : rows) {
    if (r.n < n_lo) continue;
    const double v = r.*field;
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    if (v <= 0) continue;
    const double x = std::log(static_cast<double>(r.n)), y = std::log(v);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++k;
  }
  if (k < 2) return 0.0;
  const double den = k * sxx - sx * sx;
  return den == 0 ? 0.0 : (k * sxy - sx * sy) / den;
}

}  // namespace detail

// Evaluates M_n(i) along the partition. Potential kinds use d_n = 1/n and need a.
inline TripletScan triplet_boundedness_scan(const Partition& X, TripletKind kind, long n_max,
                                            std::optional<double> a = std::nullopt, unsigned jobs = 1) {
  if (n_max < 1) throw DomainError("scan needs n_max >= 1");
  if (is_potential(kind) && !a) throw DomainError("potential scans need the coupling a");
  TripletScan out;
  out.kind = kind;
  out.n_max = n_max;
  out.rows.resize(static_cast<std::size_t>(n_max));
  const cplx I(0.0, 1.0);
  auto work = [&](long lo, long hi) {
    for (long n = lo; n < hi; ++n) {
      std::optional<PotentialIndex> extra;
      if (a) extra = PotentialIndex{n, *a};
      const double d = is_potential(kind) ? 1.0 / static_cast<double>(n) : X.d(n);
      const Mat2c M = weyl_eval(kind, d, I, extra).value;
      const double lmin = symmetric_eigenvalues(imag_part(M)).first;
      const double smin = smallest_singular_value(M);
      out.rows[static_cast<std::size_t>(n - 1)] = {
          n, spectral_norm(M), lmin > 0 ? 1.0 / lmin : std::numeric_limits<double>::infinity(),
          smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity()};
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_max)));
  if (jobs == 1) {
    work(1, n_max + 1);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (n_max + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const long lo = 1 + j * chunk, hi = std::min(n_max + 1, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& r : out.rows) {
    out.sup_norm_M = std::max(out.sup_norm_M, r.norm_M);
    out.sup_norm_im_inv = std::max(out.sup_norm_im_inv, r.norm_im_inv);
    out.sup_norm_M_inv = std::max(out.sup_norm_M_inv, r.norm_M_inv);
  }
  out.slope_norm_M = detail::loglog_slope(out.rows, &ScanRow::norm_M);
  out.slope_norm_im_inv = detail::loglog_slope(out.rows, &ScanRow::norm_im_inv);
  out.slope_norm_M_inv = detail::loglog_slope(out.rows, &ScanRow::norm_M_inv);
  out.bounded_M = out.slope_norm_M <= kUnboundedSlope;
  out.bounded_im_inv = out.slope_norm_im_inv <= kUnboundedSlope;
  out.bounded_M_inv = out.slope_norm_M_inv <= kUnboundedSlope;
  out.ordinary = out.bounded_M && out.bounded_im_inv;
  return out;
}

// F_a(x) = 1/x^2 - a coth(ax)/x and G_a(x) = 1/x^2 - a/(x sinh ax): the entries of the
// regularized delta Weyl matrix at z = -a^2 on an interval of length x.
inline double weyl_F(double a, double x) {
  const double y = a * x;
  if (y < 1e-2) {
    const double y2 = y * y;
    return a * a * (-1.0 / 3 + y2 / 45 - 2 * y2 * y2 / 945);
  }
  return 1.0 / (x * x) - a / (x * std::tanh(y));
}
inline double weyl_G(double a, double x) {
  const double y = a * x;
  if (y < 1e-2) {
    const double y2 = y * y;
    return a * a * (1.0 / 6 - 7 * y2 / 360 + 31 * y2 * y2 / 15120);
  }
  return 1.0 / (x * x) - a / (x * std::sinh(y));
}
// f(x) = F_1(x) + G_1(x) = 2/x^2 - (1 + cosh x)/(x sinh x)
inline double weyl_f(double x) { return weyl_F(1.0, x) + weyl_G(1.0, x); }

struct SemiboundedEstimate {
  double a = 0;
  double d_upper = 0;
  long sampled = 0;
  double max_eigenvalue = -std::numeric_limits<double>::infinity();
  long argmax_n = 0;
  bool precondition = false;  // a >= 2 / d^*
  double claimed_bound = 0;   // -a/d^*
  double claimed_margin = 0;  // claimed_bound - max_eigenvalue
  double corrected_bound = 0; // -a/d^* + 2/d^*^2
  double corrected_margin = 0;
  bool claimed_holds() const { return claimed_margin >= 0; }
  bool corrected_holds() const { return corrected_margin >= 0; }
};

// Largest eigenvalue of M_n(-a^2) over n <= n_max for the regularized delta triplet,
// compared with -a/d^* and with -a/d^* + 2/d^*^2.
inline SemiboundedEstimate semibounded_estimate(const Partition& X, double a, long n_max = 10000,
                                                const ProbeSettings& cfg = {}) {
  if (!(a > 0)) throw DomainError("semibounded estimate needs a > 0");
  SemiboundedEstimate s;
  s.a = a;
  const ProbeResult up = X.d_upper(cfg);
  if (up.kind != ProbeKind::LimitIs || !std::isfinite(up.value))
    throw DomainError("semibounded estimate needs d^* < infinity");
  s.d_upper = up.value;
  s.sampled = n_max;
  for (long n = 1; n <= n_max; ++n) {
    const double d = X.d(n);
    const double F = weyl_F(a, d), G = weyl_G(a, d);
    const double top = std::max(F + G, F - G);
    if (top > s.max_eigenvalue) {
      s.max_eigenvalue = top;
      s.argmax_n = n;
    }
  }
  const double ds = s.d_upper;
  s.precondition = a >= 2.0 / ds;
  s.claimed_bound = -a / ds;
  s.claimed_margin = s.claimed_bound - s.max_eigenvalue;
  s.corrected_bound = -a / ds + 2.0 / (ds * ds);
  s.corrected_margin = s.corrected_bound - s.max_eigenvalue;
  return s;
}

}  // namespace pointspec

#endif
