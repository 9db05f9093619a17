#ifndef POINTSPEC_SPECTRAL_HPP
#define POINTSPEC_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "jacobi.hpp"

namespace pointspec {

struct CountResult {
  long count = 0;
  bool shifted = false;  // lambda hit a pivot exactly and was nudged down
};

// Number of eigenvalues strictly below lambda (LDL^T inertia).
inline CountResult sturm_count(const TridiagonalMatrix& t, double lambda) {
  CountResult r;
  const std::size_t n = t.size();
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i ? t.offdiag[i - 1] * t.offdiag[i - 1] : 0.0;
    q = t.diag[i] - lambda - (i ? b2 / q : 0.0);
    if (q == 0.0) {
      q = -std::numeric_limits<double>::epsilon() *
          std::max({1.0, std::abs(lambda), std::abs(t.diag[i])});
      r.shifted = true;
    }
    if (q < 0.0) ++r.count;
  }
  return r;
}

inline long counting_function(const TridiagonalMatrix& t, double lambda) {
  return sturm_count(t, lambda).count;
}

inline std::pair<double, double> gershgorin(const TridiagonalMatrix& t) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

inline double default_tolerance(const TridiagonalMatrix& t) {
  return 1e-10 * std::max(1.0, t.norm_inf());
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
inline double kth_eigenvalue(const TridiagonalMatrix& t, long k, double lo, double hi, double tol) {
  // invariant: count(lo) <= k < count(hi)
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (counting_function(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// All eigenvalues in [lo, hi), sorted. tol <= 0 selects the default.
inline std::vector<double> eig_bisect(const TridiagonalMatrix& t, double lo, double hi,
                                      double tol = 0.0, unsigned jobs = 1) {
  if (t.size() == 0) return {};
  if (!(std::isfinite(lo) && std::isfinite(hi)) || lo >= hi)
    throw DomainError("eigenvalue window must be finite and nonempty");
  if (tol <= 0.0) tol = default_tolerance(t);
  auto [glo, ghi] = gershgorin(t);
  const double a = std::max(lo, glo - tol), b = std::min(hi, ghi + tol);
  if (a >= b) return {};
  const long k0 = counting_function(t, a), k1 = counting_function(t, b);
  std::vector<double> out(static_cast<std::size_t>(std::max(0L, k1 - k0)));
  auto work = [&](long from, long to) {
    for (long k = from; k < to; ++k) out[k - k0] = kth_eigenvalue(t, k, a, b, tol);
  };
  const long total = k1 - k0;
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max(1L, total))));
  if (jobs == 1) {
    work(k0, k1);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (total + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const long from = k0 + j * chunk, to = std::min(k1, from + chunk);
      if (from < to) pool.emplace_back(work, from, to);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

inline std::vector<double> all_eigenvalues(const TridiagonalMatrix& t, double tol = 0.0,
                                           unsigned jobs = 1) {
  if (t.size() == 0) return {};
  auto [glo, ghi] = gershgorin(t);
  const double pad = 1.0 + 1e-9 * std::max(std::abs(glo), std::abs(ghi));
  return eig_bisect(t, glo - pad, ghi + pad, tol, jobs);
}

inline double lambda_min(const TridiagonalMatrix& t, double tol = 0.0) {
  if (tol <= 0.0) tol = default_tolerance(t);
  auto [glo, ghi] = gershgorin(t);
  return kth_eigenvalue(t, 0, glo - tol - 1.0, ghi + tol + 1.0, tol);
}

struct SpectralSummary {
  std::vector<double> eigenvalues;
  double window_lo = 0.0, window_hi = 0.0;
  std::map<double, long> count_at;
  std::vector<std::pair<long, double>> lambda_min_trace;
  bool trace_nonincreasing = true;
  double tolerance = 0.0;

  std::string trace_csv() const {
    std::string s = "N,lambda_min\n";
    for (auto& [n, l] : lambda_min_trace) s += std::to_string(n) + "," + format_g17(l) + "\n";
    return s;
  }
  std::string eigenvalues_csv() const {
    std::string s = "k,eigenvalue\n";
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
      s += std::to_string(k + 1) + "," + format_g17(eigenvalues[k]) + "\n";
    return s;
  }
};

inline SpectralSummary spectrum_window(const TridiagonalMatrix& t, double lo, double hi,
                                       double tol = 0.0, unsigned jobs = 1) {
  SpectralSummary s;
  s.tolerance = tol > 0 ? tol : default_tolerance(t);
  s.window_lo = lo;
  s.window_hi = hi;
  s.eigenvalues = eig_bisect(t, lo, hi, s.tolerance, jobs);
  s.count_at[lo] = counting_function(t, lo);
  s.count_at[hi] = counting_function(t, hi);
  return s;
}

// lambda_min of the leading sections; by the variational principle the trace is nonincreasing.
inline SpectralSummary lambda_min_trace(const JacobiOperatorSpec& J, const std::vector<long>& sizes,
                                        double tol = 0.0) {
  SpectralSummary s;
  long nmax = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  if (nmax < 1) return s;
  TridiagonalMatrix full = truncate(J, nmax);
  s.tolerance = tol > 0 ? tol : default_tolerance(full);
  std::vector<long> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  double prev = std::numeric_limits<double>::infinity();
  for (long n : sorted) {
    TridiagonalMatrix t = full.leading(static_cast<std::size_t>(n));
    double l = lambda_min(t, s.tolerance);
    s.lambda_min_trace.emplace_back(n, l);
    if (l > prev + 2 * s.tolerance) s.trace_nonincreasing = false;
    prev = std::min(prev, l);
  }
  return s;
}

// ---- growth of formal solutions ------------------------------------------------------

enum class Growth { SquareSummable, Polynomial, Exponential, Indeterminate };

inline const char* to_string(Growth g) {
  switch (g) {
    case Growth::SquareSummable: return "SquareSummable";
    case Growth::Polynomial: return "Polynomial";
    case Growth::Exponential: return "Exponential";
    case Growth::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct GrowthClass {
  Growth classification = Growth::Indeterminate;
  double parameter = 0.0;  // power of partial-norm growth, or exponential rate per index
  std::vector<std::pair<long, double>> log_partial_norms;  // (N, log sum_{k<=N} |u_k|^2)
  std::vector<double> increment_ratios;
  long reached = 0;  // last index computed before the recurrence stopped
  std::string note;
};

struct SolutionStart {
  std::complex<double> u1{1.0, 0.0};
  std::complex<double> u2{0.0, 0.0};
  // First-kind start: u2 follows from the first row, u2 is ignored.
  bool first_kind = true;
};

struct DeficiencyProbeSettings {
  double ratio_square_summable = 0.8;
  double ratio_growth = 0.95;
  int persistent = 3;  // trailing checkpoints that must agree
  long keep_values = 0;  // store the first k raw (unscaled) solution values
};

struct DeficiencyProbeResult {
  GrowthClass first, second;
  std::vector<std::complex<double>> first_values, second_values;
  bool both_square_summable() const {
    return first.classification == Growth::SquareSummable &&
           second.classification == Growth::SquareSummable;
  }
  bool some_not_square_summable() const {
    auto grows = [](const GrowthClass& g) {
      return g.classification == Growth::Polynomial || g.classification == Growth::Exponential;
    };
    return grows(first) || grows(second);
  }
};

namespace detail {

inline double log_add(double la, double lb) {
  if (la == -INFINITY) return lb;
  if (lb == -INFINITY) return la;
  double m = std::max(la, lb);
  return m + std::log(std::exp(la - m) + std::exp(lb - m));
}

// log(exp(la) - exp(lb)), la > lb
inline double log_sub(double la, double lb) {
  if (lb == -INFINITY) return la;
  double d = lb - la;
  if (d >= 0) return -INFINITY;
  return la + std::log1p(-std::exp(d));
}

inline GrowthClass classify_growth(std::vector<std::pair<long, double>> lognorms,
                                   const DeficiencyProbeSettings& cfg, long reached,
                                   std::string note) {
  GrowthClass g;
  g.log_partial_norms = std::move(lognorms);
  g.reached = reached;
  g.note = std::move(note);
  const auto& L = g.log_partial_norms;
  std::vector<double> loginc;
  // increments per unit of log N, so a short final block compares with the doubling blocks
  for (std::size_t k = 1; k < L.size(); ++k)
    loginc.push_back(log_sub(L[k].second, L[k - 1].second) -
                     std::log(std::log(static_cast<double>(L[k].first) / L[k - 1].first)));
  std::vector<double> logratio;
  for (std::size_t k = 1; k < loginc.size(); ++k) {
    // a vanished increment counts as ratio 0
    double r = std::isinf(loginc[k]) ? -INFINITY : loginc[k] - loginc[k - 1];
    logratio.push_back(r);
    g.increment_ratios.push_back(std::exp(r));
  }
  const int need = cfg.persistent;
  if (static_cast<int>(logratio.size()) < need) {
    g.note += (g.note.empty() ? "" : "; ") + std::string("too few checkpoints");
    return g;
  }
  const std::size_t m = logratio.size();
  bool all_small = true, all_large = true;
  for (std::size_t k = m - need; k < m; ++k) {
    if (!(logratio[k] < std::log(cfg.ratio_square_summable))) all_small = false;
    if (!(logratio[k] >= std::log(cfg.ratio_growth))) all_large = false;
  }
  // increments that vanished entirely count as summable
  bool tail_zero = std::isinf(loginc.back()) && loginc.back() < 0;
  if (all_small || tail_zero) {
    g.classification = Growth::SquareSummable;
    return g;
  }
  if (all_large) {
    // geometric checkpoints: polynomial growth gives a steady log-ratio,
    // exponential growth roughly doubles it at every step
    const double r1 = logratio[m - 2], r2 = logratio[m - 1];
    if (r2 > 1.0 && r1 > 0.5 && r2 > 1.6 * r1) {
      g.classification = Growth::Exponential;
      // |u_n| ~ e^{cn}: the log-ratio of successive increments is about 2c times the span
      const double span = static_cast<double>(L[L.size() - 1].first - L[L.size() - 2].first);
      g.parameter = r2 / (2.0 * span);
    } else {
      g.classification = Growth::Polynomial;
      g.parameter = r2 / std::log(2.0);
    }
  }
  return g;
}

}  // namespace detail

// Runs the three-term recurrence b_{n-1}u_{n-1} + a_n u_n + b_n u_{n+1} = z u_n for two
// solutions and classifies sum |u_k|^2 at checkpoints 2^k. Entries are used in J's own gauge.
inline DeficiencyProbeResult deficiency_probe(const JacobiOperatorSpec& J, std::complex<double> z,
                                              long n_max, SolutionStart s1 = {},
                                              SolutionStart s2 = {{0.0, 0.0}, {1.0, 0.0}, false},
                                              const DeficiencyProbeSettings& cfg = {}) {
  DeficiencyProbeResult res;
  auto run = [&](SolutionStart st, GrowthClass& out, std::vector<std::complex<double>>& keep) {
    using C = std::complex<double>;
    C prev = st.u1;
    C cur;
    const double a1 = J.diag(1), b1 = J.offdiag(1);
    if (st.first_kind)
      cur = (z - a1) * st.u1 / b1;
    else
      cur = st.u2;
    double log_scale = 0.0;  // true value = stored * exp(log_scale)
    double S = std::norm(prev);
    std::vector<std::pair<long, double>> lognorms;
    long next_cp = 2;
    std::string note;
    long reached = 1;
    auto logS = [&] { return S > 0 ? std::log(S) + 2.0 * log_scale : -INFINITY; };
    if (cfg.keep_values > 0) keep.push_back(prev);
    // cur holds u_n for n = 2
    for (long n = 2; n <= n_max; ++n) {
      if (!(std::isfinite(cur.real()) && std::isfinite(cur.imag()))) {
        note = "recurrence left floating range at n = " + std::to_string(n);
        break;
      }
      S += std::norm(cur);
      reached = n;
      if (static_cast<long>(keep.size()) < cfg.keep_values) keep.push_back(cur * std::exp(log_scale));
      if (n == next_cp) {
        lognorms.emplace_back(n, logS());
        next_cp *= 2;
      }
      if (n == n_max) break;
      const double an = J.diag(n), bn = J.offdiag(n), bp = J.offdiag(n - 1);
      if (!(std::isfinite(an) && std::isfinite(bn) && std::isfinite(bp)) || bn == 0.0) {
        note = "matrix entries not finite beyond n = " + std::to_string(n);
        break;
      }
      C nxt = ((z - an) * cur - bp * prev) / bn;
      prev = cur;
      cur = nxt;
      const double mag = std::max(std::abs(prev), std::abs(cur));
      if (mag > 1e100 || (mag < 1e-100 && mag > 0)) {
        const double l = std::log(mag);
        prev /= mag;
        cur /= mag;
        S /= mag * mag;
        log_scale += l;
      }
    }
    if (lognorms.empty() || lognorms.back().first != reached) lognorms.emplace_back(reached, logS());
    out = detail::classify_growth(std::move(lognorms), cfg, reached, note);
  };
  std::thread t2([&] { run(s2, res.second, res.second_values); });
  run(s1, res.first, res.first_values);
  t2.join();
  return res;
}

// ---- Rayleigh quotient witness -----------------------------------------------------------

struct RayleighPoint {
  long N;
  double quotient;
};

// Rayleigh quotient of the M-section (M = 2N) of the second delta parametrization on
// h_n = r_n sqrt(d_n), n <= M (all ones before the R D^1/2 scaling; sign-alternating
// in the positive gauge):
//   Q = [1 + sum_{n<M} (sqrt(d_n/d_{n+1}) - 1)^2 + d_M/d_{M+1} + sum_{n<=M} alpha_n d_n]
//       / sum_{n<=M} d_n (d_n + d_{n+1})
// Sizes are block counts N.
inline std::vector<RayleighPoint> rayleigh_witness(const Partition& X, const Seq& alpha,
                                                   const std::vector<long>& sizes) {
  std::vector<long> sorted;
  for (long n : sizes) sorted.push_back(2 * n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<RayleighPoint> out;
  if (sorted.empty()) return out;
  const long nmax = sorted.back();
  auto d = X.d().values(1, nmax + 1);
  auto a = alpha.values(1, nmax);
  long double kinetic = 1.0L, potential = 0.0L, mass = 0.0L;
  std::size_t next = 0;
  for (long n = 1; n <= nmax && next < sorted.size(); ++n) {
    const long double dn = d[n - 1], dn1 = d[n];
    potential += static_cast<long double>(a[n - 1]) * dn;
    mass += dn * (dn + dn1);
    while (next < sorted.size() && sorted[next] == n) {
      const long double q = (kinetic + dn / dn1 + potential) / mass;
      out.push_back({n / 2, static_cast<double>(q)});
      ++next;
    }
    const long double t = std::sqrt(dn / dn1) - 1.0L;
    kinetic += t * t;
  }
  return out;
}

// The same vector as rayleigh_witness, for cross-checking against a truncated matrix.
inline std::vector<double> rayleigh_vector(const Partition& X, long N, Gauge g) {
  std::vector<double> h(static_cast<std::size_t>(N));
  for (long n = 1; n <= N; ++n) {
    h[n - 1] = X.r(n) * std::sqrt(X.d(n));
    if (g == Gauge::PositiveOffdiag && n % 2 == 0) h[n - 1] = -h[n - 1];
  }
  return h;
}

inline double rayleigh_quotient(const TridiagonalMatrix& t, const std::vector<double>& h) {
  long double num = 0.0L, den = 0.0L;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    long double row = static_cast<long double>(t.diag[i]) * h[i];
    if (i > 0) row += static_cast<long double>(t.offdiag[i - 1]) * h[i - 1];
    if (i + 1 < n) row += static_cast<long double>(t.offdiag[i]) * h[i + 1];
    num += row * h[i];
    den += static_cast<long double>(h[i]) * h[i];
  }
  return static_cast<double>(num / den);
}

}  // namespace pointspec

#endif
