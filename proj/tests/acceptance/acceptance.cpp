// Runs the nine acceptance checks; prints one PASS/FAIL line each and exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pointspec/golden.hpp"
#include "pointspec/pointspec.hpp"

using namespace pointspec;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

const Seq n_seq = power_seq(1.0, 1.0);
Partition inv_n() { return Partition::from_gaps(power_seq(1.0, -1.0)); }
Partition points(double e) { return Partition::from_points(power_seq(1.0, e)); }

Result golden_suite() {
  Timer t;
  Result r;
  int cases = 0, bad = 0;
  for (const auto& id : golden::ids()) {
    const auto ex = golden::reproduce(id);
    for (const auto& c : ex.cases) {
      ++cases;
      if (!c.ok()) {
        ++bad;
        r.detail += " [" + id + ": " + c.label + "]";
      }
    }
  }
  const double s = t.seconds();
  r.pass = bad == 0 && s < 60.0;
  r.detail = std::to_string(cases - bad) + "/" + std::to_string(cases) + " cases match in " + fmt(s) + " s" + r.detail;
  return r;
}

Result factorizations() {
  Result r;
  double worst = 0.0;
  const long N = 50;
  const std::vector<std::pair<Partition, Seq>> delta = {
      {inv_n(), -2.0 * n_seq - 1.0},
      {inv_n(), power_seq(1.0, -1.0)},
      {points(0.5), power_seq(-1.0, -0.25)},
      {Partition::from_gaps(constant(1.0)), constant(2.0)},
      {Partition::from_gaps(power_seq(1.0, -0.5)), power_seq(3.0, 0.5)},
  };
  for (const auto& [X, a] : delta) {
    worst = std::max(worst, factorization_residual(Factorization::DeltaB2, X, a, N));
    worst = std::max(worst, factorization_residual(Factorization::DeltaB1, X, a, N));
  }
  const std::vector<std::pair<Partition, Seq>> prime = {
      {points(0.5), constant(1.0)},
      {points(1.0 / 3.0), power_seq(2.0, -1.0)},
      {inv_n(), constant(0.5)},
      {Partition::from_gaps(constant(1.0)), power_seq(1.0, 1.0)},
      {points(0.75), power_seq(0.5, 0.5)},
  };
  for (const auto& [X, b] : prime) {
    worst = std::max(worst, factorization_residual(Factorization::DeltaPrimeB1, X, b, N));
    worst = std::max(worst, string_factorization_residual(string_from_deltaprime(X, b), N));
  }
  r.pass = worst < 1e-12;
  r.detail = "max residual " + fmt(worst) + " over 20 identity checks at N = 50";
  return r;
}

Result eigensolver() {
  Result r;
  double err = 0.0;
  for (long N : {3L, 10L, 100L}) {
    const auto ev = all_eigenvalues(truncate(build_free(), N), 1e-13);
    for (long k = 1; k <= N; ++k)
      err = std::max(err, std::abs(ev[k - 1] - 2.0 * std::cos((N + 1 - k) * std::numbers::pi / (N + 1))));
  }
  const Partition X = points(1.0 / 3.0);
  std::vector<JacobiOperatorSpec> mats = {
      build_free(),
      build_delta_B1(inv_n(), -4.0 * n_seq - 3.0),
      build_delta_B2(inv_n(), -4.0 * n_seq - 3.0),
      build_deltaprime_B1(X, constant(1.0)),
      build_deltaprime_B2(X, constant(1.0)),
      build_J_ml(string_from_deltaprime(X, constant(1.0))),
      build_potential_B(-4.0 * n_seq - 2.0, solve_a0()),
  };
  long violations = 0, count_bad = 0;
  for (const auto& J : mats) {
    std::vector<double> prev;
    for (long N = 1; N <= 50; ++N) {
      const TridiagonalMatrix t = truncate(J, N);
      const auto ev = all_eigenvalues(t);
      const double tol = 1e-9 * (1.0 + std::abs(ev.front()) + std::abs(ev.back()));
      for (std::size_t k = 0; k < prev.size(); ++k)
        if (ev[k] > prev[k] + tol || prev[k] > ev[k + 1] + tol) ++violations;
      prev = ev;
      // window edges halfway between neighbouring eigenvalues
      const std::size_t mid = ev.size() / 2;
      const double lo = ev.front() - 1.0;
      const double hi = mid + 1 < ev.size() ? 0.5 * (ev[mid] + ev[mid + 1]) : ev.back() + 1.0;
      long inside = 0;
      for (double l : ev) inside += l >= lo && l < hi;
      if (counting_function(t, hi) - counting_function(t, lo) != inside) ++count_bad;
    }
  }
  r.pass = err < 1e-10 && violations == 0 && count_bad == 0;
  r.detail = "free max error " + fmt(err) + ", interlacing violations " + std::to_string(violations) +
             ", counting mismatches " + std::to_string(count_bad);
  return r;
}

Result weyl_constants() {
  Result r;
  Eigen::Matrix2d dref, mref;
  dref << 1.0 / 3, -1.0 / 6, -1.0 / 6, 1.0 / 3;
  mref << 1.0, 0.5, 0.5, 1.0 / 3;
  double m0 = 0.0, der = 0.0;
  for (double d : {1.0, 0.1, 1e-3}) {
    m0 = std::max(m0, weyl_eval(TripletKind::DeltaRegularized, d, 0.0).value.cwiseAbs().maxCoeff());
    m0 = std::max(m0, weyl_eval(TripletKind::MixedRegularized, d, 0.0).value.cwiseAbs().maxCoeff());
    der = std::max(der, (weyl_derivative_at_zero(TripletKind::DeltaRegularized, d) - dref).cwiseAbs().maxCoeff());
    der = std::max(der, (weyl_derivative_at_zero(TripletKind::MixedRegularized, d) - mref).cwiseAbs().maxCoeff());
  }
  r.pass = m0 < 1e-10 && der < 1e-6;
  r.detail = "max |M(0)| " + fmt(m0) + ", max M'(0) error " + fmt(der);
  return r;
}

Result triplet_scans() {
  Timer t;
  Result r;
  const Partition X = inv_n();
  const auto reg = triplet_boundedness_scan(X, TripletKind::DeltaRegularized, 10000, std::nullopt, 4);
  const auto raw = triplet_boundedness_scan(X, TripletKind::DeltaRaw, 10000, std::nullopt, 4);
  const auto mixed = triplet_boundedness_scan(X, TripletKind::MixedRaw, 10000, std::nullopt, 4);
  const double plateau = reg.rows.back().norm_im_inv;
  const double s = t.seconds();
  r.pass = reg.bounded_M && reg.bounded_im_inv && std::abs(plateau - 6.0) <= 0.6 &&
           std::abs(raw.slope_norm_M - 1.0) <= 0.1 && !mixed.bounded_im_inv && s < 30.0;
  r.detail = "regularized plateau " + fmt(plateau) + " (" + reg.verdict() + "), raw slope " + fmt(raw.slope_norm_M) +
             ", mixed raw Im^-1 slope " + fmt(mixed.slope_norm_im_inv) + ", " + fmt(s) + " s";
  return r;
}

Result deficiency_probes() {
  Result r;
  const Partition X = Partition::from_gaps(Seq(SequenceSpec::geometric(1.0, 0.5)));
  const auto J = build_deltaprime_B1(X, -1.0 * X.d());
  auto p = [&](long k) { return (k % 2 ? 1.0 : -1.0) * std::sqrt(X.d((k + 1) / 2)); };
  auto q = [&](long k) { return k % 2 ? 0.0 : std::pow(X.d((k + 1) / 2), 1.5); };
  DeficiencyProbeSettings ds;
  ds.keep_values = 40;
  const auto a = deficiency_probe(J, 0.0, 100000, {p(1), p(2), false}, {q(1), q(2), false}, ds);
  double err = 0.0;
  for (long k = 1; k <= ds.keep_values; ++k) {
    err = std::max(err, std::abs(a.first_values[k - 1] - p(k)) / std::abs(p(k)));
    err = std::max(err, std::abs(a.second_values[k - 1] - q(k)) / (q(k) == 0.0 ? 1.0 : std::abs(q(k))));
  }
  const auto b = deficiency_probe(build_deltaprime_B1(inv_n(), constant(1.0)), 0.0, 100000);
  r.pass = a.first.classification == Growth::SquareSummable && a.second.classification == Growth::SquareSummable &&
           err < 1e-12 && b.some_not_square_summable();
  r.detail = std::string("geometric gaps: ") + to_string(a.first.classification) + "/" +
             to_string(a.second.classification) + ", closed-form error " + fmt(err) + "; 1/n with beta = 1: " +
             to_string(b.first.classification) + "/" + to_string(b.second.classification);
  return r;
}

Result rayleigh() {
  Result r;
  const Partition X = points(0.5);
  const std::vector<long> sizes = {10, 100, 1000, 10000, 100000};
  const auto pts = rayleigh_witness(X, power_seq(-1.0, -0.25), sizes);
  long below = 0;
  std::string ratios;
  bool stable = true;
  for (const auto& pt : pts) {
    if (!below && pt.quotient < -5.0) below = pt.N;
    const double ref = -std::pow(static_cast<double>(pt.N), 0.25) / std::log(static_cast<double>(pt.N));
    const double ratio = pt.quotient / ref;
    ratios += (ratios.empty() ? "" : ", ") + fmt(ratio);
    if (pt.N >= 1000) stable = stable && ratio >= 0.1 && ratio <= 10.0;
  }
  double zero_min = INFINITY;
  for (const auto& pt : rayleigh_witness(X, constant(0.0), sizes)) zero_min = std::min(zero_min, pt.quotient);
  r.pass = below > 0 && below <= 100000 && stable && zero_min >= -1e-10;
  r.detail = "below -5 at N = " + std::to_string(below) + ", ratios " + ratios + "; alpha = 0 min quotient " +
             fmt(zero_min);
  return r;
}

Result kac_krein_agreement() {
  Result r;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> e(0.2, 0.9), c(0.2, 5.0), p(-3.0, 2.0);
  int agree = 0, decided = 0;
  for (int k = 0; k < 20; ++k) {
    const auto m = InteractionModel::deltaprime(points(e(rng)), power_seq(c(rng), p(rng)));
    const auto kk = kac_krein(string_from_deltaprime(m.X, m.strengths)).established();
    const auto direct = deltaprime_discrete(m).established();
    if (kk == direct) ++agree;
    else r.detail += " [" + m.describe() + "]";
    decided += kk.has_value();
  }
  r.pass = agree == 20;
  r.detail = std::to_string(agree) + "/20 agree (" + std::to_string(decided) + " decided)" + r.detail;
  return r;
}

Result potential_flip() {
  Result r;
  // Newton iteration on a coth a = 2 as the oracle for the bisection
  double a = 2.0;
  for (int i = 0; i < 60; ++i) {
    const double f = a / std::tanh(a) - 2.0;
    a -= f / (1.0 / std::tanh(a) - a / (std::sinh(a) * std::sinh(a)));
  }
  const long double a0 = solve_a0();
  const double root_err = std::abs(static_cast<double>(a0) - a);
  const Seq alpha = -4.0 * n_seq - 2.0;
  double diag = 0.0;
  for (auto conv : {PotentialOffdiag::NextIndex, PotentialOffdiag::SameIndex}) {
    const auto B = build_potential_B(alpha, a0, conv);
    for (long k = 1; k <= 1000; ++k) diag = std::max(diag, std::abs(B.diag(k)));
  }
  const auto with = InteractionModel::delta_with_potential(alpha, StepPotential{0.0, true});
  bool berez = true;
  for (auto conv : {PotentialOffdiag::NextIndex, PotentialOffdiag::SameIndex})
    berez = berez && potential_berezanskii(with, {}, conv).outcome == Outcome::Holds;
  const Report rw = analyze(with), rn = analyze(InteractionModel::delta(inv_n(), alpha));
  const Conclusion* cw = rw.find("deficiency_indices");
  const Conclusion* cn = rn.find("deficiency_indices");
  r.pass = root_err < 1e-12 && diag < 1e-10 && berez && cw && cw->value == "1" && cn &&
           cn->value == "0 (self-adjoint)";
  r.detail = "a0 = " + format_g17(static_cast<double>(a0)) + " (oracle error " + fmt(root_err) + "), max |diag| " +
             fmt(diag) + ", Berezanskii " + (berez ? "holds" : "not shown") + "; with potential " +
             (cw ? cw->value : "none") + ", without " + (cn ? cn->value : "none");
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> checks = {
      {"golden examples", golden_suite},
      {"factorization identities", factorizations},
      {"eigensolver oracle", eigensolver},
      {"Weyl constants", weyl_constants},
      {"triplet boundedness", triplet_scans},
      {"deficiency probe", deficiency_probes},
      {"non-semiboundedness witness", rayleigh},
      {"Kac-Krein agreement", kac_krein_agreement},
      {"step potential flip", potential_flip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Result r;
    try {
      r = checks[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("criterion %zu %-28s %s  %s\n", i + 1, checks[i].first, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, checks.size());
  return failed ? 1 : 0;
}
