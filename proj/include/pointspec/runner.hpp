#ifndef POINTSPEC_RUNNER_HPP
#define POINTSPEC_RUNNER_HPP

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "io.hpp"
#include "krein_string.hpp"
#include "potential.hpp"
#include "spectral.hpp"
#include "weyl.hpp"

namespace pointspec::run {

using io::json;

enum ExitCode { kOk = 0, kError = 1, kInconclusive = 2 };

// Command-line values that override the per-command options of a scenario.
struct Overrides {
  std::optional<long> horizon;
  std::optional<long> trunc;
  std::optional<double> tol;
  std::optional<long> jobs;
  std::optional<io::Format> format;
  std::optional<std::string> out;
};

struct CommandResult {
  std::string name;
  json data;
  std::string csv;
  // The command decides something and nothing was decided.
  bool inconclusive = false;
};

namespace detail {

inline const InteractionModel& need_model(const std::optional<InteractionModel>& m, const std::string& cmd) {
  if (!m) throw SchemaError("$.model: command \"" + cmd + "\" needs a model");
  return *m;
}

inline JacobiOperatorSpec select_matrix(const std::string& name, const std::optional<InteractionModel>& m,
                                        const std::string& cmd) {
  if (name == "free") return build_free();
  const InteractionModel& model = need_model(m, cmd);
  if (name == "potential" || (model.potential && name == "B2")) {
    if (!model.potential) throw SchemaError("$.commands: matrix \"potential\" needs a step potential in the model");
    return build_potential_B(model.strengths, potential_coupling(*model.potential));
  }
  if (model.potential) throw DomainError("the step-potential model only has the \"potential\" matrix");
  if (name == "B1")
    return model.kind == InteractionKind::Delta ? build_delta_B1(model.X, model.strengths)
                                                : build_deltaprime_B1(model.X, model.strengths);
  if (name == "B2")
    return model.kind == InteractionKind::Delta ? build_delta_B2(model.X, model.strengths)
                                                : build_deltaprime_B2(model.X, model.strengths);
  if (name == "string") {
    if (model.kind != InteractionKind::DeltaPrime) throw DomainError("the string matrix needs a delta-prime model");
    return build_J_ml(string_from_deltaprime(model.X, model.strengths));
  }
  throw SchemaError("$.commands: unknown matrix \"" + name + "\"; expected free, B1, B2, string or potential");
}

inline TripletKind parse_triplet(const std::string& s) {
  static const std::pair<const char*, TripletKind> names[] = {
      {"delta_raw", TripletKind::DeltaRaw},         {"delta_regularized", TripletKind::DeltaRegularized},
      {"mixed_raw", TripletKind::MixedRaw},         {"mixed_regularized", TripletKind::MixedRegularized},
      {"potential_raw", TripletKind::PotentialRaw}, {"potential_regularized", TripletKind::PotentialRegularized}};
  for (const auto& [n, k] : names)
    if (s == n) return k;
  throw SchemaError("$.commands: unknown triplet \"" + s + "\"");
}

template <class T>
T pick(const std::optional<T>& cli, const std::optional<T>& scenario, T fallback) {
  if (cli) return *cli;
  if (scenario) return *scenario;
  return fallback;
}

inline json growth_json(const GrowthClass& g) {
  return {{"classification", to_string(g.classification)},
          {"parameter", io::number_or_null(g.parameter)},
          {"reached", g.reached},
          {"note", g.note}};
}

}  // namespace detail

inline CommandResult execute(const io::Command& c, const std::optional<InteractionModel>& model,
                             const Overrides& ov = {}) {
  using namespace detail;
  const auto& o = c.opt;
  CommandResult r{c.name, json::object(), "", false};
  ProbeSettings cfg;
  cfg.horizon = pick<long>(ov.horizon, o.horizon, cfg.horizon);
  const unsigned jobs = static_cast<unsigned>(pick<long>(ov.jobs, o.jobs, 1));

  if (c.name == "analyze") {
    if (ov.tol || o.tol) cfg.rel_tol = pick<double>(ov.tol, o.tol, cfg.rel_tol);
    const Report rep = analyze(need_model(model, c.name), {cfg, jobs, true});
    r.data = io::to_json(rep);
    r.csv = io::verdicts_csv(rep);
    r.inconclusive = rep.conclusions.empty();
    return r;
  }
  if (c.name == "spectrum") {
    const JacobiOperatorSpec J = select_matrix(o.matrix, model, c.name);
    const long N = pick<long>(ov.trunc, o.trunc, 100);
    const TridiagonalMatrix t = truncate(J, N);
    const double tol = pick<double>(ov.tol, o.tol, 0.0);
    const auto [glo, ghi] = gershgorin(t);
    const auto [lo, hi] = o.window.value_or(std::make_pair(glo, ghi));
    SpectralSummary s = spectrum_window(t, lo, hi, tol, jobs);
    json d = {{"matrix", J.label()},
              {"N", N},
              {"window", {lo, hi}},
              {"tolerance", s.tolerance},
              {"count_below_lo", s.count_at[lo]},
              {"count_below_hi", s.count_at[hi]},
              {"eigenvalues", s.eigenvalues}};
    r.csv = s.eigenvalues_csv();
    if (!o.trace.empty()) {
      const SpectralSummary tr = lambda_min_trace(J, o.trace, tol);
      json pts = json::array();
      for (const auto& [n, l] : tr.lambda_min_trace) pts.push_back({{"N", n}, {"lambda_min", l}});
      d["lambda_min_trace"] = pts;
      d["trace_nonincreasing"] = tr.trace_nonincreasing;
      r.csv = tr.trace_csv();
    }
    r.data = d;
    return r;
  }
  if (c.name == "deficiency") {
    const std::string mname = o.matrix == "B2" && model && model->kind == InteractionKind::DeltaPrime ? "B1" : o.matrix;
    const JacobiOperatorSpec J = select_matrix(mname, model, c.name);
    const long n_max = pick<long>(std::nullopt, o.n_max, cfg.horizon);
    const auto z = o.z.value_or(std::complex<double>(0.0, 0.0));
    const DeficiencyProbeResult p = deficiency_probe(J, z, n_max);
    r.data = {{"matrix", J.label()},
              {"z", {z.real(), z.imag()}},
              {"n_max", n_max},
              {"first", growth_json(p.first)},
              {"second", growth_json(p.second)},
              {"both_square_summable", p.both_square_summable()},
              {"some_not_square_summable", p.some_not_square_summable()}};
    std::string csv = "N,log_norm_first,log_norm_second\n";
    const auto& a = p.first.log_partial_norms;
    const auto& b = p.second.log_partial_norms;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      csv += std::to_string(a[i].first) + "," + format_g17(a[i].second) + "," + format_g17(b[i].second) + "\n";
    r.csv = csv;
    r.inconclusive = !p.both_square_summable() && !p.some_not_square_summable();
    return r;
  }
  if (c.name == "weyl") {
    const TripletKind k = parse_triplet(o.triplet);
    const long n_max = pick<long>(std::nullopt, o.n_max, 10000);
    std::optional<double> a = o.a;
    Partition X = Partition::from_gaps(power_seq(1.0, -1.0));
    if (model) X = model->X;
    if (is_potential(k) && !a && model && model->potential) a = static_cast<double>(potential_coupling(*model->potential));
    const TripletScan s = triplet_boundedness_scan(X, k, n_max, a, jobs);
    r.data = {{"triplet", to_string(k)},
              {"n_max", n_max},
              {"sup_norm_M", s.sup_norm_M},
              {"sup_norm_im_inv", io::number_or_null(s.sup_norm_im_inv)},
              {"slope_norm_M", s.slope_norm_M},
              {"slope_norm_im_inv", io::number_or_null(s.slope_norm_im_inv)},
              {"bounded_M", s.bounded_M},
              {"bounded_im_inv", s.bounded_im_inv},
              {"verdict", s.verdict()}};
    r.csv = s.to_csv();
    return r;
  }
  if (c.name == "string") {
    const InteractionModel& m = need_model(model, c.name);
    if (m.kind != InteractionKind::DeltaPrime) throw DomainError("the string picture needs a delta-prime model");
    const StringData s = string_from_deltaprime(m.X, m.strengths);
    const long rows = pick<long>(ov.trunc, o.rows, 20);
    const Verdict h = hamburger(s, cfg), k = kac_krein(s, cfg);
    r.data = {{"string", s.describe()}, {"verdicts", {io::to_json(h), io::to_json(k)}}};
    r.csv = s.to_csv(rows);
    r.inconclusive = !h.established() && !k.established();
    return r;
  }
  throw SchemaError("$.commands: unknown command \"" + c.name + "\"");
}

struct ScenarioResult {
  std::vector<CommandResult> results;
  int exit_code = kOk;
};

inline ScenarioResult run_scenario(const io::Scenario& sc, const Overrides& ov = {}) {
  ScenarioResult out;
  bool decisive = false, any_decision = false;
  for (const auto& c : sc.commands) {
    out.results.push_back(execute(c, sc.model, ov));
    const auto& r = out.results.back();
    if (r.name == "analyze" || r.name == "deficiency" || r.name == "string") {
      any_decision = true;
      decisive = decisive || !r.inconclusive;
    }
  }
  out.exit_code = any_decision && !decisive ? kInconclusive : kOk;
  return out;
}

// Writes results to `path` (one command) or into the directory `path` (several), or to `os`.
inline void emit(const ScenarioResult& res, io::Format fmt, const std::optional<std::string>& path, std::ostream& os) {
  auto body = [&](const CommandResult& r) {
    return fmt == io::Format::Json ? r.data.dump(2) + "\n" : io::crlf(r.csv);
  };
  if (!path) {
    if (fmt == io::Format::Json && res.results.size() > 1) {
      json all = json::array();
      for (const auto& r : res.results) all.push_back({{"command", r.name}, {"result", r.data}});
      os << all.dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < res.results.size(); ++i) os << (i ? "\n" : "") << body(res.results[i]);
    }
    return;
  }
  namespace fs = std::filesystem;
  auto write = [](const fs::path& p, const std::string& s) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw DomainError("cannot write " + p.string());
    f << s;
  };
  if (res.results.size() == 1) {
    write(*path, body(res.results.front()));
    return;
  }
  const std::string ext = fmt == io::Format::Json ? ".json" : ".csv";
  for (std::size_t i = 0; i < res.results.size(); ++i) {
    std::ostringstream name;
    name << std::setw(2) << std::setfill('0') << i + 1 << "-" << res.results[i].name << ext;
    write(fs::path(*path) / name.str(), body(res.results[i]));
  }
}

}  // namespace pointspec::run

#endif
