#ifndef POINTSPEC_GOLDEN_HPP
#define POINTSPEC_GOLDEN_HPP

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "io.hpp"

namespace pointspec::golden {

struct Expectation {
  enum class Kind { Conclusion, NoConclusion, VerdictOutcome };
  Kind kind;
  std::string key;    // property or criterion id
  std::string value;  // conclusion value or outcome name

  std::string str() const {
    switch (kind) {
      case Kind::Conclusion: return key + " = " + value;
      case Kind::NoConclusion: return "no conclusion " + key + " = " + value;
      case Kind::VerdictOutcome: return key + " " + value;
    }
    return "?";
  }
};

inline Expectation concludes(std::string property, std::string value) {
  return {Expectation::Kind::Conclusion, std::move(property), std::move(value)};
}
inline Expectation not_concludes(std::string property, std::string value) {
  return {Expectation::Kind::NoConclusion, std::move(property), std::move(value)};
}
inline Expectation outcome(std::string id, Outcome o) {
  return {Expectation::Kind::VerdictOutcome, std::move(id), to_string(o)};
}

inline const std::string kSelfAdjoint = "0 (self-adjoint)";
inline const std::string kDeficiencyOne = "1";

struct Case {
  std::string label;
  std::function<InteractionModel()> model;
  std::vector<Expectation> expect;
};

struct Example {
  std::string id;
  std::string title;
  std::vector<Case> cases;
};

inline const std::vector<Example>& registry() {
  static const std::vector<Example> reg = [] {
    const Seq n = power_seq(1.0, 1.0);
    auto inv_n = [] { return Partition::from_gaps(power_seq(1.0, -1.0)); };
    auto points = [](double e) { return Partition::from_points(power_seq(1.0, e)); };
    auto label_a = [](double a) {
      std::ostringstream os;
      os << "a = " << a;
      return os.str();
    };
    std::vector<Example> r;

    r.push_back({"delta-inverse-n", "delta interactions with d_n = 1/n", {}});
    r.back().cases = {
        {"alpha_n = n^2 (sum |alpha_n|/n^3 = inf)", [=] { return InteractionModel::delta(inv_n(), n * n); },
         {concludes("deficiency_indices", kSelfAdjoint)}},
        {"alpha_n = -4n - 3", [=] { return InteractionModel::delta(inv_n(), -4.0 * n - 3.0); },
         {concludes("deficiency_indices", kSelfAdjoint)}},
        {"alpha_n = -1/n", [=] { return InteractionModel::delta(inv_n(), -1.0 / n); },
         {concludes("deficiency_indices", kSelfAdjoint)}},
        {"alpha_n = -2n - 1", [=] { return InteractionModel::delta(inv_n(), -2.0 * n - 1.0); },
         {concludes("deficiency_indices", kDeficiencyOne)}},
    };

    r.push_back({"delta-periodic-window", "d_n = 1/n, alpha_n = a (n + 1/2)", {}});
    for (double a : {-1.0, -2.0, -3.9})
      r.back().cases.push_back({label_a(a),
                                [=] { return InteractionModel::delta(inv_n(), a * (n + 0.5)); },
                                {outcome("delta.periodic_window", Outcome::Holds),
                                 concludes("deficiency_indices", kDeficiencyOne)}});
    for (double a : {0.5, -4.1})
      r.back().cases.push_back({label_a(a),
                                [=] { return InteractionModel::delta(inv_n(), a * (n + 0.5)); },
                                {outcome("delta.periodic_window", Outcome::Fails),
                                 not_concludes("deficiency_indices", kDeficiencyOne)}});

    r.push_back({"delta-sqrt-discrete", "x_n = sqrt(n), discreteness of delta interactions", {}});
    r.back().cases = {
        {"alpha_n = n^(-1/4)", [=] { return InteractionModel::delta(points(0.5), power_seq(1.0, -0.25)); },
         {outcome("delta.chihara1", Outcome::Holds), concludes("spectrum", "discrete")}},
        {"alpha_n = -10 sqrt(n)", [=] { return InteractionModel::delta(points(0.5), power_seq(-10.0, 0.5)); },
         {outcome("delta.chihara1", Outcome::Holds), concludes("spectrum", "discrete")}},
        {"alpha_n = -4 sqrt(n)", [=] { return InteractionModel::delta(points(0.5), power_seq(-4.0, 0.5)); },
         {outcome("delta.chihara1", Outcome::Fails)}},
    };

    r.push_back({"deltaprime-power-points", "delta-prime interactions on x_n = n^e", {}});
    r.back().cases = {
        {"e = 1/2, beta_n = 1", [=] { return InteractionModel::deltaprime(points(0.5), constant(1.0)); },
         {concludes("spectrum", "not discrete")}},
        {"e = 1/3, beta_n = 1", [=] { return InteractionModel::deltaprime(points(1.0 / 3.0), constant(1.0)); },
         {concludes("spectrum", "not discrete")}},
        {"e = 1/3, beta_n = -n", [=] { return InteractionModel::deltaprime(points(1.0 / 3.0), -1.0 * n); },
         {concludes("spectrum", "not discrete")}},
        {"e = 1/3, beta_n + d_n = 2 n^-2",
         [=] {
           const Partition X = points(1.0 / 3.0);
           return InteractionModel::deltaprime(X, power_seq(2.0, -2.0) - X.d());
         },
         {concludes("spectrum", "discrete")}},
        {"e = 1/3, beta_n + d_n = 2 n^(-4/3)",
         [=] {
           const Partition X = points(1.0 / 3.0);
           return InteractionModel::deltaprime(X, power_seq(2.0, -4.0 / 3.0) - X.d());
         },
         {concludes("spectrum", "not discrete")}},
    };

    r.push_back({"step-potential-flip", "alpha_n = -4n - 2 with and without the step potential", {}});
    r.back().cases = {
        {"no potential", [=] { return InteractionModel::delta(inv_n(), -4.0 * n - 2.0); },
         {concludes("deficiency_indices", kSelfAdjoint)}},
        {"potential at the root a0",
         [=] { return InteractionModel::delta_with_potential(-4.0 * n - 2.0, StepPotential{0.0, true}); },
         {outcome("potential.berezanskii", Outcome::Holds), concludes("deficiency_indices", kDeficiencyOne)}},
    };
    return r;
  }();
  return reg;
}

inline std::vector<std::string> ids() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.id);
  return out;
}

inline const Example& find(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  std::string msg = "unknown example id \"" + id + "\"; available:";
  for (const auto& s : ids()) msg += " " + s;
  throw DomainError(msg);
}

struct Check {
  Expectation expect;
  bool ok = false;
  std::string observed;
};

struct CaseResult {
  std::string label;
  Report report;
  std::vector<Check> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

struct ExampleResult {
  std::string id;
  std::vector<CaseResult> cases;
  bool ok() const {
    for (const auto& c : cases)
      if (!c.ok()) return false;
    return true;
  }
};

inline Check check(const Expectation& e, const Report& r) {
  Check c{e, false, ""};
  switch (e.kind) {
    case Expectation::Kind::Conclusion:
    case Expectation::Kind::NoConclusion: {
      bool found = false;
      for (const auto& k : r.conclusions) {
        if (k.property != e.key) continue;
        c.observed += (c.observed.empty() ? "" : "; ") + k.value;
        found = found || k.value == e.value;
      }
      if (c.observed.empty()) c.observed = "none";
      c.ok = e.kind == Expectation::Kind::Conclusion ? found : !found;
      break;
    }
    case Expectation::Kind::VerdictOutcome: {
      const Verdict* v = r.verdict(e.key);
      c.observed = v ? to_string(v->outcome) : "not run";
      c.ok = v && c.observed == e.value;
      break;
    }
  }
  return c;
}

inline ExampleResult reproduce(const std::string& id, const AnalyzeSettings& s = {}) {
  const Example& ex = find(id);
  ExampleResult out{ex.id, {}};
  for (const auto& c : ex.cases) {
    CaseResult cr{c.label, analyze(c.model(), s), {}};
    for (const auto& e : c.expect) cr.checks.push_back(check(e, cr.report));
    out.cases.push_back(std::move(cr));
  }
  return out;
}

// Comparison report; runtimes are left out so repeated runs serialize identically.
inline io::json to_json(const ExampleResult& r) {
  io::json cases = io::json::array();
  for (const auto& c : r.cases) {
    io::json checks = io::json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"expected", k.expect.str()}, {"observed", k.observed}, {"match", k.ok}});
    cases.push_back({{"case", c.label}, {"match", c.ok()}, {"checks", checks}, {"report", io::to_json(c.report, false)}});
  }
  return {{"example_id", r.id}, {"match", r.ok()}, {"cases", cases}};
}

}  // namespace pointspec::golden

#endif
