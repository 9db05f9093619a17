#ifndef POINTSPEC_VERDICT_HPP
#define POINTSPEC_VERDICT_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "probes.hpp"

namespace pointspec {

enum class Claim { SelfAdjoint, DeficiencyOne, Discrete, NotDiscrete, SemiboundedBelow, NotSemibounded, ResolventDiffInSp };

inline const char* to_string(Claim c) {
  switch (c) {
    case Claim::SelfAdjoint: return "SelfAdjoint";
    case Claim::DeficiencyOne: return "DeficiencyOne";
    case Claim::Discrete: return "Discrete";
    case Claim::NotDiscrete: return "NotDiscrete";
    case Claim::SemiboundedBelow: return "SemiboundedBelow";
    case Claim::NotSemibounded: return "NotSemibounded";
    case Claim::ResolventDiffInSp: return "ResolventDiffInSp";
  }
  return "?";
}

// Outcome of one named test. Holds establishes `claim`; for tests that are
// equivalences, Fails establishes `implies` instead.
struct Verdict {
  std::string criterion_id;
  Outcome outcome = Outcome::Inconclusive;
  Claim claim = Claim::SelfAdjoint;
  std::optional<Claim> implies;
  double p = 0.0;  // Schatten index for ResolventDiffInSp
  std::vector<ProbeResult> evidence;
  std::string citation;  // statement of the condition that was tested
  std::string reason;    // why the test was inconclusive, or a remark
  // The verdict concerns the boundary Jacobi matrix rather than the Hamiltonian.
  bool jacobi_level = false;

  std::optional<Claim> established() const {
    if (outcome == Outcome::Holds) return claim;
    if (outcome == Outcome::Fails) return implies;
    return std::nullopt;
  }

  std::string claim_str() const {
    if (claim != Claim::ResolventDiffInSp) return to_string(claim);
    std::ostringstream os;
    os << "ResolventDiffInSp(" << p << ")";
    return os.str();
  }

  std::string str() const {
    std::string s = criterion_id + ": " + to_string(outcome) + "(" + claim_str() + ")";
    if (auto e = established(); e && outcome == Outcome::Fails) s += " => " + std::string(to_string(*e));
    if (!reason.empty()) s += " -- " + reason;
    return s;
  }
};

namespace detail {

inline Verdict make_verdict(std::string id, Claim claim, std::string citation) {
  Verdict v;
  v.criterion_id = std::move(id);
  v.claim = claim;
  v.citation = std::move(citation);
  return v;
}

// Wraps a sign or bound scan as evidence.
inline ProbeResult scan_evidence(std::string subject, ProbeMethod m, double observed_inf, long horizon,
                                 std::string detail) {
  ProbeResult r;
  r.subject = std::move(subject);
  r.kind = ProbeKind::LimInf;
  r.value = observed_inf;
  r.method = m;
  r.horizon = m == ProbeMethod::ExactSymbolic ? 0 : horizon;
  r.detail = std::move(detail);
  return r;
}

}  // namespace detail

}  // namespace pointspec

#endif
