#ifndef POINTSPEC_IO_HPP
#define POINTSPEC_IO_HPP

#include <complex>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "criteria.hpp"
#include "errors.hpp"

namespace pointspec::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) { throw SchemaError(path + ": " + msg); }

inline const char* type_name(const json& j) { return j.type_name(); }

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, std::string("expected an object, got ") + type_name(j));
}

inline void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  require_object(j, path);
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) fail(path + "." + k, "unknown field");
  }
}

inline const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  return j.at(key);
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, std::string("expected a number, got ") + type_name(j));
  return j.get<double>();
}

inline double number_at(const json& j, const std::string& path, const char* key) {
  return number(member(j, path, key), path + "." + key);
}

inline std::optional<double> opt_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return number(j.at(key), path + "." + key);
}

inline long integer(const json& j, const std::string& path, long min_value) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>()))
    fail(path, std::string("expected an integer, got ") + j.dump());
  const long v = j.is_number_integer() ? j.get<long>() : static_cast<long>(j.get<double>());
  if (v < min_value) fail(path, "must be >= " + std::to_string(min_value));
  return v;
}

inline std::optional<long> opt_integer(const json& j, const std::string& path, const char* key, long min_value) {
  if (!j.contains(key)) return std::nullopt;
  return integer(j.at(key), path + "." + key, min_value);
}

inline std::string string_at(const json& j, const std::string& path, const char* key) {
  const json& v = member(j, path, key);
  if (!v.is_string()) fail(path + "." + key, std::string("expected a string, got ") + type_name(v));
  return v.get<std::string>();
}

inline std::optional<std::string> opt_string(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return string_at(j, path, key);
}

inline std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, std::string("expected an array, got ") + type_name(j));
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline PowerTerm power_term(const json& j, const std::string& path) {
  allow_keys(j, path, {"c", "p"});
  return {number_at(j, path, "c"), number_at(j, path, "p")};
}

}  // namespace detail

// Sequence grammar. Leaf forms: power{c,p}, constant{c}, affine{c0,c1}, poly{coeffs},
// power_sum{terms}, geometric{c,ratio}, table{values,tail_hint}. Composites: sum{of},
// product{of}, scaled{c,of}, pow{e,of}, gap{of}, and "d" for the partition gaps.
inline Seq parse_sequence(const json& j, const std::string& path, const Seq* gaps = nullptr) {
  using namespace detail;
  if (j.is_number()) return constant(j.get<double>());
  require_object(j, path);
  const std::string form = string_at(j, path, "form");
  if (form == "power") {
    allow_keys(j, path, {"form", "c", "p"});
    return Seq(SequenceSpec::power(number_at(j, path, "c"), number_at(j, path, "p")));
  }
  if (form == "constant") {
    allow_keys(j, path, {"form", "c"});
    return constant(number_at(j, path, "c"));
  }
  if (form == "affine") {
    allow_keys(j, path, {"form", "c0", "c1"});
    return Seq(SequenceSpec::affine(number_at(j, path, "c0"), number_at(j, path, "c1")));
  }
  if (form == "poly") {
    allow_keys(j, path, {"form", "coeffs"});
    auto c = numbers(member(j, path, "coeffs"), path + ".coeffs");
    if (c.empty()) fail(path + ".coeffs", "needs at least one coefficient");
    return Seq(SequenceSpec::poly(std::move(c)));
  }
  if (form == "power_sum") {
    allow_keys(j, path, {"form", "terms"});
    const json& t = member(j, path, "terms");
    if (!t.is_array() || t.empty()) fail(path + ".terms", "expected a nonempty array");
    std::vector<PowerTerm> terms;
    for (std::size_t i = 0; i < t.size(); ++i) terms.push_back(power_term(t[i], path + ".terms[" + std::to_string(i) + "]"));
    return Seq(SequenceSpec::power_sum(std::move(terms)));
  }
  if (form == "geometric") {
    allow_keys(j, path, {"form", "c", "ratio"});
    return Seq(SequenceSpec::geometric(number_at(j, path, "c"), number_at(j, path, "ratio")));
  }
  if (form == "table") {
    allow_keys(j, path, {"form", "values", "tail_hint"});
    auto v = numbers(member(j, path, "values"), path + ".values");
    if (v.empty()) fail(path + ".values", "needs at least one value");
    std::optional<PowerTerm> hint;
    if (j.contains("tail_hint")) hint = power_term(j.at("tail_hint"), path + ".tail_hint");
    return Seq(SequenceSpec::table(std::move(v), hint));
  }
  if (form == "sum" || form == "product") {
    allow_keys(j, path, {"form", "of"});
    const json& of = member(j, path, "of");
    if (!of.is_array() || of.empty()) fail(path + ".of", "expected a nonempty array");
    Seq acc = parse_sequence(of[0], path + ".of[0]", gaps);
    for (std::size_t i = 1; i < of.size(); ++i) {
      Seq s = parse_sequence(of[i], path + ".of[" + std::to_string(i) + "]", gaps);
      acc = form == "sum" ? acc + s : acc * s;
    }
    return acc;
  }
  if (form == "scaled") {
    allow_keys(j, path, {"form", "c", "of"});
    return number_at(j, path, "c") * parse_sequence(member(j, path, "of"), path + ".of", gaps);
  }
  if (form == "pow") {
    allow_keys(j, path, {"form", "e", "of"});
    return pow(parse_sequence(member(j, path, "of"), path + ".of", gaps), number_at(j, path, "e"));
  }
  if (form == "gap") {
    allow_keys(j, path, {"form", "of"});
    return gap(parse_sequence(member(j, path, "of"), path + ".of", gaps));
  }
  if (form == "d") {
    allow_keys(j, path, {"form"});
    if (!gaps) fail(path, "\"d\" is only available once the partition is known");
    return *gaps;
  }
  fail(path + ".form", "unknown sequence form \"" + form + "\"");
}

inline Partition parse_partition(const json& j, const std::string& path) {
  detail::allow_keys(j, path, {"gaps", "points"});
  const bool g = j.contains("gaps"), p = j.contains("points");
  if (g == p) detail::fail(path, "give exactly one of \"gaps\" or \"points\"");
  try {
    return g ? Partition::from_gaps(parse_sequence(j.at("gaps"), path + ".gaps"))
             : Partition::from_points(parse_sequence(j.at("points"), path + ".points"));
  } catch (const DomainError& e) {
    detail::fail(path, e.what());
  }
}

inline InteractionModel parse_model(const json& j, const std::string& path) {
  using namespace detail;
  allow_keys(j, path, {"kind", "partition", "strengths", "potential", "label"});
  const std::string kind = string_at(j, path, "kind");
  if (kind != "delta" && kind != "deltaprime") fail(path + ".kind", "expected \"delta\" or \"deltaprime\"");
  const std::string label = opt_string(j, path, "label").value_or("");
  std::optional<StepPotential> q;
  if (j.contains("potential")) {
    const json& pj = j.at("potential");
    const std::string pp = path + ".potential";
    allow_keys(pj, pp, {"a", "at_root"});
    StepPotential sp;
    if (pj.contains("at_root")) {
      if (!pj.at("at_root").is_boolean()) fail(pp + ".at_root", "expected a boolean");
      sp.at_root = pj.at("at_root").get<bool>();
    }
    if (auto a = opt_number(pj, pp, "a")) sp.a = *a;
    else if (!sp.at_root) fail(pp, "give \"a\" or \"at_root\": true");
    q = sp;
  }
  const Partition X = q ? Partition::from_gaps(power_seq(1.0, -1.0))
                        : parse_partition(member(j, path, "partition"), path + ".partition");
  if (q && j.contains("partition")) {
    const Partition given = parse_partition(j.at("partition"), path + ".partition");
    if (!given.is_inverse_n() || given.d(1) != 1.0) fail(path + ".partition", "the step potential needs d_n = 1/n");
  }
  const Seq d = X.d();
  const Seq s = parse_sequence(member(j, path, "strengths"), path + ".strengths", &d);
  try {
    if (q) return InteractionModel::delta_with_potential(s, *q, label);
    return kind == "delta" ? InteractionModel::delta(X, s, label) : InteractionModel::deltaprime(X, s, label);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

// ---- scenario -----------------------------------------------------------------------------

enum class Format { Json, Csv };

inline Format parse_format(const std::string& s, const std::string& path) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  detail::fail(path, "expected \"json\" or \"csv\"");
}

struct CommandOptions {
  std::optional<long> horizon;
  std::optional<double> tol;
  std::optional<long> jobs;
  std::optional<long> trunc;
  std::optional<std::pair<double, double>> window;
  std::vector<long> trace;  // section sizes for the lambda_min trace
  std::string matrix = "B2";
  std::optional<std::complex<double>> z;
  std::optional<long> n_max;
  std::string triplet = "delta_regularized";
  std::optional<double> a;  // potential triplet parameter
  std::optional<long> rows;
};

struct Command {
  std::string name;
  CommandOptions opt;
};

struct OutputSpec {
  Format format = Format::Json;
  std::optional<std::string> path;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::optional<InteractionModel> model;
  std::vector<Command> commands;
  OutputSpec output;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze", "spectrum", "deficiency", "weyl", "string"};
  return names;
}

inline Command parse_command(const json& j, const std::string& path) {
  using namespace detail;
  require_object(j, path);
  Command c;
  c.name = string_at(j, path, "command");
  if (c.name == "analyze") {
    allow_keys(j, path, {"command", "horizon", "tol", "jobs"});
  } else if (c.name == "spectrum") {
    allow_keys(j, path, {"command", "matrix", "trunc", "window", "trace", "tol", "jobs"});
  } else if (c.name == "deficiency") {
    allow_keys(j, path, {"command", "matrix", "z", "n_max"});
  } else if (c.name == "weyl") {
    allow_keys(j, path, {"command", "triplet", "n_max", "a", "jobs"});
  } else if (c.name == "string") {
    allow_keys(j, path, {"command", "rows", "horizon", "tol"});
  } else {
    fail(path + ".command", "unknown command \"" + c.name + "\"");
  }
  auto& o = c.opt;
  o.horizon = opt_integer(j, path, "horizon", 100);
  o.tol = opt_number(j, path, "tol");
  if (o.tol && !(*o.tol > 0)) fail(path + ".tol", "must be positive");
  o.jobs = opt_integer(j, path, "jobs", 1);
  o.trunc = opt_integer(j, path, "trunc", 1);
  o.n_max = opt_integer(j, path, "n_max", 10);
  o.rows = opt_integer(j, path, "rows", 1);
  o.a = opt_number(j, path, "a");
  if (auto m = opt_string(j, path, "matrix")) o.matrix = *m;
  if (auto t = opt_string(j, path, "triplet")) o.triplet = *t;
  if (j.contains("window")) {
    auto w = numbers(j.at("window"), path + ".window");
    if (w.size() != 2 || !(w[0] < w[1])) fail(path + ".window", "expected [lo, hi] with lo < hi");
    o.window = std::make_pair(w[0], w[1]);
  }
  if (j.contains("trace")) {
    const json& t = j.at("trace");
    if (!t.is_array()) fail(path + ".trace", "expected an array of section sizes");
    for (std::size_t i = 0; i < t.size(); ++i) o.trace.push_back(integer(t[i], path + ".trace[" + std::to_string(i) + "]", 1));
  }
  if (j.contains("z")) {
    auto z = numbers(j.at("z"), path + ".z");
    if (z.size() != 2) fail(path + ".z", "expected [re, im]");
    o.z = std::complex<double>(z[0], z[1]);
  }
  return c;
}

inline Scenario parse_scenario(const json& j) {
  using namespace detail;
  const std::string root = "$";
  allow_keys(j, root, {"schema_version", "model", "commands", "output"});
  Scenario s;
  s.schema_version = static_cast<int>(integer(member(j, root, "schema_version"), "$.schema_version", 1));
  if (s.schema_version != kSchemaVersion)
    fail("$.schema_version", "unsupported version " + std::to_string(s.schema_version));
  if (j.contains("model")) s.model = parse_model(j.at("model"), "$.model");
  const json& cs = member(j, root, "commands");
  if (!cs.is_array() || cs.empty()) fail("$.commands", "expected a nonempty array");
  for (std::size_t i = 0; i < cs.size(); ++i) s.commands.push_back(parse_command(cs[i], "$.commands[" + std::to_string(i) + "]"));
  if (j.contains("output")) {
    const json& o = j.at("output");
    allow_keys(o, "$.output", {"format", "path"});
    if (auto f = opt_string(o, "$.output", "format")) s.output.format = parse_format(*f, "$.output.format");
    s.output.path = opt_string(o, "$.output", "path");
  }
  return s;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

// ---- serialization ------------------------------------------------------------------------

inline json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline json to_json(const ProbeResult& r) {
  return {{"subject", r.subject},
          {"kind", to_string(r.kind)},
          {"value", number_or_null(r.value)},
          {"method", to_string(r.method)},
          {"confidence", r.confidence()},
          {"horizon", r.horizon},
          {"tolerance", r.tolerance},
          {"detail", r.detail}};
}

inline json to_json(const Verdict& v) {
  json ev = json::array();
  for (const auto& e : v.evidence) ev.push_back(to_json(e));
  json j = {{"criterion_id", v.criterion_id},
            {"outcome", to_string(v.outcome)},
            {"claim", v.claim_str()},
            {"evidence", ev},
            {"citation", v.citation}};
  if (v.implies) j["implies"] = to_string(*v.implies);
  if (auto e = v.established()) j["established"] = to_string(*e);
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.jacobi_level) j["boundary_matrix_level"] = true;
  return j;
}

inline json to_json(const Conclusion& c) { return {{"property", c.property}, {"value", c.value}, {"chain", c.chain}}; }

inline json to_json(const Report& r, bool with_runtime = true) {
  json vs = json::array(), cs = json::array();
  for (const auto& v : r.verdicts) vs.push_back(to_json(v));
  for (const auto& c : r.conclusions) cs.push_back(to_json(c));
  json j = {{"model", r.model}, {"verdicts", vs}, {"conclusions", cs}};
  if (!r.cross_checks.empty()) {
    json x = json::array();
    for (const auto& c : r.cross_checks) x.push_back({{"name", c.name}, {"consistent", c.consistent}, {"detail", c.detail}});
    j["cross_checks"] = x;
  }
  if (with_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string csv_row(std::initializer_list<std::string> fields) {
  std::string s;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) s += ',';
    s += csv_field(f);
    first = false;
  }
  return s + "\n";
}

// Line endings of a CSV document as required by RFC 4180.
inline std::string crlf(const std::string& s) {
  std::string out;
  out.reserve(s.size() + s.size() / 16);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\n' && (i == 0 || s[i - 1] != '\r')) out += '\r';
    out += s[i];
  }
  return out;
}

inline std::string verdicts_csv(const Report& r) {
  std::string s = csv_row({"criterion_id", "outcome", "claim", "established", "citation", "reason"});
  for (const auto& v : r.verdicts) {
    const auto e = v.established();
    s += csv_row({v.criterion_id, to_string(v.outcome), v.claim_str(), e ? to_string(*e) : "", v.citation, v.reason});
  }
  return s;
}

}  // namespace pointspec::io

#endif
