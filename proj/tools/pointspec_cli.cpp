#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pointspec/golden.hpp"
#include "pointspec/io.hpp"
#include "pointspec/runner.hpp"

using namespace pointspec;

namespace {

struct Globals {
  std::optional<long> horizon, trunc, jobs;
  std::optional<double> tol;
  std::string format;
  std::optional<std::string> out;

  run::Overrides overrides() const {
    run::Overrides o;
    o.horizon = horizon;
    o.trunc = trunc;
    o.tol = tol;
    o.jobs = jobs;
    o.out = out;
    if (!format.empty()) o.format = io::parse_format(format, "--format");
    return o;
  }
};

// Scenario from a file, or a bare model given inline with --model.
io::Scenario load(const std::string& path, const std::string& model_json) {
  if (!path.empty()) return io::load_scenario(path);
  io::Scenario s;
  if (!model_json.empty()) {
    io::json j;
    try {
      j = io::json::parse(model_json);
    } catch (const io::json::parse_error& e) {
      throw SchemaError(std::string("--model: ") + e.what());
    }
    s.model = io::parse_model(j, "--model");
  }
  return s;
}

int finish(const run::ScenarioResult& res, const io::Scenario& sc, const Globals& g) {
  const auto ov = g.overrides();
  const io::Format fmt = ov.format.value_or(sc.output.format);
  const auto path = ov.out ? ov.out : sc.output.path;
  run::emit(res, fmt, path, std::cout);
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pointspec: spectral properties of Schroedinger operators with point interactions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--horizon", g.horizon, "index horizon for numeric tail probes")->check(CLI::Range(100L, 100000000L));
  app.add_option("--trunc", g.trunc, "truncation size of Jacobi matrices")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "tolerance (eigenvalues, probe extrapolation)")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1L, 256L));
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "output file, or directory for several results");

  std::string scenario, model_json;
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "scenario file (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--model", model_json, "model as inline JSON instead of a scenario file");
  };

  auto* run_cmd = app.add_subcommand("run", "run every command of a scenario file");
  run_cmd->add_option("scenario", scenario, "scenario file (JSON)")->required()->check(CLI::ExistingFile);

  auto* analyze_cmd = app.add_subcommand("analyze", "run all applicable criteria on the model");
  add_input(analyze_cmd);

  io::CommandOptions spec_opt;
  std::vector<double> window;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of a truncated boundary matrix");
  add_input(spectrum_cmd);
  spectrum_cmd->add_option("--matrix", spec_opt.matrix, "free, B1, B2, string or potential");
  spectrum_cmd->add_option("--window", window, "eigenvalue window lo hi")->expected(2);
  spectrum_cmd->add_option("--trace", spec_opt.trace, "section sizes for the lambda_min trace");

  std::vector<double> z;
  auto* deficiency_cmd = app.add_subcommand("deficiency", "growth of the two formal solutions at z");
  add_input(deficiency_cmd);
  deficiency_cmd->add_option("--matrix", spec_opt.matrix, "B1, B2, string or potential");
  deficiency_cmd->add_option("--z", z, "spectral parameter re im")->expected(2);
  deficiency_cmd->add_option("--n-max", spec_opt.n_max, "last index of the recurrence");

  auto* weyl_cmd = app.add_subcommand("weyl", "boundedness scan of a Weyl function family");
  add_input(weyl_cmd);
  weyl_cmd->add_option("--triplet", spec_opt.triplet,
                       "delta_raw, delta_regularized, mixed_raw, mixed_regularized, potential_raw, potential_regularized");
  weyl_cmd->add_option("--n-max", spec_opt.n_max, "number of intervals");
  weyl_cmd->add_option("--a", spec_opt.a, "step potential parameter");

  auto* string_cmd = app.add_subcommand("string", "Krein string of a delta-prime model");
  add_input(string_cmd);
  string_cmd->add_option("--rows", spec_opt.rows, "rows of the string table");

  std::string example_id;
  bool list = false;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "rerun a built-in worked example and compare verdicts");
  reproduce_cmd->add_option("example_id", example_id, "example id, or all");
  reproduce_cmd->add_flag("--list", list, "list example ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const io::Scenario sc = io::load_scenario(scenario);
      return finish(run::run_scenario(sc, g.overrides()), sc, g);
    }
    if (*reproduce_cmd) {
      if (list || example_id.empty()) {
        for (const auto& e : golden::registry()) std::cout << e.id << "  " << e.title << "\n";
        return list ? 0 : 1;
      }
      std::vector<std::string> ids = example_id == "all" ? golden::ids() : std::vector<std::string>{example_id};
      const AnalyzeSettings s{ProbeSettings{}, static_cast<unsigned>(g.jobs.value_or(1)), true};
      for (const auto& id : ids) golden::find(id);
      io::json out = io::json::array();
      bool ok = true;
      for (const auto& id : ids) {
        const auto r = golden::reproduce(id, s);
        ok = ok && r.ok();
        out.push_back(golden::to_json(r));
        std::cerr << id << ": " << (r.ok() ? "match" : "MISMATCH") << "\n";
      }
      const std::string text = (ids.size() == 1 ? out[0] : out).dump(2) + "\n";
      if (g.out) {
        std::ofstream f(*g.out, std::ios::binary);
        if (!f) throw DomainError("cannot write " + *g.out);
        f << text;
      } else {
        std::cout << text;
      }
      return ok ? 0 : 1;
    }

    io::Scenario sc = load(scenario, model_json);
    io::Command c;
    if (*analyze_cmd) c.name = "analyze";
    if (*spectrum_cmd) c.name = "spectrum";
    if (*deficiency_cmd) c.name = "deficiency";
    if (*weyl_cmd) c.name = "weyl";
    if (*string_cmd) c.name = "string";
    c.opt = spec_opt;
    if (window.size() == 2) {
      if (!(window[0] < window[1])) throw SchemaError("--window: expected lo < hi");
      c.opt.window = std::make_pair(window[0], window[1]);
    }
    if (z.size() == 2) c.opt.z = std::complex<double>(z[0], z[1]);
    sc.commands = {c};
    return finish(run::run_scenario(sc, g.overrides()), sc, g);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
  } catch (const PoleError& e) {
    std::cerr << "pole error: " << e.what() << "\n";
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return run::kError;
}
