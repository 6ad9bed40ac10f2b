#include "ftrect/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "ftrect/engine.hpp"
#include "ftrect/errors.hpp"
#include "ftrect/presets.hpp"
#include "ftrect/scenario_io.hpp"
#include "ftrect/timeseries_io.hpp"
#include "ftrect/verify.hpp"

namespace ftrect {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kMaxRows = 1'000'000;

struct Common {
  std::string scenario;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::size_t decimation = 0;
  bool full_rate = false;
};

std::size_t effective_decimation(const Scenario& sc, const Common& c) {
  if (c.full_rate) return 1;
  std::size_t d = c.decimation ? c.decimation : sc.decimation;
  while (sc.steps() / d + 1 > kMaxRows) ++d;
  return d;
}

std::string fmt_time(double t) {
  if (!std::isfinite(t)) return "not reached";
  std::ostringstream os;
  os << std::setprecision(4) << t * 1e3 << " ms";
  return os.str();
}

double improvement(double t_base, double t_prop) {
  if (!std::isfinite(t_base)) return std::isfinite(t_prop) ? 1.0 : 0.0;
  if (t_base <= 0.0) return 0.0;
  return (t_base - t_prop) / t_base;
}

void write_outputs(const fs::path& dir, const std::string& stem, const Scenario& sc, const RunResult& res) {
  fs::create_directories(dir);
  write_timeseries(dir / (stem + "_timeseries.csv"), res.log);
  write_json(dir / (stem + "_metrics.json"), run_summary_json(sc, res));
}

const Metrics& primary_metrics(const RunResult& r) {
  return r.metrics.voltage_loop ? r.metrics.voltage : r.metrics.current;
}

int cmd_run(const Common& c, std::ostream& out) {
  const json doc = load_scenario_document(c.scenario, c.overrides);
  const Scenario sc = scenario_from_json(doc);
  RunOptions opt;
  opt.decimation = effective_decimation(sc, c);
  const RunResult res = run_scenario(sc, opt);
  write_outputs(c.out_dir, sc.name, sc, res);
  const Metrics& m = primary_metrics(res);
  out << sc.name << ": controller " << to_string(sc.controller) << '/' << to_string(sc.inner_controller())
      << ", convergence " << fmt_time(m.convergence_time) << ", steady-state error " << m.steady_state_error << '\n';
  if (res.aborted) {
    out << "aborted at t = " << res.abort_time << " s: " << res.abort_reason << '\n';
    return kExitAbort;
  }
  return kExitOk;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  std::vector<std::string> issues;
  for (const auto& n : names) {
    try {
      out.push_back(method_from_string(n));
    } catch (const std::invalid_argument& ex) {
      issues.push_back(std::string("controllers: ") + ex.what());
    }
  }
  if (!issues.empty()) throw ValidationError(issues);
  return out;
}

int cmd_compare(const Common& c, const std::vector<std::string>& names, std::ostream& out) {
  const json doc = load_scenario_document(c.scenario, c.overrides);
  const Scenario base = scenario_from_json(doc);
  const std::vector<Method> methods = parse_methods(names);
  if (methods.size() < 2) throw ValidationError({"controllers: at least two are required"});

  std::vector<Scenario> variants;
  for (Method m : methods) {
    Scenario sc = base;
    if (sc.reference.voltage_loop()) {
      sc.controller = m;
    } else {
      sc.current_controller = m;
    }
    sc.validate();
    variants.push_back(sc);
  }
  RunOptions opt;
  opt.decimation = effective_decimation(base, c);
  std::vector<std::future<RunResult>> jobs;
  for (const auto& sc : variants) jobs.push_back(std::async(std::launch::async, [&sc, opt] { return run_scenario(sc, opt); }));
  std::vector<RunResult> results;
  for (auto& j : jobs) results.push_back(j.get());

  bool aborted = false;
  json table = json::array();
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const std::string stem = base.name + "_" + names[k] + (std::count(names.begin(), names.begin() + k, names[k]) ? "_" + std::to_string(k) : "");
    write_outputs(c.out_dir, stem, variants[k], results[k]);
    json row = run_summary_json(variants[k], results[k]);
    row.erase("scenario");
    row["method"] = names[k];
    table.push_back(row);
    aborted = aborted || results[k].aborted;
  }

  const double t_prop = primary_metrics(results[0]).convergence_time;
  json improvements = json::object();
  out << std::left << std::setw(14) << "controller" << std::setw(16) << "convergence" << std::setw(14) << "overshoot"
      << "improvement of " << names[0] << '\n';
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const Metrics& m = primary_metrics(results[k]);
    const double imp = improvement(m.convergence_time, t_prop);
    if (k > 0) improvements[names[k]] = imp * 100.0;
    std::ostringstream pct;
    if (k > 0) pct << std::fixed << std::setprecision(2) << imp * 100.0 << " %";
    out << std::left << std::setw(14) << names[k] << std::setw(16) << fmt_time(m.convergence_time) << std::setw(14)
        << m.overshoot << pct.str() << '\n';
  }
  json summary = {{"scenario", base.name},
                  {"loop", base.reference.voltage_loop() ? "voltage" : "current"},
                  {"reference_controller", names[0]},
                  {"runs", table},
                  {"improvement_percent", improvements}};
  write_json(fs::path(c.out_dir) / (base.name + "_compare.json"), summary);
  return aborted ? kExitAbort : kExitOk;
}

struct GridAxis {
  std::string key;
  std::vector<json> values;
};

GridAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError({"grid '" + spec + "': expected key=[v1, v2, ...]"});
  GridAxis axis{spec.substr(0, eq), {}};
  json values;
  try {
    values = json::parse(spec.substr(eq + 1));
  } catch (const json::parse_error&) {
    throw ValidationError({"grid " + axis.key + ": values must be a JSON array"});
  }
  if (!values.is_array()) throw ValidationError({"grid " + axis.key + ": values must be a JSON array"});
  if (values.empty()) throw ValidationError({"grid " + axis.key + ": range is empty"});
  for (const auto& v : values) axis.values.push_back(v);
  return axis;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& specs, std::ostream& out) {
  if (specs.empty()) throw ValidationError({"grid: at least one --grid axis is required"});
  std::vector<GridAxis> axes;
  for (const auto& s : specs) axes.push_back(parse_axis(s));
  const json base = load_scenario_document(c.scenario, c.overrides);

  std::vector<std::vector<std::size_t>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& p : points)
      for (std::size_t k = 0; k < axis.values.size(); ++k) {
        auto q = p;
        q.push_back(k);
        next.push_back(q);
      }
    points = next;
  }

  std::vector<Scenario> scenarios;
  for (const auto& p : points) {
    std::vector<std::string> ov;
    for (std::size_t a = 0; a < axes.size(); ++a) ov.push_back(axes[a].key + "=" + axes[a].values[p[a]].dump());
    json doc = base;
    apply_overrides(doc, ov);
    scenarios.push_back(scenario_from_json(doc));
  }

  RunOptions opt;
  std::vector<std::future<RunResult>> jobs;
  for (const auto& sc : scenarios) {
    RunOptions o = opt;
    o.decimation = effective_decimation(sc, c);
    jobs.push_back(std::async(std::launch::async, [&sc, o] { return run_scenario(sc, o); }));
  }

  fs::create_directories(c.out_dir);
  const std::string name = scenarios.front().name;
  std::ofstream csv(fs::path(c.out_dir) / (name + "_sweep.csv"));
  for (const auto& a : axes) csv << a.key << ',';
  csv << "convergence_time [s],overshoot [1],steady_state_error,tracking_rms [1],chattering_amplitude [1],aborted\n";
  bool aborted = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const RunResult r = jobs[k].get();
    const Metrics& m = primary_metrics(r);
    std::ostringstream line;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::string v = axes[a].values[points[k][a]].dump();
      if (v.find(',') != std::string::npos) v = "\"" + std::regex_replace(v, std::regex("\""), "\"\"") + "\"";
      line << v << ',';
    }
    line << m.convergence_time << ',' << m.overshoot << ',' << m.steady_state_error << ',' << r.metrics.current.tracking_rms
         << ',' << m.chattering_amplitude << ',' << (r.aborted ? 1 : 0);
    csv << line.str() << '\n';
    out << line.str() << '\n';
    aborted = aborted || r.aborted;
  }
  return aborted ? kExitAbort : kExitOk;
}

int cmd_verify(const Common& c, const std::string& current_path, std::uint64_t seed, std::size_t runs, std::ostream& out) {
  const Scenario vbase = c.scenario.empty() ? voltage_comparison()
                                            : scenario_from_json(load_scenario_document(c.scenario, c.overrides));
  const Scenario cbase = current_path.empty() ? current_comparison() : load_scenario(current_path);
  SuiteOptions opt;
  opt.seed = seed;
  opt.randomized_runs = runs;
  const BoundReport rep = run_property_suite(vbase, cbase, opt);
  for (const auto& chk : rep.checks) {
    out << std::left << std::setw(24) << to_string(chk.verdict) << std::setw(15) << to_string(chk.severity)
        << std::setw(46) << chk.name << "measured " << chk.measured << ", bound " << chk.bound;
    if (!chk.detail.empty()) out << "  (" << chk.detail << ')';
    out << '\n';
  }
  fs::create_directories(c.out_dir);
  json doc = to_json(rep);
  doc["seed"] = seed;
  write_json(fs::path(c.out_dir) / "verify_report.json", doc);
  out << (rep.required_pass() ? "all REQUIRED properties pass" : "REQUIRED property failure") << '\n';
  return rep.required_pass() ? kExitOk : kExitPropertyFailure;
}

int cmd_list(const std::string& dir, std::ostream& out) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      const Scenario sc = load_scenario(f);
      out << std::left << std::setw(28) << sc.name << f.filename().string() << "  " << sc.description << '\n';
    } catch (const std::exception& ex) {
      out << std::left << std::setw(28) << "(invalid)" << f.filename().string() << "  " << ex.what() << '\n';
    }
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool scenario_required) {
  auto* opt = sub->add_option("scenario", c.scenario, "Scenario file (JSON)");
  if (scenario_required) opt->required();
  opt->check(CLI::ExistingFile);
  sub->add_option("-o,--out", c.out_dir, "Output directory");
  sub->add_option("--override", c.overrides, "dotted.path=value (repeatable)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time sliding-mode rectifier simulator"};
  app.require_subcommand(1);
  Common c;
  std::vector<std::string> controllers{"proposed", "pi_pr", "adaptive_sta", "itsmc"};
  std::vector<std::string> grid;
  std::string current_path;
  std::uint64_t seed = 1;
  std::size_t runs = 20;
  std::string scenario_dir = FTRECT_SCENARIO_DIR;

  auto* run = app.add_subcommand("run", "Simulate one scenario and write its time series and metrics");
  add_common(run, c, true);
  run->add_option("--decimation", c.decimation, "Log every N-th integrator step");
  run->add_flag("--full-rate", c.full_rate, "Log every integrator step regardless of size");

  auto* compare = app.add_subcommand("compare", "Run one scenario under several controllers");
  add_common(compare, c, true);
  compare->add_option("--controllers", controllers, "Controllers; the first is the reference for improvements")
      ->delimiter(',');
  compare->add_option("--decimation", c.decimation, "Log every N-th integrator step");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a grid of overrides");
  add_common(sweep, c, true);
  sweep->add_option("--grid", grid, "dotted.path=[v1, v2, ...] (repeatable; cartesian product)");

  auto* verify = app.add_subcommand("verify", "Run the bound and property suite");
  add_common(verify, c, false);
  verify->add_option("--current-scenario", current_path, "Base scenario for current-loop checks")->check(CLI::ExistingFile);
  verify->add_option("--seed", seed, "Seed for randomized initializations");
  verify->add_option("--runs", runs, "Randomized initializations per reaching-bound check")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");
  list->add_option("--dir", scenario_dir, "Scenario directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(c, out);
    if (*compare) return cmd_compare(c, controllers, out);
    if (*sweep) return cmd_sweep(c, grid, out);
    if (*verify) return cmd_verify(c, current_path, seed, runs, out);
    if (*list) return cmd_list(scenario_dir, out);
  } catch (const ValidationError& e) {
    err << "validation failed:\n";
    for (const auto& issue : e.issues()) err << "  " << issue << '\n';
    return kExitValidation;
  } catch (const SimulationAbort& e) {
    err << "simulation aborted: " << e.what() << '\n';
    return kExitAbort;
  }
  return kExitValidation;
}

}  // namespace ftrect
