#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <algorithm>

#include "ftrect/cli.hpp"
#include "ftrect/engine.hpp"
#include "ftrect/errors.hpp"
#include "ftrect/math.hpp"
#include "ftrect/presets.hpp"
#include "ftrect/scenario_io.hpp"
#include "ftrect/timeseries_io.hpp"
#include "ftrect/verify.hpp"
#include "ftrect/voltctl.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; the Python side uses the json module.
ftrect::Scenario parse_scenario(const std::string& text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ftrect::ValidationError({std::string("scenario: ") + e.what()});
  }
  doc = ftrect::with_defaults(doc);
  ftrect::apply_overrides(doc, overrides);
  return ftrect::scenario_from_json(doc);
}

py::dict run_json(const std::string& text, const std::vector<std::string>& overrides, std::size_t decimation) {
  const ftrect::Scenario sc = parse_scenario(text, overrides);
  ftrect::RunOptions options;
  options.decimation = decimation;
  ftrect::RunResult result;
  {
    py::gil_scoped_release release;
    result = ftrect::run_scenario(sc, options);
  }
  py::dict columns;
  const auto& info = ftrect::column_info();
  for (std::size_t k = 0; k < ftrect::kColumnCount; ++k) {
    const auto& v = result.log.data[k];
    py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), arr.mutable_data());
    columns[py::str(std::string(info[k].name))] = std::move(arr);
  }
  py::dict out;
  out["columns"] = columns;
  out["summary"] = ftrect::run_summary_json(sc, result).dump();
  out["aborted"] = result.aborted;
  out["abort_reason"] = result.abort_reason;
  return out;
}

std::string verify_json(const std::string& text, const std::vector<std::string>& overrides) {
  const ftrect::Scenario sc = parse_scenario(text, overrides);
  ftrect::RunResult result;
  ftrect::BoundReport report;
  {
    py::gil_scoped_release release;
    result = ftrect::run_scenario(sc);
    report = ftrect::verify_bounds(result.log, sc);
  }
  return ftrect::to_json(report).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the finite-time rectifier controller simulator.";

  // Leaked on purpose: the handles must outlive interpreter shutdown.
  static auto* validation_error = new py::exception<ftrect::ValidationError>(m, "ValidationError", PyExc_ValueError);
  static auto* simulation_abort = new py::exception<ftrect::SimulationAbort>(m, "SimulationAbort", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ftrect::ValidationError& e) {
      std::string msg;
      for (const auto& issue : e.issues()) msg += (msg.empty() ? "" : "\n") + issue;
      PyErr_SetString(validation_error->ptr(), msg.c_str());
    } catch (const ftrect::SimulationAbort& e) {
      PyErr_SetString(simulation_abort->ptr(), e.what());
    }
  });

  m.attr("EXIT_OK") = ftrect::kExitOk;
  m.attr("EXIT_PROPERTY_FAILURE") = ftrect::kExitPropertyFailure;
  m.attr("EXIT_VALIDATION") = ftrect::kExitValidation;
  m.attr("EXIT_ABORT") = ftrect::kExitAbort;

  m.def("fpow", &ftrect::fpow, py::arg("x"), py::arg("a"), py::arg("b"),
        "sign(x) |x|^(a/b) for odd b, x^(a/b) otherwise.");

  m.def("columns", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& c : ftrect::column_info()) out.emplace_back(std::string(c.name), std::string(c.unit));
    return out;
  }, "Time-series columns as (name, unit) pairs in file order.");

  m.def("timeseries_header", &ftrect::timeseries_header);

  m.def("presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& sc : ftrect::all_presets()) out.emplace_back(sc.name, ftrect::scenario_to_json(sc).dump());
    return out;
  }, "Built-in scenarios as (name, JSON text) pairs.");

  m.def("normalize_scenario", [](const std::string& text, const std::vector<std::string>& overrides) {
    return ftrect::scenario_to_json(parse_scenario(text, overrides)).dump();
  }, py::arg("scenario_json"), py::arg("overrides") = std::vector<std::string>{},
     "Validate a scenario and return it with every default filled in.");

  m.def("run", &run_json, py::arg("scenario_json"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("decimation") = 0,
        "Simulate a scenario; returns columns as arrays, the summary as JSON text and the abort state.");

  m.def("verify", &verify_json, py::arg("scenario_json"), py::arg("overrides") = std::vector<std::string>{},
        "Run a scenario and check the analytic bounds on its log; returns the report as JSON text.");

  m.def("sliding_phase_time", [](double z_tilde1, int p, int q, double k1) {
    ftrect::VoltageGains g;
    g.p = p;
    g.q = q;
    g.k1 = k1;
    g.validate();
    return ftrect::sliding_phase_time(z_tilde1, g);
  }, py::arg("z_tilde1"), py::arg("p") = 5, py::arg("q") = 3, py::arg("k1") = 1.0);
}
