#include "ftrect/timeseries_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ftrect/errors.hpp"
#include "ftrect/scenario_io.hpp"

namespace ftrect {
namespace {

void put_double(std::string& buf, double v) {
  char tmp[32];
  const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
  buf.append(tmp, res.ptr);
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string timeseries_header() {
  std::string h;
  for (std::size_t k = 0; k < kColumnCount; ++k) {
    if (k) h += ',';
    h += column_info()[k].name;
    h += " [";
    h += column_info()[k].unit;
    h += ']';
  }
  return h;
}

void write_timeseries(std::ostream& out, const RunLog& log) {
  out << timeseries_header() << '\n';
  std::string line;
  for (std::size_t r = 0; r < log.size(); ++r) {
    line.clear();
    for (std::size_t k = 0; k < kColumnCount; ++k) {
      if (k) line += ',';
      put_double(line, log.data[k][r]);
    }
    line += '\n';
    out << line;
  }
}

void write_timeseries(const std::filesystem::path& path, const RunLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_timeseries(out, log);
}

RunLog read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({path.string() + ": cannot open"});
  std::string line;
  if (!std::getline(in, line) || line != timeseries_header()) {
    throw ValidationError({path.string() + ": header does not match the time-series schema"});
  }
  RunLog log;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::array<double, kColumnCount> vals{};
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t k = 0; k < kColumnCount; ++k) {
      const auto res = std::from_chars(p, end, vals[k]);
      if (res.ec != std::errc{}) throw ValidationError({path.string() + ": bad number on row " + std::to_string(row)});
      p = res.ptr;
      if (k + 1 < kColumnCount) {
        if (p == end || *p != ',') throw ValidationError({path.string() + ": short row " + std::to_string(row)});
        ++p;
      }
    }
    log.push(vals);
  }
  if (log.size() > 1) log.sample_period = log[Col::t][1] - log[Col::t][0];
  return log;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"convergence_time", finite_or_null(m.convergence_time)},
          {"rise_time", finite_or_null(m.rise_time)},
          {"ripple_pp", m.ripple_pp},
          {"steady_state_error", m.steady_state_error},
          {"chattering_amplitude", m.chattering_amplitude},
          {"control_energy", m.control_energy},
          {"overshoot", m.overshoot},
          {"tracking_rms", finite_or_null(m.tracking_rms)},
          {"converged", m.converged}};
}

nlohmann::json run_summary_json(const Scenario& sc, const RunResult& res) {
  nlohmann::json j;
  j["name"] = sc.name;
  j["controller"] = to_string(sc.controller);
  j["current_controller"] = to_string(sc.inner_controller());
  j["voltage_loop"] = res.metrics.voltage_loop;
  if (res.metrics.voltage_loop) j["voltage"] = metrics_to_json(res.metrics.voltage);
  j["current"] = metrics_to_json(res.metrics.current);
  j["aborted"] = res.aborted;
  if (res.aborted) {
    j["abort_reason"] = res.abort_reason;
    j["abort_time"] = res.abort_time;
  }
  j["counters"] = {{"steps", res.counters.steps},
                   {"clamp_voltage", res.counters.clamp_voltage},
                   {"clamp_current", res.counters.clamp_current}};
  j["samples"] = res.log.size();
  j["sample_period"] = res.log.sample_period;
  j["units"] = {{"convergence_time", "s"}, {"rise_time", "s"}, {"ripple_pp", "V or A"},
                {"steady_state_error", "V or A"}, {"chattering_amplitude", "1"}, {"control_energy", "s^0.5"},
                {"overshoot", "1"}, {"tracking_rms", "1"}};
  j["scenario"] = scenario_to_json(sc);
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace ftrect
