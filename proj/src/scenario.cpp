#include "ftrect/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ftrect/runlog.hpp"

namespace ftrect {

const char* to_string(AdaptationGuard g) {
  switch (g) {
    case AdaptationGuard::none: return "none";
    case AdaptationGuard::freeze: return "freeze";
    case AdaptationGuard::projection: return "projection";
  }
  return "?";
}

AdaptationGuard adaptation_guard_from_string(const std::string& name) {
  for (auto g : {AdaptationGuard::none, AdaptationGuard::freeze, AdaptationGuard::projection}) {
    if (name == to_string(g)) return g;
  }
  throw std::invalid_argument("unknown adaptation guard '" + name + "'");
}

double ReferenceSchedule::v_dc_at(double t) const {
  auto it = std::upper_bound(v_dc.begin(), v_dc.end(), t, [](double time, const auto& p) { return time < p.first; });
  return it == v_dc.begin() ? v_dc.front().second : (it - 1)->second;
}

Vec2 ReferenceSchedule::current_at(double t) const {
  auto it = std::upper_bound(currents.begin(), currents.end(), t,
                             [](double time, const CurrentRefPoint& p) { return time < p.t; });
  const auto& p = it == currents.begin() ? currents.front() : *(it - 1);
  return {p.i_d, p.i_q};
}

std::vector<double> ReferenceSchedule::events() const {
  std::vector<double> out;
  if (voltage_loop()) {
    for (std::size_t k = 1; k < v_dc.size(); ++k) out.push_back(v_dc[k].first);
  } else {
    for (std::size_t k = 1; k < currents.size(); ++k) out.push_back(currents[k].t);
  }
  return out;
}

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

const char* to_string(InnerLoop m) { return m == InnerLoop::cascade ? "cascade" : "ideal"; }

InnerLoop inner_loop_from_string(const std::string& name) {
  if (name == "cascade") return InnerLoop::cascade;
  if (name == "ideal") return InnerLoop::ideal;
  throw std::invalid_argument("unknown inner loop '" + name + "' (expected cascade or ideal)");
}

IssueList Scenario::check() const {
  IssueList issues;
  issues.require(!name.empty(), "name", "must not be empty");
  issues.require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
  issues.require(std::isfinite(horizon) && horizon > 0.0 && horizon >= 10.0 * dt, "horizon", "must be > 0 and at least 10 dt");
  issues.require(decimation >= 1, "decimation", "must be >= 1");
  issues.require(control_divider >= 1, "control_divider", "must be >= 1");
  issues.merge(plant.check(), "plant");
  issues.merge(grid.check(), "grid");
  issues.merge(load.check(), "load");
  issues.merge(voltage.check(), "gains.voltage");
  issues.merge(current.check(), "gains.current");
  issues.merge(baseline.check(), "gains");
  issues.require(p_v_base > 0.0, "p_v_base", "must be > 0");
  issues.require(eso_bandwidth > 0.0, "eso_bandwidth", "must be > 0");
  issues.require(initial.v_dc > 0.0, "initial.v_dc", "must be > 0");
  issues.require(!reference.v_dc.empty(), "reference.v_dc", "at least one setpoint required");
  for (std::size_t k = 0; k < reference.v_dc.size(); ++k) {
    const auto path = "reference.v_dc[" + std::to_string(k) + "]";
    issues.require(reference.v_dc[k].second > 0.0, path, "setpoint must be > 0");
    if (k > 0) issues.require(reference.v_dc[k].first > reference.v_dc[k - 1].first, path, "times must increase");
  }
  for (std::size_t k = 1; k < reference.currents.size(); ++k) {
    issues.require(reference.currents[k].t > reference.currents[k - 1].t,
                   "reference.currents[" + std::to_string(k) + "]", "times must increase");
  }
  issues.require(bounds.delta >= 0.0, "disturbance.delta", "must be >= 0");
  issues.require(bounds.eps >= 0.0, "disturbance.eps", "must be >= 0");
  if (load.check().empty() && bounds.delta >= 0.0 && bounds.eps >= 0.0) {
    LoadProfile scheduled = load;
    scheduled.horizon = horizon;
    issues.merge(check_disturbance_bounds(scheduled, bounds.delta, bounds.eps, plant.v_dc_ref), "disturbance");
  }
  issues.require(steps() / decimation + 1 <= 50'000'000, "decimation", "log would exceed 5e7 rows");
  return issues;
}

const std::array<ColumnInfo, kColumnCount>& column_info() {
  static const std::array<ColumnInfo, kColumnCount> info{{
      {"t", "s"},
      {"v_dc", "V"},
      {"v_dc_ref", "V"},
      {"z_tilde1", "V^2*s"},
      {"z_tilde2", "V^2"},
      {"s_v", "V^2*s"},
      {"rho", "W"},
      {"rho_hat", "W"},
      {"rho_eso", "W"},
      {"rho_tilde_est", "W"},
      {"i_d", "A"},
      {"i_q", "A"},
      {"i_d_ref", "A"},
      {"i_q_ref", "A"},
      {"u_v", "1"},
      {"p_cmd", "W"},
      {"u_d", "1"},
      {"u_q", "1"},
      {"s_d", "A"},
      {"s_q", "A"},
      {"i_a", "A"},
      {"i_a_ref", "A"},
      {"clamp_v", "flag"},
      {"clamp_d", "flag"},
      {"clamp_q", "flag"},
  }};
  return info;
}

void RunLog::reserve(std::size_t n) {
  for (auto& col : data) col.reserve(n);
}

void RunLog::push(const std::array<double, kColumnCount>& row) {
  for (std::size_t k = 0; k < kColumnCount; ++k) data[k].push_back(row[k]);
}

}  // namespace ftrect
