#include "ftrect/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ftrect {
namespace {

const LoadSegment& active_segment(const std::vector<LoadSegment>& segments, double t) {
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double time, const LoadSegment& seg) { return time < seg.start; });
  return it == segments.begin() ? segments.front() : *(it - 1);
}

bool uses_segments(LoadKind kind) { return kind != LoadKind::sinusoidal_power; }

}  // namespace

const char* to_string(LoadKind kind) {
  switch (kind) {
    case LoadKind::constant_resistance: return "constant_resistance";
    case LoadKind::piecewise_constant_power: return "piecewise_constant_power";
    case LoadKind::sinusoidal_power: return "sinusoidal_power";
    case LoadKind::current_squared: return "current_squared";
  }
  return "?";
}

LoadKind load_kind_from_string(const std::string& name) {
  for (auto kind : {LoadKind::constant_resistance, LoadKind::piecewise_constant_power, LoadKind::sinusoidal_power,
                    LoadKind::current_squared}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown load kind '" + name + "'");
}

IssueList LoadProfile::check() const {
  IssueList issues;
  if (uses_segments(kind)) {
    issues.require(!segments.empty(), "segments", "at least one segment required");
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto path = "segments[" + std::to_string(k) + "]";
      issues.require(std::isfinite(segments[k].start) && std::isfinite(segments[k].value), path, "non-finite entry");
      if (k == 0) {
        issues.require(segments[k].start == 0.0, path + ".start", "first segment must start at 0");
      } else {
        issues.require(segments[k].start > segments[k - 1].start, path + ".start", "segments must be strictly time-ordered");
      }
      if (kind == LoadKind::constant_resistance) {
        issues.require(segments[k].value > 0.0, path + ".value", "resistance must be > 0");
      }
    }
  } else {
    issues.require(std::isfinite(amplitude), "amplitude", "non-finite");
    issues.require(std::isfinite(offset), "offset", "non-finite");
    issues.require(std::isfinite(frequency) && frequency >= 0.0, "frequency", "must be >= 0");
  }
  if (kind == LoadKind::current_squared) {
    issues.require(std::isfinite(literal_r) && literal_r >= 0.0, "literal_r", "must be >= 0");
  }
  return issues;
}

double LoadProfile::power(double t, double v_dc) const {
  switch (kind) {
    case LoadKind::constant_resistance: return v_dc * v_dc / active_segment(segments, t).value;
    case LoadKind::piecewise_constant_power: return active_segment(segments, t).value;
    case LoadKind::sinusoidal_power: return offset + amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
    case LoadKind::current_squared: {
      const double i_l = active_segment(segments, t).value;
      return i_l * i_l * literal_r;
    }
  }
  return 0.0;
}

double LoadProfile::current(double t, double v_dc) const {
  switch (kind) {
    case LoadKind::constant_resistance: return v_dc / active_segment(segments, t).value;
    case LoadKind::current_squared: return active_segment(segments, t).value;
    default: return power(t, v_dc) / v_dc;
  }
}

double LoadProfile::rate(double t, double /*v_dc*/) const {
  if (kind == LoadKind::sinusoidal_power) {
    const double w = 2.0 * std::numbers::pi * frequency;
    return amplitude * w * std::cos(w * t);
  }
  return 0.0;
}

std::vector<double> LoadProfile::events() const {
  std::vector<double> out;
  if (!uses_segments(kind)) return out;
  for (std::size_t k = 1; k < segments.size(); ++k) {
    if (segments[k].start < horizon) out.push_back(segments[k].start);
  }
  return out;
}

double load_disturbance(double t, const LoadProfile& profile, double v_dc) {
  if (!(t >= 0.0 && t <= profile.horizon)) {
    throw std::out_of_range("load_disturbance: t = " + std::to_string(t) + " outside [0, horizon]");
  }
  return profile.power(t, v_dc);
}

IssueList check_disturbance_bounds(const LoadProfile& profile, double delta, double eps, double v_dc_nominal) {
  IssueList issues;
  const double horizon = std::isfinite(profile.horizon) ? profile.horizon : 1.0;
  constexpr int kSamples = 20001;
  double worst_rho = 0.0, worst_rate = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = horizon * k / (kSamples - 1);
    worst_rho = std::max(worst_rho, std::abs(profile.power(t, v_dc_nominal)));
    worst_rate = std::max(worst_rate, std::abs(profile.rate(t, v_dc_nominal)));
  }
  for (const auto& seg : profile.segments) {
    if (uses_segments(profile.kind) && seg.start <= horizon) {
      worst_rho = std::max(worst_rho, std::abs(profile.power(seg.start, v_dc_nominal)));
    }
  }
  if (profile.kind == LoadKind::sinusoidal_power) {
    worst_rho = std::max(worst_rho, std::abs(profile.offset) + std::abs(profile.amplitude));
    worst_rate = std::max(worst_rate, std::abs(profile.amplitude) * 2.0 * std::numbers::pi * profile.frequency);
  }
  issues.require(worst_rho <= delta * (1.0 + 1e-12), "delta",
                 "load reaches |rho| = " + std::to_string(worst_rho) + " W above the declared bound " + std::to_string(delta));
  issues.require(worst_rate <= eps * (1.0 + 1e-12), "eps",
                 "load reaches |d rho/dt| = " + std::to_string(worst_rate) + " W/s above the declared bound " + std::to_string(eps));
  return issues;
}

IssueList GridProfile::check() const {
  IssueList issues;
  issues.require(!frequency.empty(), "frequency", "at least one breakpoint required");
  for (std::size_t k = 0; k < frequency.size(); ++k) {
    const auto path = "frequency[" + std::to_string(k) + "]";
    issues.require(std::isfinite(frequency[k].first) && std::isfinite(frequency[k].second) && frequency[k].second > 0.0,
                   path, "breakpoint must be finite with a positive frequency");
    if (k > 0) issues.require(frequency[k].first > frequency[k - 1].first, path, "breakpoint times must increase");
  }
  for (std::size_t k = 0; k < amplitude.size(); ++k) {
    const auto path = "amplitude[" + std::to_string(k) + "]";
    issues.require(amplitude[k].second > 0.0, path, "voltage must be > 0");
    if (k > 0) issues.require(amplitude[k].first > amplitude[k - 1].first, path, "times must increase");
  }
  issues.require(l_factor >= 0.5 && l_factor <= 1.5, "l_factor", "must lie in [0.5, 1.5]");
  issues.require(r_factor >= 0.5 && r_factor <= 1.5, "r_factor", "must lie in [0.5, 1.5]");
  return issues;
}

double GridProfile::frequency_at(double t) const {
  if (t <= frequency.front().first) return frequency.front().second;
  if (t >= frequency.back().first) return frequency.back().second;
  auto hi = std::upper_bound(frequency.begin(), frequency.end(), t,
                             [](double time, const auto& bp) { return time < bp.first; });
  auto lo = hi - 1;
  const double a = (t - lo->first) / (hi->first - lo->first);
  return lo->second + a * (hi->second - lo->second);
}

double GridProfile::v_ll_at(double t, double nominal) const {
  if (amplitude.empty() || t < amplitude.front().first) return nominal;
  auto it = std::upper_bound(amplitude.begin(), amplitude.end(), t,
                             [](double time, const auto& bp) { return time < bp.first; });
  return (it - 1)->second;
}

GridProfile frequency_ramp(double f0, double f1, double t0, double duration) {
  GridProfile grid;
  grid.frequency = {{0.0, f0}};
  if (t0 > 0.0) grid.frequency.emplace_back(t0, f0);
  grid.frequency.emplace_back(t0 + duration, f1);
  return grid;
}

}  // namespace ftrect
