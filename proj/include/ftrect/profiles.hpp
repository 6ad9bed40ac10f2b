#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ftrect/errors.hpp"

namespace ftrect {

enum class LoadKind {
  constant_resistance,       // segments hold a resistance in ohm
  piecewise_constant_power,  // segments hold a power in W
  sinusoidal_power,          // offset + amplitude * sin(2 pi f t)
  current_squared,           // segments hold a load current in A; rho = i_l^2 * literal_r
};

const char* to_string(LoadKind kind);
LoadKind load_kind_from_string(const std::string& name);

struct LoadSegment {
  double start = 0.0;
  double value = 0.0;
};

struct LoadProfile {
  LoadKind kind = LoadKind::piecewise_constant_power;
  std::vector<LoadSegment> segments{{0.0, 500.0}};
  double amplitude = 0.0;
  double frequency = 0.0;
  double offset = 0.0;
  double literal_r = 1.0;
  double horizon = std::numeric_limits<double>::infinity();

  IssueList check() const;

  /// Disturbance power rho(t) in W. Only the resistive kind depends on v_dc.
  double power(double t, double v_dc) const;
  /// DC-side load current drawn from the link.
  double current(double t, double v_dc) const;
  /// d(rho)/dt inside a segment, holding v_dc fixed.
  double rate(double t, double v_dc) const;
  /// Segment switch times strictly inside the horizon.
  std::vector<double> events() const;
};

/// rho(t) for a profile; rejects t outside [0, horizon].
double load_disturbance(double t, const LoadProfile& profile, double v_dc = 520.0);

/// Dense-sampling check that |rho| <= delta and |d rho/dt| <= eps on the whole horizon.
IssueList check_disturbance_bounds(const LoadProfile& profile, double delta, double eps, double v_dc_nominal);

struct GridProfile {
  /// Piecewise-linear (t, Hz) breakpoints; held constant outside the listed span.
  std::vector<std::pair<double, double>> frequency{{0.0, 60.0}};
  /// Piecewise-constant (t, line-to-line RMS V); empty means the plant nominal.
  std::vector<std::pair<double, double>> amplitude;
  double l_factor = 1.0;
  double r_factor = 1.0;

  IssueList check() const;
  double frequency_at(double t) const;
  double v_ll_at(double t, double nominal) const;
};

/// Grid profile with a linear frequency ramp from f0 to f1 over [t0, t0 + duration].
GridProfile frequency_ramp(double f0, double f1, double t0, double duration);

}  // namespace ftrect
