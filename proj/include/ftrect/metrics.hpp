#pragma once

#include <limits>
#include <vector>

#include "ftrect/runlog.hpp"

namespace ftrect {

struct MetricsConfig {
  /// Convergence band as a fraction of the reference.
  double band = 0.01;
  /// Steady-state window is the final fraction of the horizon.
  double steady_fraction = 0.2;
  /// Samples within this many rise-times after an event are dropped from the steady window.
  double event_exclusion_rises = 3.0;
  /// Moving-average length used to detrend the chattering signal.
  double detrend_window = 1.0e-3;
  /// Floor on the current-reference magnitude used to scale the current band (A).
  double current_floor = 0.1;
};

struct Metrics {
  double convergence_time = 0.0;
  double rise_time = 0.0;
  double ripple_pp = 0.0;
  double steady_state_error = 0.0;
  double chattering_amplitude = 0.0;
  double control_energy = 0.0;
  double overshoot = 0.0;
  /// RMS of the phase-A error over RMS of the phase-A reference, from the convergence time on.
  double tracking_rms = 0.0;
  bool converged = true;
};

struct MetricsReport {
  bool voltage_loop = true;
  Metrics voltage;
  Metrics current;
};

inline constexpr double kNotReached = std::numeric_limits<double>::infinity();

/// Time after which |err| <= tol at every later sample; kNotReached if the last sample is out of band.
double convergence_time(const std::vector<double>& t, const std::vector<double>& err, const std::vector<double>& tol);

/// 10-90% rise time of x from x0 towards x_final with linear interpolation; kNotReached if 90% is never crossed.
double rise_time(const std::vector<double>& t, const std::vector<double>& x, double x0, double x_final);

/// Peak-to-peak of x over the index set.
double peak_to_peak(const std::vector<double>& x, const std::vector<std::size_t>& idx);

/// Indices of the steady window: final fraction of the record minus post-event exclusion zones.
std::vector<std::size_t> steady_window(const std::vector<double>& t, double fraction, const std::vector<double>& events,
                                       double exclusion);

/// Peak-to-peak of x minus its centred moving average over the index set.
double detrended_peak_to_peak(const std::vector<double>& x, const std::vector<std::size_t>& idx, std::size_t window);

/// rms(x - ref) / rms(ref) over samples from index `start`.
double relative_rms(const std::vector<double>& x, const std::vector<double>& ref, std::size_t start);

/// sqrt(sum(u^2) dt).
double energy_norm(const std::vector<double>& u, double dt);

MetricsReport compute_metrics(const RunLog& log, const MetricsConfig& config, const std::vector<double>& events = {});

}  // namespace ftrect
