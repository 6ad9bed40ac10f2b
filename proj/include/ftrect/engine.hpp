#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "ftrect/metrics.hpp"
#include "ftrect/runlog.hpp"
#include "ftrect/scenario.hpp"

namespace ftrect {

/// Slots of the coupled ODE state advanced by the integrator.
enum Slot : std::size_t {
  kId, kIq, kVdc, kTheta,
  kZt1, kEtaF, kRhoHat,
  kCurA, kCurB, kCurC, kCurD,  // current-loop integrators (d, q, d2, q2)
  kVolA, kVolB,                // voltage-loop baseline integrators
  kEso1, kEso2,
  kSlots
};

struct Bundle {
  std::array<double, kSlots> x{};
  double& operator[](std::size_t k) { return x[k]; }
  double operator[](std::size_t k) const { return x[k]; }
};

inline Bundle operator+(const Bundle& a, const Bundle& b) {
  Bundle r;
  for (std::size_t k = 0; k < kSlots; ++k) r.x[k] = a.x[k] + b.x[k];
  return r;
}

inline Bundle operator*(double s, const Bundle& a) {
  Bundle r;
  for (std::size_t k = 0; k < kSlots; ++k) r.x[k] = s * a.x[k];
  return r;
}

/// Controller outputs held over one integration step.
struct HeldControl {
  Vec2 u_dq = Vec2::Zero();
  Vec2 u_dq_raw = Vec2::Zero();
  double u_v = 0.0;
  double u_v_raw = 0.0;
  double p_cmd = 0.0;
  Vec2 i_ref = Vec2::Zero();
  Vec2 di_ref = Vec2::Zero();
  double s_v = 0.0;
  Vec2 s_i = Vec2::Zero();
  double rho_tilde_est = 0.0;
  bool clamp_v = false;
  bool clamp_d = false;
  bool clamp_q = false;
};

/// Generic classical RK4 step for x' = f(t, x).
template <class State, class F>
State rk4_step(const State& x, double t, double dt, F&& f) {
  const State k1 = f(t, x);
  const State k2 = f(t + 0.5 * dt, x + (0.5 * dt) * k1);
  const State k3 = f(t + 0.5 * dt, x + (0.5 * dt) * k2);
  const State k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Bundle initial_bundle(const Scenario& scenario);

/// Controller outputs from the state at time t. `prev_ref` feeds the backward difference of i*.
HeldControl compute_control(const Bundle& b, const Scenario& scenario, double t, const Vec2* prev_ref, double ref_dt);

/// Right-hand side of the coupled ODE with held controller outputs.
Bundle bundle_rate(const Bundle& b, const Scenario& scenario, const HeldControl& held, double t);

/// One RK4 step of the plant, filter, adaptation, surface integrators and ESO.
Bundle integrate_step(const Bundle& b, const Scenario& scenario, const HeldControl& held, double t, double dt);

struct RunCounters {
  std::size_t steps = 0;
  std::size_t clamp_voltage = 0;
  std::size_t clamp_current = 0;
};

struct RunResult {
  RunLog log;
  MetricsReport metrics;
  RunCounters counters;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
};

struct RunOptions {
  /// Overrides scenario.decimation when non-zero.
  std::size_t decimation = 0;
  MetricsConfig metrics;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace ftrect
