#include "ftrect/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ftrect/math.hpp"

namespace ftrect {
namespace {

struct GridSample {
  double f = 60.0;
  double v_d = 0.0;
};

GridSample grid_at(const Scenario& sc, double t) {
  GridSample g;
  g.f = sc.grid.frequency_at(t);
  g.v_d = std::numbers::sqrt2 * sc.grid.v_ll_at(t, sc.plant.v_ll_rms) / std::numbers::sqrt3;
  return g;
}

/// Controller-side model: nominal l, r, c with the measured grid frequency.
PlantParams controller_params(const Scenario& sc, double f) {
  PlantParams p = sc.plant;
  p.f_grid = f;
  return p;
}

PlantParams true_params(const Scenario& sc, double f) {
  PlantParams p = sc.plant;
  p.f_grid = f;
  p.l *= sc.grid.l_factor;
  p.r *= sc.grid.r_factor;
  return p;
}

Vec2 fpow2(const Vec2& x, int a, int b) { return {fpow(x.x(), a, b), fpow(x.y(), a, b)}; }

bool pushes_out(double raw, double lo, double hi, double direction) {
  return (raw >= hi && direction > 0.0) || (raw <= lo && direction < 0.0);
}

double voltage_command_raw(const Bundle& b, const Scenario& sc, double z_tilde2, double e_v, double& s_out) {
  const double p_v = sc.p_v_base;
  switch (sc.controller) {
    case Method::proposed: {
      const double s = voltage_surface(b[kZt1], z_tilde2, sc.voltage);
      s_out = s;
      const VoltageLoopState loop{b[kZt1], z_tilde2, s, p_v};
      return voltage_control(loop, b[kRhoHat], sc.voltage, sc.plant).u_raw;
    }
    case Method::pi_pr: {
      const auto& g = sc.baseline.pi_voltage;
      s_out = e_v;
      return g.kp * e_v + g.ki * b[kVolA];
    }
    case Method::adaptive_sta: {
      const double s = -z_tilde2;
      s_out = s;
      return sta_step(s, b[kVolA], sc.baseline.sta_voltage, 0.0).u / p_v;
    }
    case Method::itsmc: {
      const auto& g = sc.baseline.itsmc_voltage;
      const ItsmcOutput o = itsmc_step(z_tilde2, {b[kVolA], b[kVolB]}, g, 0.0);
      s_out = o.surface;
      return sc.plant.c * (o.equivalent + o.reaching) / p_v;
    }
  }
  return 0.0;
}

}  // namespace

Bundle initial_bundle(const Scenario& sc) {
  Bundle b;
  b[kId] = sc.initial.i.x();
  b[kIq] = sc.initial.i.y();
  b[kVdc] = sc.initial.v_dc;
  b[kTheta] = 0.0;
  b[kZt1] = sc.initial.z_tilde1;
  const double z0 = energy_coordinate(sc.initial.v_dc);
  b[kEtaF] = make_estimator(z0, sc.voltage.sigma).eta_f;
  b[kRhoHat] = sc.initial.rho_hat;
  if (sc.inner_controller() == Method::proposed) {
    b[kCurA] = sc.initial.integral_acc.x();
    b[kCurB] = sc.initial.integral_acc.y();
  }
  b[kEso1] = sc.eso_init == EsoInit::measured ? z0 : 0.0;
  // Both estimators start from the same disturbance guess.
  b[kEso2] = -sc.initial.rho_hat / sc.plant.c;
  return b;
}

HeldControl compute_control(const Bundle& b, const Scenario& sc, double t, const Vec2* prev_ref, double ref_dt) {
  HeldControl h;
  const GridSample g = grid_at(sc, t);
  const PlantParams cp = controller_params(sc, g.f);
  const Vec2 i(b[kId], b[kIq]);
  const double v_dc = b[kVdc];

  if (sc.reference.voltage_loop()) {
    const double v_ref = sc.reference.v_dc_at(t);
    const double z = energy_coordinate(v_dc);
    const double z_tilde2 = energy_coordinate(v_ref) - z;
    h.u_v_raw = voltage_command_raw(b, sc, z_tilde2, v_ref - v_dc, h.s_v);
    h.u_v = std::clamp(h.u_v_raw, 0.0, 1.0);
    h.clamp_v = h.u_v_raw <= 0.0 || h.u_v_raw >= 1.0;
    h.p_cmd = h.u_v * sc.p_v_base;
    h.i_ref = current_refs(h.u_v, g.v_d, sc.p_v_base, sc.ref_interpretation);
    if (sc.controller == Method::proposed) {
      const double y = b[kEtaF] + sc.voltage.sigma * z;
      h.rho_tilde_est = rho_tilde_estimate(y, h.u_v, sc.p_v_base, b[kRhoHat], sc.plant.c, sc.rho_tilde_form);
    }
  } else {
    h.i_ref = sc.reference.current_at(t);
  }
  h.di_ref = prev_ref ? Vec2((h.i_ref - *prev_ref) / ref_dt) : Vec2::Zero();

  const Vec2 e = i - h.i_ref;
  const Vec2 v(g.v_d, 0.0);
  Vec2 volts;
  switch (sc.inner_controller()) {
    case Method::proposed: {
      CurrentLoopState loop;
      loop.i_ref = h.i_ref;
      loop.di_ref = h.di_ref;
      loop.i_tilde = e;
      loop.integral_acc = Vec2(b[kCurA], b[kCurB]);
      loop.s = current_surface(e, loop.integral_acc, sc.current.beta);
      h.s_i = loop.s;
      const CurrentCommand cmd = current_control(loop, i, v, v_dc, sc.current, cp);
      h.u_dq = cmd.u;
      h.u_dq_raw = cmd.u_raw;
      h.clamp_d = cmd.clamped_d;
      h.clamp_q = cmd.clamped_q;
      return h;
    }
    case Method::pi_pr: {
      const auto& gp = sc.baseline.pi_current;
      volts = gp.kp * e + gp.ki * Vec2(b[kCurA], b[kCurB]);
      h.s_i = e;
      break;
    }
    case Method::adaptive_sta: {
      const auto& gs = sc.baseline.sta_current;
      const double ud = sta_step(e.x(), b[kCurA], gs, 0.0).u;
      const double uq = sta_step(e.y(), b[kCurB], gs, 0.0).u;
      volts = -cp.l * Vec2(ud, uq);
      h.s_i = e;
      break;
    }
    case Method::itsmc: {
      const auto& gi = sc.baseline.itsmc_current;
      const ItsmcOutput od = itsmc_step(e.x(), {b[kCurA], b[kCurC]}, gi, 0.0);
      const ItsmcOutput oq = itsmc_step(e.y(), {b[kCurB], b[kCurD]}, gi, 0.0);
      volts = cp.l * Vec2(od.equivalent + od.reaching, oq.equivalent + oq.reaching);
      h.s_i = Vec2(od.surface, oq.surface);
      break;
    }
  }
  const Vec2 j_e(e.y(), -e.x());
  const Vec2 decoupling = -cp.r * e + cp.omega_g() * cp.l * j_e + psi_term(h.i_ref, h.di_ref, v, cp);
  h.u_dq_raw = (decoupling + volts) / v_dc;
  h.u_dq = h.u_dq_raw.cwiseMax(-1.0).cwiseMin(1.0);
  h.clamp_d = std::abs(h.u_dq_raw.x()) >= 1.0;
  h.clamp_q = std::abs(h.u_dq_raw.y()) >= 1.0;
  return h;
}

Bundle bundle_rate(const Bundle& b, const Scenario& sc, const HeldControl& h, double t) {
  Bundle d;
  const GridSample g = grid_at(sc, t);
  const PlantParams tp = true_params(sc, g.f);
  const PlantState ps{Vec2(b[kId], b[kIq]), b[kVdc]};
  const double i_l = sc.load.current(t, ps.v_dc);
  if (sc.inner_loop == InnerLoop::ideal && sc.reference.voltage_loop()) {
    if (!std::isfinite(ps.v_dc) || ps.v_dc <= 0.0) throw SimulationAbort("ideal inner loop: v_dc is not positive");
    d[kVdc] = (h.p_cmd / ps.v_dc - i_l) / tp.c;
  } else {
    const PlantDerivative pd = plant_derivative(ps, h.u_dq, Vec2(g.v_d, 0.0), i_l, tp);
    d[kId] = pd.di.x();
    d[kIq] = pd.di.y();
    d[kVdc] = pd.dv_dc;
  }
  d[kTheta] = 2.0 * std::numbers::pi * g.f;

  if (sc.reference.voltage_loop()) {
    const double z = energy_coordinate(ps.v_dc);
    const double z_tilde2 = energy_coordinate(sc.reference.v_dc_at(t)) - z;
    d[kZt1] = z_tilde2;
    switch (sc.controller) {
      case Method::proposed: {
        const auto& vg = sc.voltage;
        d[kEtaF] = filter_rate(b[kEtaF], z, vg.sigma);
        const double y = b[kEtaF] + vg.sigma * z;
        const double s = voltage_surface(b[kZt1], z_tilde2, vg);
        const double est = rho_tilde_estimate(y, h.u_v, sc.p_v_base, b[kRhoHat], sc.plant.c, sc.rho_tilde_form);
        double rate = adaptation_rate(s, z_tilde2, est, vg, sc.plant);
        switch (sc.adaptation_guard) {
          case AdaptationGuard::none: break;
          case AdaptationGuard::freeze:
            if (h.clamp_v) rate = 0.0;
            break;
          case AdaptationGuard::projection:
            if (h.clamp_v && pushes_out(h.u_v_raw, 0.0, 1.0, rate)) rate = 0.0;
            if ((b[kRhoHat] >= sc.p_v_base && rate > 0.0) || (b[kRhoHat] <= 0.0 && rate < 0.0)) rate = 0.0;
            break;
        }
        d[kRhoHat] = rate;
        break;
      }
      case Method::pi_pr: {
        const double e_v = sc.reference.v_dc_at(t) - ps.v_dc;
        d[kVolA] = (h.clamp_v && pushes_out(h.u_v_raw, 0.0, 1.0, e_v)) ? 0.0 : e_v;
        break;
      }
      case Method::adaptive_sta:
        d[kVolA] = -sc.baseline.sta_voltage.alpha2 * sgn(-z_tilde2);
        break;
      case Method::itsmc: {
        const auto& gi = sc.baseline.itsmc_voltage;
        d[kVolA] = z_tilde2;
        d[kVolB] = sig_pow(z_tilde2, gi.q1 / gi.p1);
        break;
      }
    }
    const EsoRate er = eso_rate({b[kEso1], b[kEso2], sc.eso_bandwidth}, z, h.p_cmd / sc.plant.c);
    d[kEso1] = er.dz1;
    d[kEso2] = er.dz2;
  }

  if (sc.inner_loop == InnerLoop::ideal && sc.reference.voltage_loop()) return d;
  const Vec2 e = ps.i - h.i_ref;
  switch (sc.inner_controller()) {
    case Method::proposed: {
      const Vec2 r = fpow2(e, sc.current.q, sc.current.p);
      d[kCurA] = r.x();
      d[kCurB] = r.y();
      break;
    }
    case Method::pi_pr:
      d[kCurA] = (h.clamp_d && pushes_out(h.u_dq_raw.x(), -1.0, 1.0, e.x())) ? 0.0 : e.x();
      d[kCurB] = (h.clamp_q && pushes_out(h.u_dq_raw.y(), -1.0, 1.0, e.y())) ? 0.0 : e.y();
      break;
    case Method::adaptive_sta:
      d[kCurA] = -sc.baseline.sta_current.alpha2 * sgn(e.x());
      d[kCurB] = -sc.baseline.sta_current.alpha2 * sgn(e.y());
      break;
    case Method::itsmc: {
      const auto& gi = sc.baseline.itsmc_current;
      d[kCurA] = e.x();
      d[kCurB] = e.y();
      d[kCurC] = sig_pow(e.x(), gi.q1 / gi.p1);
      d[kCurD] = sig_pow(e.y(), gi.q1 / gi.p1);
      break;
    }
  }
  return d;
}

Bundle integrate_step(const Bundle& b, const Scenario& sc, const HeldControl& held, double t, double dt) {
  Bundle next = rk4_step(b, t, dt, [&](double tt, const Bundle& x) { return bundle_rate(x, sc, held, tt); });
  if (sc.reference.voltage_loop() && sc.controller == Method::proposed &&
      sc.adaptation_guard == AdaptationGuard::projection) {
    next[kRhoHat] = std::clamp(next[kRhoHat], 0.0, sc.p_v_base);
  }
  if (sc.inner_loop == InnerLoop::ideal && sc.reference.voltage_loop()) {
    next[kId] = held.i_ref.x();
    next[kIq] = held.i_ref.y();
  }
  return next;
}

namespace {

std::array<double, kColumnCount> log_row(const Bundle& b, const Scenario& sc, const HeldControl& h, double t) {
  std::array<double, kColumnCount> row{};
  auto set = [&row](Col c, double v) { row[static_cast<std::size_t>(c)] = v; };
  const double v_ref = sc.reference.v_dc_at(t);
  const double z_tilde2 = energy_coordinate(v_ref) - energy_coordinate(b[kVdc]);
  const Vec2 i(b[kId], b[kIq]);
  set(Col::t, t);
  set(Col::v_dc, b[kVdc]);
  set(Col::v_dc_ref, v_ref);
  set(Col::z_tilde1, b[kZt1]);
  set(Col::z_tilde2, z_tilde2);
  set(Col::s_v, h.s_v);
  set(Col::rho, sc.load.power(t, b[kVdc]));
  set(Col::rho_hat, b[kRhoHat]);
  set(Col::rho_eso, eso_estimate({b[kEso1], b[kEso2], sc.eso_bandwidth}, sc.plant.c));
  set(Col::rho_tilde_est, h.rho_tilde_est);
  set(Col::i_d, i.x());
  set(Col::i_q, i.y());
  set(Col::i_d_ref, h.i_ref.x());
  set(Col::i_q_ref, h.i_ref.y());
  set(Col::u_v, h.u_v);
  set(Col::p_cmd, h.p_cmd);
  set(Col::u_d, h.u_dq.x());
  set(Col::u_q, h.u_dq.y());
  set(Col::s_d, h.s_i.x());
  set(Col::s_q, h.s_i.y());
  set(Col::i_a, dq_to_abc(i, b[kTheta])[0]);
  set(Col::i_a_ref, dq_to_abc(h.i_ref, b[kTheta])[0]);
  set(Col::clamp_v, h.clamp_v ? 1.0 : 0.0);
  set(Col::clamp_d, h.clamp_d ? 1.0 : 0.0);
  set(Col::clamp_q, h.clamp_q ? 1.0 : 0.0);
  return row;
}

bool finite_bundle(const Bundle& b) {
  return std::all_of(b.x.begin(), b.x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const RunOptions& options) {
  sc.validate();
  Scenario scenario = sc;
  scenario.load.horizon = sc.horizon;

  RunResult result;
  const std::size_t n = scenario.steps();
  const std::size_t decimation = options.decimation ? options.decimation : scenario.decimation;
  const double dt = scenario.dt;
  result.log.sample_period = dt * static_cast<double>(decimation);
  result.log.voltage_loop = scenario.reference.voltage_loop();
  result.log.reserve(n / decimation + 2);

  Bundle b = initial_bundle(scenario);
  HeldControl held;
  Vec2 prev_ref = Vec2::Zero();
  bool have_ref = false;
  const double ctrl_dt = dt * static_cast<double>(scenario.control_divider);

  std::size_t k = 0;
  try {
    for (; k <= n; ++k) {
      const double t = static_cast<double>(k) * dt;
      if (k % scenario.control_divider == 0 || k == n) {
        held = compute_control(b, scenario, t, have_ref ? &prev_ref : nullptr, ctrl_dt);
        if (k < n) {
          prev_ref = held.i_ref;
          have_ref = true;
        }
      }
      if (k % decimation == 0) result.log.push(log_row(b, scenario, held, t));
      if (k == n) break;
      result.counters.clamp_voltage += held.clamp_v ? 1 : 0;
      result.counters.clamp_current += (held.clamp_d || held.clamp_q) ? 1 : 0;
      b = integrate_step(b, scenario, held, t, dt);
      if (!finite_bundle(b)) throw SimulationAbort("non-finite state after step at t = " + std::to_string(t));
      if (b[kVdc] <= 0.0) throw SimulationAbort("DC-link voltage collapsed to " + std::to_string(b[kVdc]) + " V");
      ++result.counters.steps;
    }
  } catch (const SimulationAbort& ex) {
    result.aborted = true;
    result.abort_reason = ex.what();
    result.abort_time = static_cast<double>(k) * dt;
  }

  std::vector<double> events = scenario.load.events();
  for (double e : scenario.reference.events()) events.push_back(e);
  std::sort(events.begin(), events.end());
  if (!result.log.empty()) result.metrics = compute_metrics(result.log, options.metrics, events);
  return result;
}

}  // namespace ftrect
