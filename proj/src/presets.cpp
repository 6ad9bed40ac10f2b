#include "ftrect/presets.hpp"

namespace ftrect {

Scenario voltage_comparison() {
  Scenario sc;
  sc.name = "fig2_proposed";
  sc.description = "DC-link regulation 510 -> 520 V under a 5 Hz sinusoidal load around 500 W";
  sc.horizon = 0.05;
  sc.dt = 1.0e-7;
  sc.decimation = 100;
  sc.load.kind = LoadKind::sinusoidal_power;
  sc.load.segments.clear();
  sc.load.offset = 500.0;
  sc.load.amplitude = 200.0;
  sc.load.frequency = 5.0;
  sc.bounds = {1000.0, 1.0e4};
  sc.voltage.eps_rate = 1.0e5;
  sc.initial.v_dc = 510.0;
  sc.current_controller = Method::proposed;
  return sc;
}

Scenario current_comparison() {
  Scenario sc;
  sc.name = "fig5_current";
  sc.description = "dq current tracking of 1 A / 0 A with a resistive DC load";
  sc.horizon = 10.0;
  sc.dt = 1.0e-6;
  sc.decimation = 100;
  sc.reference.currents = {{0.0, 1.0, 0.0}};
  sc.load.kind = LoadKind::constant_resistance;
  sc.load.segments = {{0.0, 828.0}};
  sc.bounds = {1000.0, 1.0e4};
  sc.initial.v_dc = 520.0;
  return sc;
}

Scenario estimation_steps() {
  Scenario sc = voltage_comparison();
  sc.name = "fig2_estimation";
  sc.description = "Load steps 500 -> 700 -> 400 W with the voltage held at 520 V";
  sc.horizon = 0.15;
  sc.load.kind = LoadKind::piecewise_constant_power;
  sc.load.offset = 0.0;
  sc.load.amplitude = 0.0;
  sc.load.frequency = 0.0;
  sc.load.segments = {{0.0, 500.0}, {0.05, 700.0}, {0.1, 400.0}};
  sc.initial.v_dc = 520.0;
  sc.initial.rho_hat = 500.0;
  return sc;
}

Scenario frequency_ramp_scenario(double ramp_duration) {
  Scenario sc = current_comparison();
  sc.name = "fig6_frequency_ramp";
  sc.description = "Current tracking while the grid frequency ramps from 60 Hz to 59 Hz";
  sc.dt = 1.0e-5;
  sc.decimation = 10;
  sc.horizon = 0.5 + ramp_duration + 0.5;
  sc.grid = frequency_ramp(60.0, 59.0, 0.5, ramp_duration);
  return sc;
}

Scenario chattering_constant_load() {
  Scenario sc = voltage_comparison();
  sc.name = "chattering_constant_load";
  sc.description = "Cascade at the setpoint with a 540 ohm load; current references come from the voltage loop";
  sc.horizon = 0.2;
  sc.load.kind = LoadKind::constant_resistance;
  sc.load.offset = 0.0;
  sc.load.amplitude = 0.0;
  sc.load.frequency = 0.0;
  sc.load.segments = {{0.0, 540.0}};
  sc.initial.v_dc = 520.0;
  return sc;
}

Scenario parameter_robustness() {
  Scenario sc = current_comparison();
  sc.name = "fig7_parameter_robustness";
  sc.description = "Current tracking with plant l and r off nominal; sweep grid.l_factor and grid.r_factor";
  sc.horizon = 0.5;
  sc.dt = 1.0e-5;
  sc.decimation = 10;
  return sc;
}

Scenario equilibrium() {
  Scenario sc;
  sc.name = "equilibrium";
  sc.description = "Setpoint start with a matched constant load";
  sc.horizon = 0.02;
  sc.dt = 1.0e-6;
  sc.decimation = 10;
  sc.load.kind = LoadKind::piecewise_constant_power;
  sc.load.segments = {{0.0, 0.0}};
  sc.bounds = {1000.0, 1.0e4};
  sc.initial.v_dc = 520.0;
  sc.current_controller = Method::proposed;
  return sc;
}

std::vector<Scenario> all_presets() {
  return {voltage_comparison(),       current_comparison(),   estimation_steps(),
          frequency_ramp_scenario(), parameter_robustness(), chattering_constant_load(),
          equilibrium()};
}

}  // namespace ftrect
