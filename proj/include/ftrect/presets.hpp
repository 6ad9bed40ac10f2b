#pragma once

#include <string>
#include <vector>

#include "ftrect/scenario.hpp"

namespace ftrect {

/// Voltage regulation from 510 V to 520 V under a 500 + 200 sin(2 pi 5 t) W load.
Scenario voltage_comparison();

/// Fixed dq references 1 A / 0 A with a resistive load that absorbs the matching power.
Scenario current_comparison();

/// Piecewise-constant load steps around 500 W for estimator comparisons.
Scenario estimation_steps();

/// Current tracking through a 60 -> 59 Hz ramp of the given duration.
Scenario frequency_ramp_scenario(double ramp_duration = 2.0);

/// Voltage and current loops in cascade at the setpoint with a constant resistive load.
Scenario chattering_constant_load();

/// Fixed current references over 0.5 s, the base for l and r sweeps.
Scenario parameter_robustness();

/// Starts at the setpoint with a matched load and a converged estimate.
Scenario equilibrium();

/// Name -> preset, in a fixed order.
std::vector<Scenario> all_presets();

}  // namespace ftrect
