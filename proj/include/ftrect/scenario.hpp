#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftrect/baselines.hpp"
#include "ftrect/currctl.hpp"
#include "ftrect/estimator.hpp"
#include "ftrect/plant.hpp"
#include "ftrect/profiles.hpp"
#include "ftrect/voltctl.hpp"

namespace ftrect {

/// Declared load-disturbance bounds |rho| <= delta, |d rho/dt| <= eps.
struct DisturbanceBounds {
  double delta = 1.0e4;
  double eps = 1.0e6;
};

struct CurrentRefPoint {
  double t = 0.0;
  double i_d = 0.0;
  double i_q = 0.0;
};

struct ReferenceSchedule {
  /// Piecewise-constant (t, V) DC-link setpoints.
  std::vector<std::pair<double, double>> v_dc{{0.0, 520.0}};
  /// Fixed dq current references; when present the voltage loop is bypassed.
  std::vector<CurrentRefPoint> currents;

  bool voltage_loop() const { return currents.empty(); }
  double v_dc_at(double t) const;
  Vec2 current_at(double t) const;
  std::vector<double> events() const;
};

struct InitialConditions {
  double v_dc = 520.0;
  Vec2 i = Vec2::Zero();
  double z_tilde1 = 0.0;
  double rho_hat = 0.0;
  Vec2 integral_acc = Vec2::Zero();
};

/// How the adaptation integrator reacts to the voltage-command clamp.
enum class AdaptationGuard {
  none,        // integrate unconditionally
  freeze,      // hold rho_hat while the clamp is active
  projection,  // hold only when the update pushes deeper into the clamp, and keep rho_hat in [0, p_v_base]
};

const char* to_string(AdaptationGuard g);
AdaptationGuard adaptation_guard_from_string(const std::string& name);

enum class EsoInit { measured, zero };

/// cascade: the current loop drives the dq plant. ideal: the currents follow their references
/// instantly, so the link receives exactly the commanded power (reduced-order voltage model).
enum class InnerLoop { cascade, ideal };

const char* to_string(InnerLoop m);
InnerLoop inner_loop_from_string(const std::string& name);

struct Scenario {
  std::string name = "scenario";
  std::string description;
  double horizon = 0.05;
  double dt = 1.0e-6;
  std::size_t decimation = 1;
  std::size_t control_divider = 1;

  PlantParams plant;
  GridProfile grid;
  LoadProfile load;
  DisturbanceBounds bounds;
  ReferenceSchedule reference;
  InitialConditions initial;

  Method controller = Method::proposed;
  std::optional<Method> current_controller;
  VoltageGains voltage;
  CurrentGains current;
  BaselineGains baseline;

  double p_v_base = 5000.0;
  RefInterpretation ref_interpretation = RefInterpretation::power;
  RhoTildeForm rho_tilde_form = RhoTildeForm::corrected;
  AdaptationGuard adaptation_guard = AdaptationGuard::projection;
  double eso_bandwidth = 500.0;
  EsoInit eso_init = EsoInit::measured;
  InnerLoop inner_loop = InnerLoop::cascade;

  Method inner_controller() const { return current_controller.value_or(controller); }
  std::size_t steps() const;
  IssueList check() const;
  void validate() const { check().throw_if_any(); }
};

}  // namespace ftrect
