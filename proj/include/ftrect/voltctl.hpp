#pragma once

#include <string>

#include "ftrect/errors.hpp"
#include "ftrect/plant.hpp"

namespace ftrect {

enum class LawVariant { literal, consistent };

const char* to_string(LawVariant v);
LawVariant law_variant_from_string(const std::string& name);

struct VoltageGains {
  int p = 5;
  int q = 3;
  double k1 = 1.0;
  double gamma = 0.5;
  double delta = 2.0;
  double eta = 1.0;
  double sigma = 1.0e4;
  double eps_rate = 1.0;
  LawVariant law = LawVariant::consistent;
  /// Optional sat(s / width) in place of sgn(s); 0 keeps the discontinuous law.
  double boundary_layer = 0.0;

  IssueList check() const;
  void validate() const { check().throw_if_any(); }
  /// k1 p / (c q), the factor multiplying the control in ds/dt.
  double surface_gain(double c) const { return k1 * p / (c * q); }
  double switching(double s) const;
};

struct VoltageLoopState {
  double z_tilde1 = 0.0;
  double z_tilde2 = 0.0;
  double s = 0.0;
  double p_v = 0.0;
};

struct VoltageCommand {
  double u = 0.0;
  double u_raw = 0.0;
  bool clamped = false;
};

/// Energy-like coordinate z = v_dc^2 / 2.
inline double energy_coordinate(double v_dc) { return 0.5 * v_dc * v_dc; }

double voltage_surface(double z_tilde1, double z_tilde2, const VoltageGains& gains);

/// Time to slide from z_tilde1(t0) to the origin on s = 0.
double sliding_phase_time(double z_tilde1_t0, const VoltageGains& gains);

VoltageCommand voltage_control(const VoltageLoopState& loop, double rho_hat, const VoltageGains& gains,
                               const PlantParams& params);

double reaching_time_bound(double s0, double rho_tilde0, const VoltageGains& gains);

}  // namespace ftrect
