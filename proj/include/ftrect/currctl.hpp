#pragma once

#include <string>

#include <Eigen/Core>

#include "ftrect/errors.hpp"
#include "ftrect/plant.hpp"

namespace ftrect {

struct CurrentGains {
  int p = 5;
  int q = 3;
  double beta = 0.5;
  double delta = 2.0;
  double eta = 1.0;
  double eps_bl = 1.0;

  IssueList check() const;
  void validate() const { check().throw_if_any(); }
};

struct CurrentLoopState {
  Vec2 i_ref = Vec2::Zero();
  /// Reference derivative, from a one-step backward difference in the engine.
  Vec2 di_ref = Vec2::Zero();
  Vec2 i_tilde = Vec2::Zero();
  Vec2 integral_acc = Vec2::Zero();
  Vec2 s = Vec2::Zero();
};

struct CurrentCommand {
  Vec2 u = Vec2::Zero();
  Vec2 u_raw = Vec2::Zero();
  bool clamped_d = false;
  bool clamped_q = false;
};

enum class RefInterpretation { power, literal };

const char* to_string(RefInterpretation r);
RefInterpretation ref_interpretation_from_string(const std::string& name);

/// i_d* from the voltage-loop output; i_q* = 0. The power reading uses P* = u p_v_base.
Vec2 current_refs(double u_voltage, double v_d, double p_v_base = 1.0,
                  RefInterpretation interp = RefInterpretation::power);

/// psi = -r i0 + w l J i0 + v - l di0.
Vec2 psi_term(const Vec2& i0, const Vec2& di0, const Vec2& v, const PlantParams& params);

Vec2 current_surface(const Vec2& i_tilde, const Vec2& integral_acc, double beta);

/// Finite time for di/dt = -beta fpow(i, q, p) to reach zero from i0.
double terminal_time(double i_tilde0, double beta, int p, int q);

Eigen::VectorXd sat_vec(const Eigen::VectorXd& s, double eps_bl);

/// u = [(-r + w l J) i_tilde + psi + l beta fpow(i_tilde, q, p) + (delta + eta) sat(s/eps)] / v_dc,
/// with psi built from loop.i_ref and loop.di_ref. Components clamped to [-1, 1].
CurrentCommand current_control(const CurrentLoopState& loop, const Vec2& i, const Vec2& v, double v_dc,
                               const CurrentGains& gains, const PlantParams& params);

struct CurrentReachingBound {
  double proof_form = 0.0;  // l ||s0|| / (eta sqrt(n))
  double displayed = 0.0;   // l eps / eta
  bool hypothesis_holds = true;  // ||s0|| <= eps sqrt(n)
};

CurrentReachingBound current_reaching_bound(double s0_norm, const CurrentGains& gains, const PlantParams& params);

}  // namespace ftrect
