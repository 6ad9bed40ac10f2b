#pragma once

#include <array>
#include <numbers>

#include <Eigen/Core>

#include "ftrect/errors.hpp"

namespace ftrect {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Rotation coupling J = [[0, 1], [-1, 0]].
inline Mat2 skew_j() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

struct PlantParams {
  double l = 0.5e-3;
  double r = 0.02;
  double c = 3300e-6;
  double f_grid = 60.0;
  double v_ll_rms = 400.0;
  double v_dc_ref = 520.0;

  double omega_g() const noexcept { return 2.0 * std::numbers::pi * f_grid; }
  /// d-axis grid voltage under amplitude-invariant alignment (peak phase voltage).
  double v_d() const noexcept { return std::numbers::sqrt2 * v_ll_rms / std::numbers::sqrt3; }

  IssueList check() const;
  void validate() const { check().throw_if_any(); }
};

struct PlantState {
  Vec2 i = Vec2::Zero();
  double v_dc = 0.0;
};

struct PlantDerivative {
  Vec2 di = Vec2::Zero();
  double dv_dc = 0.0;
};

/// Averaged dq rectifier:
///   l di/dt = -r i + w l J i + v - u v_dc
///   c dv_dc/dt = u.i - i_l
PlantDerivative plant_derivative(const PlantState& state, const Vec2& u, const Vec2& v_dq, double i_l,
                                 const PlantParams& params);

/// Amplitude-invariant Park transform; phase A aligned with the d axis at theta.
Vec2 abc_to_dq(const std::array<double, 3>& abc, double theta);
std::array<double, 3> dq_to_abc(const Vec2& dq, double theta);

}  // namespace ftrect
