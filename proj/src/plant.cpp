#include "ftrect/plant.hpp"

#include <cmath>
#include <string>

namespace ftrect {
namespace {

constexpr double kTwoThirdsPi = 2.0 * std::numbers::pi / 3.0;

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

}  // namespace

IssueList PlantParams::check() const {
  IssueList issues;
  issues.require(std::isfinite(l) && l > 0.0, "l", "must be > 0");
  issues.require(std::isfinite(r) && r >= 0.0, "r", "must be >= 0");
  issues.require(std::isfinite(c) && c > 0.0, "c", "must be > 0");
  issues.require(std::isfinite(f_grid) && f_grid > 0.0, "f_grid", "must be > 0");
  issues.require(std::isfinite(v_ll_rms) && v_ll_rms > 0.0, "v_ll_rms", "must be > 0");
  issues.require(std::isfinite(v_dc_ref) && v_dc_ref > 0.0, "v_dc_ref", "must be > 0");
  return issues;
}

PlantDerivative plant_derivative(const PlantState& state, const Vec2& u, const Vec2& v_dq, double i_l,
                                 const PlantParams& params) {
  if (!finite(state.i) || !std::isfinite(state.v_dc) || !finite(u) || !finite(v_dq) || !std::isfinite(i_l)) {
    throw SimulationAbort("plant_derivative: non-finite input");
  }
  if (state.v_dc <= 0.0) {
    throw SimulationAbort("plant_derivative: v_dc = " + std::to_string(state.v_dc) + " V is not positive");
  }
  const double w = params.omega_g();
  PlantDerivative d;
  // J i = (i_q, -i_d)
  const Vec2 coupling(state.i.y(), -state.i.x());
  d.di = (-params.r * state.i + w * params.l * coupling + v_dq - u * state.v_dc) / params.l;
  d.dv_dc = (u.dot(state.i) - i_l) / params.c;
  return d;
}

Vec2 abc_to_dq(const std::array<double, 3>& abc, double theta) {
  const double ca = std::cos(theta), cb = std::cos(theta - kTwoThirdsPi), cc = std::cos(theta + kTwoThirdsPi);
  const double sa = std::sin(theta), sb = std::sin(theta - kTwoThirdsPi), sc = std::sin(theta + kTwoThirdsPi);
  return {(2.0 / 3.0) * (abc[0] * ca + abc[1] * cb + abc[2] * cc),
          -(2.0 / 3.0) * (abc[0] * sa + abc[1] * sb + abc[2] * sc)};
}

std::array<double, 3> dq_to_abc(const Vec2& dq, double theta) {
  auto phase = [&](double shift) { return dq.x() * std::cos(theta + shift) - dq.y() * std::sin(theta + shift); };
  return {phase(0.0), phase(-kTwoThirdsPi), phase(kTwoThirdsPi)};
}

}  // namespace ftrect
