#include "ftrect/currctl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftrect/math.hpp"

namespace ftrect {
namespace {

bool odd_positive(int n) { return n > 0 && n % 2 != 0; }

Vec2 fpow2(const Vec2& x, int a, int b) { return {fpow(x.x(), a, b), fpow(x.y(), a, b)}; }

}  // namespace

IssueList CurrentGains::check() const {
  IssueList issues;
  issues.require(odd_positive(p), "p", "must be an odd positive integer");
  issues.require(odd_positive(q), "q", "must be an odd positive integer");
  issues.require(p > q && p < 2 * q, "p", "p/q must lie in (1, 2)");
  issues.require(beta > 0.0 && std::isfinite(beta), "beta", "must be > 0");
  issues.require(eta > 0.0 && std::isfinite(eta), "eta", "must be > 0");
  issues.require(eps_bl > 0.0 && std::isfinite(eps_bl), "eps_bl", "must be > 0");
  issues.require(delta >= 0.0 && std::isfinite(delta), "delta", "must be >= 0");
  return issues;
}

const char* to_string(RefInterpretation r) { return r == RefInterpretation::power ? "power" : "literal"; }

RefInterpretation ref_interpretation_from_string(const std::string& name) {
  if (name == "power") return RefInterpretation::power;
  if (name == "literal") return RefInterpretation::literal;
  throw std::invalid_argument("unknown current reference interpretation '" + name + "'");
}

Vec2 current_refs(double u_voltage, double v_d, double p_v_base, RefInterpretation interp) {
  if (v_d == 0.0) throw std::invalid_argument("current_refs: v_d = 0");
  const double scale = interp == RefInterpretation::power ? p_v_base : 1.0;
  return {u_voltage * scale / v_d, 0.0};
}

Vec2 psi_term(const Vec2& i0, const Vec2& di0, const Vec2& v, const PlantParams& params) {
  const Vec2 j_i0(i0.y(), -i0.x());
  return -params.r * i0 + params.omega_g() * params.l * j_i0 + v - params.l * di0;
}

Vec2 current_surface(const Vec2& i_tilde, const Vec2& integral_acc, double beta) {
  return i_tilde + beta * integral_acc;
}

double terminal_time(double i_tilde0, double beta, int p, int q) {
  if (i_tilde0 == 0.0) return 0.0;
  const double ratio = static_cast<double>(q) / p;
  return p / (beta * (p - q)) * std::pow(std::abs(i_tilde0), 1.0 - ratio);
}

Eigen::VectorXd sat_vec(const Eigen::VectorXd& s, double eps_bl) {
  if (!(eps_bl > 0.0)) throw std::invalid_argument("sat_vec: eps_bl must be > 0");
  return s.unaryExpr([eps_bl](double x) { return sat(x / eps_bl); });
}

CurrentCommand current_control(const CurrentLoopState& loop, const Vec2& /*i*/, const Vec2& v, double v_dc,
                               const CurrentGains& gains, const PlantParams& params) {
  if (!(v_dc > 0.0)) throw std::invalid_argument("current_control: v_dc must be > 0");
  const Vec2& e = loop.i_tilde;
  const Vec2 j_e(e.y(), -e.x());
  const Vec2 psi = psi_term(loop.i_ref, loop.di_ref, v, params);
  const Vec2 reach(sat(loop.s.x() / gains.eps_bl), sat(loop.s.y() / gains.eps_bl));
  const Vec2 volts = -params.r * e + params.omega_g() * params.l * j_e + psi +
                     params.l * gains.beta * fpow2(e, gains.q, gains.p) + (gains.delta + gains.eta) * reach;
  CurrentCommand cmd;
  cmd.u_raw = volts / v_dc;
  cmd.u = cmd.u_raw.cwiseMax(-1.0).cwiseMin(1.0);
  cmd.clamped_d = std::abs(cmd.u_raw.x()) >= 1.0;
  cmd.clamped_q = std::abs(cmd.u_raw.y()) >= 1.0;
  return cmd;
}

CurrentReachingBound current_reaching_bound(double s0_norm, const CurrentGains& gains, const PlantParams& params) {
  constexpr double n = 2.0;
  CurrentReachingBound b;
  b.proof_form = params.l * s0_norm / (gains.eta * std::sqrt(n));
  b.displayed = params.l * gains.eps_bl / gains.eta;
  b.hypothesis_holds = s0_norm <= gains.eps_bl * std::sqrt(n);
  return b;
}

}  // namespace ftrect
