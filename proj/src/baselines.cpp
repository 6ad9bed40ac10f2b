#include "ftrect/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ftrect/math.hpp"

namespace ftrect {
namespace {

void check_itsmc(IssueList& issues, const ItsmcGains& g, const std::string& path) {
  issues.require(g.zeta > 0.0, path + ".zeta", "must be > 0");
  issues.require(g.mu > 0.0, path + ".mu", "must be > 0");
  issues.require(g.sigma > 0.0, path + ".sigma", "must be > 0");
  issues.require(g.p > 0 && g.p % 2 != 0, path + ".p", "must be an odd positive integer");
  issues.require(g.q > 0 && g.q % 2 != 0 && g.q < g.p, path + ".q", "must be odd, positive and below p");
  issues.require(g.p1 > 0.0 && g.q1 > 0.0, path + ".p1", "p1 and q1 must be > 0");
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::proposed: return "proposed";
    case Method::pi_pr: return "pi_pr";
    case Method::adaptive_sta: return "adaptive_sta";
    case Method::itsmc: return "itsmc";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  for (auto m : {Method::proposed, Method::pi_pr, Method::adaptive_sta, Method::itsmc}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown controller '" + name + "' (expected proposed, pi_pr, adaptive_sta or itsmc)");
}

IssueList BaselineGains::check() const {
  IssueList issues;
  for (auto [g, path] : {std::pair{&pi_voltage, "pi_pr.voltage"}, std::pair{&pi_current, "pi_pr.current"}}) {
    issues.require(g->kp > 0.0 && g->ki > 0.0, path, "kp and ki must be > 0");
  }
  for (auto [g, path] : {std::pair{&sta_voltage, "adaptive_sta.voltage"}, std::pair{&sta_current, "adaptive_sta.current"}}) {
    issues.require(g->alpha1 > 0.0 && g->alpha2 > 0.0, path, "alpha1 and alpha2 must be > 0");
  }
  check_itsmc(issues, itsmc_voltage, "itsmc.voltage");
  check_itsmc(issues, itsmc_current, "itsmc.current");
  return issues;
}

PiOutput pi_pr_step(double integral, double error, const PiGains& gains, double dt, double lo, double hi) {
  PiOutput out;
  const double raw = gains.kp * error + gains.ki * integral;
  out.output = std::clamp(raw, lo, hi);
  out.saturated = raw > hi || raw < lo;
  const bool winding = (raw > hi && error > 0.0) || (raw < lo && error < 0.0);
  out.integral = winding ? integral : integral + error * dt;
  return out;
}

StaOutput sta_step(double s, double v, const StaGains& gains, double dt) {
  return {-gains.alpha1 * std::sqrt(std::abs(s)) * sgn(s) + v, v - gains.alpha2 * sgn(s) * dt};
}

ItsmcOutput itsmc_step(double error, const ItsmcState& state, const ItsmcGains& gains, double dt) {
  ItsmcOutput out;
  const double shaped = sig_pow(error, gains.q1 / gains.p1);
  out.surface = itsmc_surface(error, state, gains);
  out.equivalent = gains.zeta * error + gains.mu * shaped;
  out.reaching = gains.sigma * fpow(out.surface, gains.q, gains.p);
  out.next = {state.i1 + error * dt, state.i2 + shaped * dt};
  return out;
}

}  // namespace ftrect
