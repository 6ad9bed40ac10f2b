#include "ftrect/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "ftrect/math.hpp"

namespace ftrect {

EstimatorState make_estimator(double z0, double sigma, double rho_hat0) {
  EstimatorState st;
  st.eta_f = -sigma * z0;
  st.y = 0.0;
  st.rho_hat = rho_hat0;
  st.z = z0;
  return st;
}

EstimatorState derivative_filter_step(const EstimatorState& state, double z, double sigma, double dt) {
  if (!std::isfinite(z) || !std::isfinite(state.eta_f) || !std::isfinite(sigma) || !std::isfinite(dt)) {
    throw std::invalid_argument("derivative_filter_step: non-finite input");
  }
  if (dt <= 0.0 || sigma <= 0.0) throw std::invalid_argument("derivative_filter_step: dt and sigma must be > 0");
  const double a = std::exp(-sigma * dt);
  const double one_minus_a = -std::expm1(-sigma * dt);
  const double slope = (z - state.z) / dt;
  EstimatorState next = state;
  next.eta_f = a * state.eta_f - sigma * one_minus_a * state.z - slope * (sigma * dt - one_minus_a);
  next.z = z;
  next.y = next.eta_f + sigma * z;
  return next;
}

double filter_error_bound(double eps_rate, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("filter_error_bound: sigma must be > 0");
  return eps_rate / sigma;
}

const char* to_string(RhoTildeForm f) { return f == RhoTildeForm::literal ? "literal" : "corrected"; }

RhoTildeForm rho_tilde_form_from_string(const std::string& name) {
  if (name == "literal") return RhoTildeForm::literal;
  if (name == "corrected") return RhoTildeForm::corrected;
  throw std::invalid_argument("unknown rho_tilde form '" + name + "'");
}

double rho_tilde_estimate(double y, double u, double p_v, double rho_hat, double c, RhoTildeForm form) {
  const double corrected = u * p_v - c * y - rho_hat;
  return form == RhoTildeForm::corrected ? corrected : -corrected;
}

double adaptation_rate(double s, double z_tilde2, double rho_tilde_est, const VoltageGains& gains,
                       const PlantParams& params) {
  return gains.gamma * gains.surface_gain(params.c) * s * fpow(z_tilde2, gains.p - gains.q, gains.q) +
         (gains.eps_rate + 1.0) * sgn(rho_tilde_est);
}

double adapt_rho_step(double rho_hat, double s, double z_tilde2, double rho_tilde_est, const VoltageGains& gains,
                      const PlantParams& params, double dt, bool frozen) {
  if (frozen) return rho_hat;
  return rho_hat + dt * adaptation_rate(s, z_tilde2, rho_tilde_est, gains, params);
}

EsoRate eso_rate(const EsoState& state, double z_measured, double input) {
  const double w = state.bandwidth;
  const double e = z_measured - state.z1_hat;
  return {state.z2_hat + input + 2.0 * w * e, w * w * e};
}

EsoState eso_step(const EsoState& state, double z_measured, double input, double dt) {
  if (state.bandwidth <= 0.0) throw std::invalid_argument("eso_step: bandwidth must be > 0");
  auto shifted = [&](const EsoRate& k, double h) {
    EsoState s = state;
    s.z1_hat += h * k.dz1;
    s.z2_hat += h * k.dz2;
    return s;
  };
  const EsoRate k1 = eso_rate(state, z_measured, input);
  const EsoRate k2 = eso_rate(shifted(k1, 0.5 * dt), z_measured, input);
  const EsoRate k3 = eso_rate(shifted(k2, 0.5 * dt), z_measured, input);
  const EsoRate k4 = eso_rate(shifted(k3, dt), z_measured, input);
  EsoState next = state;
  next.z1_hat += dt / 6.0 * (k1.dz1 + 2.0 * k2.dz1 + 2.0 * k3.dz1 + k4.dz1);
  next.z2_hat += dt / 6.0 * (k1.dz2 + 2.0 * k2.dz2 + 2.0 * k3.dz2 + k4.dz2);
  return next;
}

}  // namespace ftrect
