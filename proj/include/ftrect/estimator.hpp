#pragma once

#include <string>

#include "ftrect/plant.hpp"
#include "ftrect/voltctl.hpp"

namespace ftrect {

struct EstimatorState {
  double eta_f = 0.0;
  double y = 0.0;
  double rho_hat = 0.0;
  /// Last filtered sample of z, used by the first-order-hold discretization.
  double z = 0.0;
};

/// Starts the filter at rest: eta_f(0) = -sigma z(0) so y(0) = 0.
EstimatorState make_estimator(double z0, double sigma, double rho_hat0 = 0.0);

/// Continuous filter right-hand side d(eta_f)/dt = -sigma eta_f - sigma^2 z.
inline double filter_rate(double eta_f, double z, double sigma) { return -sigma * eta_f - sigma * sigma * z; }

/// Advances the filter exactly for a z that is linear between the previous sample and `z`.
EstimatorState derivative_filter_step(const EstimatorState& state, double z, double sigma, double dt);

/// Steady filter error bound eps / sigma for |z''| <= eps.
double filter_error_bound(double eps_rate, double sigma);

enum class RhoTildeForm { corrected, literal };

const char* to_string(RhoTildeForm f);
RhoTildeForm rho_tilde_form_from_string(const std::string& name);

/// Error estimate u p_v - c y - rho_hat (corrected) or c y - u p_v + rho_hat (literal).
double rho_tilde_estimate(double y, double u, double p_v, double rho_hat, double c,
                          RhoTildeForm form = RhoTildeForm::corrected);

/// d(rho_hat)/dt = gamma k1 p/(c q) s fpow(z2, p - q, q) + (eps + 1) sgn(rho_tilde_est).
double adaptation_rate(double s, double z_tilde2, double rho_tilde_est, const VoltageGains& gains,
                       const PlantParams& params);

double adapt_rho_step(double rho_hat, double s, double z_tilde2, double rho_tilde_est, const VoltageGains& gains,
                      const PlantParams& params, double dt, bool frozen = false);

struct EsoState {
  double z1_hat = 0.0;
  double z2_hat = 0.0;
  double bandwidth = 500.0;
};

struct EsoRate {
  double dz1 = 0.0;
  double dz2 = 0.0;
};

/// Linear ESO with observer poles at -bandwidth (gains 2 w, w^2).
EsoRate eso_rate(const EsoState& state, double z_measured, double input);

/// One RK4 step with measurement and input held over dt.
EsoState eso_step(const EsoState& state, double z_measured, double input, double dt);

/// Disturbance estimate in W: rho_eso = -c z2_hat.
inline double eso_estimate(const EsoState& state, double c) { return -c * state.z2_hat; }

}  // namespace ftrect
