#include "ftrect/voltctl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ftrect/math.hpp"

namespace ftrect {
namespace {

bool odd_positive(int n) { return n > 0 && n % 2 != 0; }

}  // namespace

const char* to_string(LawVariant v) { return v == LawVariant::literal ? "literal" : "consistent"; }

LawVariant law_variant_from_string(const std::string& name) {
  if (name == "literal") return LawVariant::literal;
  if (name == "consistent") return LawVariant::consistent;
  throw std::invalid_argument("unknown law variant '" + name + "'");
}

IssueList VoltageGains::check() const {
  IssueList issues;
  issues.require(odd_positive(p), "p", "must be an odd positive integer");
  issues.require(odd_positive(q), "q", "must be an odd positive integer");
  issues.require(p > q && p < 2 * q, "p", "p/q must lie in (1, 2)");
  issues.require(k1 > 0.0 && std::isfinite(k1), "k1", "must be > 0");
  issues.require(gamma > 0.0 && std::isfinite(gamma), "gamma", "must be > 0");
  issues.require(eta > 0.0 && std::isfinite(eta), "eta", "must be > 0");
  issues.require(sigma > 0.0 && std::isfinite(sigma), "sigma", "must be > 0");
  issues.require(delta >= 0.0 && std::isfinite(delta), "delta", "must be >= 0");
  issues.require(eps_rate >= 0.0 && std::isfinite(eps_rate), "eps_rate", "must be >= 0");
  issues.require(boundary_layer >= 0.0 && std::isfinite(boundary_layer), "boundary_layer", "must be >= 0");
  return issues;
}

double VoltageGains::switching(double s) const {
  return boundary_layer > 0.0 ? sat(s / boundary_layer) : sgn(s);
}

double voltage_surface(double z_tilde1, double z_tilde2, const VoltageGains& gains) {
  return gains.k1 * fpow(z_tilde2, gains.p, gains.q) + z_tilde1;
}

double sliding_phase_time(double z_tilde1_t0, const VoltageGains& gains) {
  const double ratio = static_cast<double>(gains.q) / gains.p;
  return std::pow(gains.k1, ratio) * gains.p / (gains.p - gains.q) * std::pow(std::abs(z_tilde1_t0), 1.0 - ratio);
}

VoltageCommand voltage_control(const VoltageLoopState& loop, double rho_hat, const VoltageGains& gains,
                               const PlantParams& params) {
  if (loop.p_v == 0.0) throw std::invalid_argument("voltage_control: p_v = 0");
  const int p = gains.p, q = gains.q;
  const double scale = params.c * q / (gains.k1 * p);
  const double reach = (gains.delta + gains.eta) * gains.switching(loop.s);
  const double shaped = fpow(loop.z_tilde2, 2 * q - p, q);

  VoltageCommand cmd;
  if (gains.law == LawVariant::consistent) {
    cmd.u_raw = (scale * shaped + rho_hat + reach) / loop.p_v;
  } else {
    const double u_in = (fpow(loop.z_tilde2, p - q, q) - 1.0) * reach;
    cmd.u_raw = scale / loop.p_v * (shaped + reach) + rho_hat + u_in;
  }
  cmd.u = std::clamp(cmd.u_raw, 0.0, 1.0);
  cmd.clamped = cmd.u_raw <= 0.0 || cmd.u_raw >= 1.0;
  return cmd;
}

double reaching_time_bound(double s0, double rho_tilde0, const VoltageGains& gains) {
  const double num = std::max(gains.gamma, 1.0);
  const double den = std::numbers::sqrt2 * std::min(gains.gamma * (gains.delta + gains.eta), 1.0) *
                     std::min(std::sqrt(gains.gamma), 1.0);
  return num / den * std::hypot(s0, rho_tilde0);
}

}  // namespace ftrect
