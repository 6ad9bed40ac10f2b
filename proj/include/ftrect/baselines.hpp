#pragma once

#include <string>

#include "ftrect/errors.hpp"

namespace ftrect {

enum class Method { proposed, pi_pr, adaptive_sta, itsmc };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct PiGains {
  double kp = 0.01;
  double ki = 1.0;
};

struct StaGains {
  double alpha1 = 30.0;
  double alpha2 = 2.0;
};

/// Surface e + zeta int(e) + mu int(sig(e)^(q1/p1)), reaching law sigma fpow(s, q, p).
struct ItsmcGains {
  double zeta = 1.0;
  double mu = 1.0;
  double sigma = 0.5;
  int p = 5;
  int q = 3;
  double p1 = 1.0;
  double q1 = 2.0;
};

struct BaselineGains {
  PiGains pi_voltage{0.01, 1.0};
  PiGains pi_current{0.01, 1.0};
  StaGains sta_voltage{20.0, 4.0};
  StaGains sta_current{30.0, 2.0};
  // The voltage row lists no (p1, q1); a linear integral term stands in for it.
  ItsmcGains itsmc_voltage{1.0, 1.0, 0.5, 5, 3, 1.0, 1.0};
  ItsmcGains itsmc_current{1.0, 1.0, 0.5, 5, 3, 1.0, 2.0};

  IssueList check() const;
};

struct PiOutput {
  double output = 0.0;
  double integral = 0.0;
  bool saturated = false;
};

/// kp e + ki int(e), output limited to [lo, hi]; integration stops while the
/// output is saturated and the error would push it further out.
PiOutput pi_pr_step(double integral, double error, const PiGains& gains, double dt, double lo, double hi);

struct StaOutput {
  double u = 0.0;
  double v = 0.0;
};

/// u = -alpha1 |s|^(1/2) sgn(s) + v; v advanced by -alpha2 sgn(s) dt.
StaOutput sta_step(double s, double v, const StaGains& gains, double dt);

struct ItsmcState {
  double i1 = 0.0;  // int(e)
  double i2 = 0.0;  // int(sig(e)^(q1/p1))
};

struct ItsmcOutput {
  double surface = 0.0;
  /// Equivalent part zeta e + mu sig(e)^(q1/p1), in rate-of-error units.
  double equivalent = 0.0;
  /// Reaching part sigma fpow(surface, q, p).
  double reaching = 0.0;
  ItsmcState next;
};

ItsmcOutput itsmc_step(double error, const ItsmcState& state, const ItsmcGains& gains, double dt);

inline double itsmc_surface(double error, const ItsmcState& state, const ItsmcGains& g) {
  return error + g.zeta * state.i1 + g.mu * state.i2;
}

}  // namespace ftrect
