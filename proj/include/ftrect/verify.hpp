#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftrect/runlog.hpp"
#include "ftrect/scenario.hpp"

namespace ftrect {

enum class Severity { required, informational };
enum class Verdict { pass, fail, failed_by_construction, skipped };

const char* to_string(Severity s);
const char* to_string(Verdict v);

struct PropertyCheck {
  std::string name;
  Severity severity = Severity::required;
  Verdict verdict = Verdict::pass;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct VerifyConfig {
  /// Voltage-surface hit tolerance (V^2 s).
  double tol_s = 1.0e-4;
  /// Current-surface hit tolerance (A).
  double tol_i = 1.0e-4;
  /// Extra time allowed on a first-hit comparison, in integrator steps.
  double hit_slack_steps = 2.0;
  /// Samples with |s_v| below this are inside the origin neighbourhood and skipped by the Lyapunov count.
  double lyapunov_tol_s = 1.0e-4;
  /// Required share of non-increasing Lyapunov samples.
  double lyapunov_min_fraction = 0.999;
};

struct BoundReport {
  std::vector<PropertyCheck> checks;
  std::size_t lyapunov_samples = 0;
  std::size_t lyapunov_violations = 0;

  bool required_pass() const;
  const PropertyCheck* find(const std::string& name) const;
};

nlohmann::json to_json(const BoundReport& report);

/// First time |x| < tol, or the interpolated zero crossing if x changes sign first; infinity if neither.
double first_hit_time(const std::vector<double>& t, const std::vector<double>& x, double tol);

/// Lyapunov function 1/2 s^2 + rho_tilde^2 / (2 gamma) per sample.
std::vector<double> lyapunov_series(const RunLog& log, double gamma);

/// Allowed increase of V over one sample: 1/2 (ds^2 + drho_tilde^2 / gamma). V may rise by at most
/// this much while the sample-start state still points inward.
double lyapunov_slack(double ds, double drho_tilde, double gamma);

/// Reaching-time and Lyapunov checks on a finished run.
BoundReport verify_bounds(const RunLog& log, const Scenario& scenario, const VerifyConfig& config = {});

/// First-passage time of x' = -k fpow(x, a, b) from x0 to |x| < floor, by relative-step RK4.
double first_passage_time(double x0, double k, int a, int b, double floor = 1.0e-9);

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t randomized_runs = 20;
  VerifyConfig verify;
};

/// Full property suite: randomized reaching-time runs, sliding and terminal times, filter bound,
/// saturation identity, and the Lyapunov count on the base scenario.
BoundReport run_property_suite(const Scenario& voltage_base, const Scenario& current_base, const SuiteOptions& options);

}  // namespace ftrect
