#include "ftrect/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <future>
#include <random>

#include "ftrect/engine.hpp"
#include "ftrect/math.hpp"

namespace ftrect {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PropertyCheck make_check(std::string name, Severity sev, bool ok, double measured, double bound, std::string detail = {}) {
  return {std::move(name), sev, ok ? Verdict::pass : Verdict::fail, measured, bound, std::move(detail)};
}

std::vector<double> norm_series(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = std::hypot(a[k], b[k]);
  return out;
}

double first_below(const std::vector<double>& t, const std::vector<double>& x, double tol) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (std::abs(x[k]) <= tol) return t[k];
  return kInf;
}

}  // namespace

const char* to_string(Severity s) { return s == Severity::required ? "REQUIRED" : "INFORMATIONAL"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::failed_by_construction: return "FAILED-BY-CONSTRUCTION";
    case Verdict::skipped: return "SKIPPED";
  }
  return "?";
}

bool BoundReport::required_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) {
    return c.severity != Severity::required || c.verdict == Verdict::pass || c.verdict == Verdict::skipped;
  });
}

const PropertyCheck* BoundReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json to_json(const BoundReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  for (const auto& c : report.checks) {
    arr.push_back({{"name", c.name},
                   {"severity", to_string(c.severity)},
                   {"verdict", to_string(c.verdict)},
                   {"measured", num(c.measured)},
                   {"bound", num(c.bound)},
                   {"detail", c.detail}});
  }
  return {{"checks", arr},
          {"lyapunov_samples", report.lyapunov_samples},
          {"lyapunov_violations", report.lyapunov_violations},
          {"required_pass", report.required_pass()}};
}

double first_hit_time(const std::vector<double>& t, const std::vector<double>& x, double tol) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::abs(x[k]) < tol) return t[k];
    if (k + 1 < x.size() && x[k] * x[k + 1] < 0.0) {
      const double w = x[k] / (x[k] - x[k + 1]);
      return t[k] + w * (t[k + 1] - t[k]);
    }
  }
  return kInf;
}

std::vector<double> lyapunov_series(const RunLog& log, double gamma) {
  const auto& s = log[Col::s_v];
  const auto& rho = log[Col::rho];
  const auto& rho_hat = log[Col::rho_hat];
  std::vector<double> v(log.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double e = rho[k] - rho_hat[k];
    v[k] = 0.5 * s[k] * s[k] + e * e / (2.0 * gamma);
  }
  return v;
}

double lyapunov_slack(double ds, double drho_tilde, double gamma) {
  return 0.5 * (ds * ds + drho_tilde * drho_tilde / gamma);
}

BoundReport verify_bounds(const RunLog& log, const Scenario& sc, const VerifyConfig& cfg) {
  BoundReport rep;
  if (log.size() < 2) {
    rep.checks.push_back({"log", Severity::required, Verdict::fail, 0.0, 0.0, "log has fewer than two samples"});
    return rep;
  }
  const auto& t = log[Col::t];
  const double slack_t = cfg.hit_slack_steps * sc.dt;

  if (log.voltage_loop && sc.controller == Method::proposed) {
    const double s0 = log[Col::s_v][0];
    const double rt0 = log[Col::rho][0] - log[Col::rho_hat][0];
    const double bound = reaching_time_bound(s0, rt0, sc.voltage);
    const double hit = first_hit_time(t, log[Col::s_v], cfg.tol_s);
    rep.checks.push_back(make_check("voltage_reaching_bound", Severity::required, hit <= bound + slack_t, hit, bound,
                                    "first |s_v| < tol_s against the voltage reaching-time bound"));

    const auto v = lyapunov_series(log, sc.voltage.gamma);
    const auto& s = log[Col::s_v];
    const auto& rho = log[Col::rho];
    const auto& rho_hat = log[Col::rho_hat];
    const auto& est = log[Col::rho_tilde_est];
    std::size_t cond_samples = 0, cond_violations = 0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      if (std::abs(s[k]) < cfg.lyapunov_tol_s) continue;
      const double e0 = rho[k] - rho_hat[k];
      const double ds = s[k + 1] - s[k];
      const double dr = (rho[k + 1] - rho_hat[k + 1]) - e0;
      const bool violated = v[k + 1] - v[k] > lyapunov_slack(ds, dr, sc.voltage.gamma) + 1e-12 * v[k];
      ++rep.lyapunov_samples;
      if (violated) ++rep.lyapunov_violations;
      if (sgn(est[k]) == sgn(e0)) {
        ++cond_samples;
        if (violated) ++cond_violations;
      }
    }
    auto share = [](std::size_t bad, std::size_t n) { return n ? 1.0 - static_cast<double>(bad) / n : 1.0; };
    const double frac = share(rep.lyapunov_violations, rep.lyapunov_samples);
    rep.checks.push_back(make_check("lyapunov_monotonicity", Severity::required, frac >= cfg.lyapunov_min_fraction,
                                    frac, cfg.lyapunov_min_fraction,
                                    std::to_string(rep.lyapunov_violations) + " violations in " +
                                        std::to_string(rep.lyapunov_samples) + " samples"));
    const double cfrac = share(cond_violations, cond_samples);
    rep.checks.push_back(make_check("lyapunov_monotonicity_sign_agreement", Severity::required,
                                    cfrac >= cfg.lyapunov_min_fraction, cfrac, cfg.lyapunov_min_fraction,
                                    std::to_string(cond_violations) + " violations in " + std::to_string(cond_samples) +
                                        " samples where the error estimate has the sign of the true error"));
  }

  if (sc.inner_controller() == Method::proposed) {
    const auto sn = norm_series(log[Col::s_d], log[Col::s_q]);
    const CurrentReachingBound b = current_reaching_bound(sn[0], sc.current, sc.plant);
    std::vector<double> sinf(sn.size());
    for (std::size_t k = 0; k < sn.size(); ++k)
      sinf[k] = std::max(std::abs(log[Col::s_d][k]), std::abs(log[Col::s_q][k]));
    const double s0_inf = sinf[0];
    const double layer_bound = sc.plant.l * std::max(0.0, s0_inf - sc.current.eps_bl) / sc.current.eta;
    const double layer_hit = first_below(t, sinf, sc.current.eps_bl);
    rep.checks.push_back(make_check("current_boundary_layer_entry", Severity::required,
                                    layer_hit <= layer_bound + slack_t, layer_hit, layer_bound,
                                    "entry into max|s_i| <= eps_bl"));

    const double hit = first_below(t, sn, cfg.tol_i);
    PropertyCheck printed = make_check("current_printed_bound", Severity::informational,
                                       hit <= b.proof_form + slack_t, hit, b.proof_form + slack_t,
                                       "first ||s_i|| < tol_i against l||s0||/(eta sqrt 2) + 2 dt; rests on the "
                                       "printed saturation inequality");
    if (!b.hypothesis_holds) {
      printed.verdict = Verdict::skipped;
      printed.detail += "; ||s0|| > eps sqrt 2";
    }
    rep.checks.push_back(printed);
  }
  return rep;
}

double first_passage_time(double x0, double k, int a, int b, double floor) {
  auto f = [&](double x) { return -k * fpow(x, a, b); };
  double x = x0;
  double t = 0.0;
  constexpr double rel = 2.0e-4;
  for (std::size_t n = 0; n < 100'000'000 && std::abs(x) >= floor; ++n) {
    const double h = rel * std::abs(x) / std::abs(f(x));
    const double k1 = f(x);
    const double k2 = f(x + 0.5 * h * k1);
    const double k3 = f(x + 0.5 * h * k2);
    const double k4 = f(x + h * k3);
    const double next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (next * x <= 0.0) return t + h * x / (x - next);
    x = next;
    t += h;
  }
  return t;
}

namespace {

Scenario with_horizon(Scenario sc, double horizon) {
  sc.horizon = horizon;
  sc.decimation = 1;
  return sc;
}

std::vector<std::pair<Scenario, RunResult>> run_batch(std::vector<Scenario> scenarios) {
  std::vector<std::future<RunResult>> jobs;
  for (const auto& sc : scenarios) jobs.push_back(std::async(std::launch::async, [&sc] { return run_scenario(sc); }));
  std::vector<std::pair<Scenario, RunResult>> out;
  for (std::size_t k = 0; k < scenarios.size(); ++k) out.emplace_back(scenarios[k], jobs[k].get());
  return out;
}

void voltage_reaching_randomized(const Scenario& base, const SuiteOptions& opt, std::mt19937_64& rng, BoundReport& rep) {
  std::uniform_real_distribution<double> v0(500.0, 540.0), zt1(-200.0, 200.0), rho0(0.0, 1000.0);
  std::vector<Scenario> batch;
  for (std::size_t n = 0; n < opt.randomized_runs; ++n) {
    Scenario sc = with_horizon(base, 0.1);
    sc.initial.v_dc = v0(rng);
    sc.initial.z_tilde1 = zt1(rng);
    sc.initial.rho_hat = rho0(rng);
    batch.push_back(sc);
  }
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  std::string worst, failed;
  for (const auto& [sc, r] : run_batch(batch)) {
    const BoundReport b = verify_bounds(r.log, sc, opt.verify);
    const PropertyCheck* c = b.find("voltage_reaching_bound");
    if (r.aborted || !c || c->verdict != Verdict::pass) {
      ++violations;
      failed += " [v0 " + std::to_string(sc.initial.v_dc) + " V, z1 " + std::to_string(sc.initial.z_tilde1) +
                ", rho_hat " + std::to_string(sc.initial.rho_hat) + " W]";
    }
    if (c && c->bound > 0.0 && c->measured / c->bound > worst_ratio) {
      worst_ratio = c->measured / c->bound;
      worst = "worst hit " + std::to_string(c->measured) + " s vs bound " + std::to_string(c->bound) + " s";
    }
  }
  rep.checks.push_back(make_check("voltage_reaching_randomized", Severity::required, violations == 0,
                                  static_cast<double>(violations), 0.0,
                                  std::to_string(opt.randomized_runs) + " initializations; " + worst + failed));

  Scenario nominal = with_horizon(base, 0.02);
  nominal.initial.v_dc = 505.0;
  Scenario halved = nominal;
  halved.voltage.eta *= 0.5;
  const auto runs = run_batch({nominal, halved});
  const BoundReport rn = verify_bounds(runs[0].second.log, nominal, opt.verify);
  const BoundReport rh = verify_bounds(runs[1].second.log, halved, opt.verify);
  const auto* a = rn.find("voltage_reaching_bound");
  const auto* h = rh.find("voltage_reaching_bound");
  const bool ok = a && h && h->verdict == Verdict::pass && h->bound >= a->bound;
  rep.checks.push_back(make_check("voltage_reaching_halved_eta", Severity::required, ok, h ? h->measured : kInf,
                                  h ? h->bound : 0.0,
                                  a ? "nominal eta: hit " + std::to_string(a->measured) + " s, bound " +
                                          std::to_string(a->bound) + " s"
                                    : "nominal run missing"));
}

void current_reaching_randomized(const Scenario& base, const SuiteOptions& opt, std::mt19937_64& rng, BoundReport& rep) {
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 2.0 * std::numbers::pi);
  const double r_max = base.current.eps_bl * std::numbers::sqrt2;
  std::vector<Scenario> batch;
  for (std::size_t n = 0; n < opt.randomized_runs; ++n) {
    Scenario sc = with_horizon(base, 0.005);
    sc.dt = std::min(sc.dt, 1.0e-6);
    const Vec2 ref = sc.reference.current_at(0.0);
    const double r = r_max * std::sqrt(radius(rng));
    const double a = angle(rng);
    sc.initial.i = ref + Vec2(r * std::cos(a), r * std::sin(a));
    sc.initial.integral_acc = Vec2::Zero();
    batch.push_back(sc);
  }
  std::size_t layer_fail = 0, printed_fail = 0;
  double worst_ratio = 0.0;
  for (const auto& [sc, res] : run_batch(batch)) {
    const BoundReport b = verify_bounds(res.log, sc, opt.verify);
    const auto* layer = b.find("current_boundary_layer_entry");
    const auto* printed = b.find("current_printed_bound");
    if (res.aborted || !layer || layer->verdict != Verdict::pass) ++layer_fail;
    if (printed && printed->verdict != Verdict::pass) ++printed_fail;
    if (printed && printed->bound > 0.0) worst_ratio = std::max(worst_ratio, printed->measured / printed->bound);
  }
  rep.checks.push_back(make_check("current_boundary_layer_randomized", Severity::required, layer_fail == 0,
                                  static_cast<double>(layer_fail), 0.0,
                                  std::to_string(opt.randomized_runs) + " initializations with ||s0|| <= eps sqrt 2"));
  rep.checks.push_back(make_check("current_printed_bound_randomized", Severity::informational, printed_fail == 0,
                                  static_cast<double>(printed_fail), 0.0,
                                  "worst measured/bound ratio " + std::to_string(worst_ratio) +
                                      "; inside the layer the surface decays exponentially"));
}

void sliding_times(BoundReport& rep) {
  struct G { int p, q; double k; double x0; };
  const G grid[] = {{5, 3, 1.0, 1.0},  {5, 3, 2.0, 1.0},  {7, 5, 1.0, 1.0},  {7, 5, 0.5, 10.0}, {9, 5, 1.0, 1.0},
                    {9, 7, 3.0, 100.0}, {5, 3, 0.25, 0.1}, {11, 7, 1.0, 1.0}, {13, 9, 2.0, 5.0}, {7, 5, 4.0, 1.0}};
  double worst7 = 0.0, worst23 = 0.0;
  for (const G& g : grid) {
    VoltageGains vg;
    vg.p = g.p;
    vg.q = g.q;
    vg.k1 = g.k;
    const double analytic7 = sliding_phase_time(g.x0, vg);
    const double numeric7 =
        first_passage_time(g.x0, std::pow(g.k, -static_cast<double>(g.q) / g.p), g.q, g.p, 1e-20 * g.x0);
    worst7 = std::max(worst7, std::abs(numeric7 - analytic7) / analytic7);

    const double analytic23 = terminal_time(g.x0, g.k, g.p, g.q);
    const double numeric23 = first_passage_time(g.x0, g.k, g.q, g.p, 1e-20 * g.x0);
    worst23 = std::max(worst23, std::abs(numeric23 - analytic23) / analytic23);
  }
  rep.checks.push_back(make_check("sliding_phase_time", Severity::required, worst7 <= 5e-3, worst7, 5e-3,
                                  "worst relative error over a 10-point gain grid"));
  rep.checks.push_back(make_check("terminal_time", Severity::required, worst23 <= 5e-3, worst23, 5e-3,
                                  "worst relative error over a 10-point gain grid"));
}

void filter_bound(BoundReport& rep) {
  struct Signal {
    const char* name;
    double eps;
    double (*z)(double);
    double (*dz)(double);
  };
  const Signal signals[] = {
      {"sinusoid", 400.0, [](double t) { return std::sin(20.0 * t); }, [](double t) { return 20.0 * std::cos(20.0 * t); }},
      {"quadratic", 10.0, [](double t) { return 5.0 * t * t; }, [](double t) { return 10.0 * t; }},
  };
  double worst_excess = -kInf;
  std::string where;
  for (const Signal& sig : signals) {
    for (double sigma : {50.0, 100.0, 500.0}) {
      const double dt = 1.0e-5;
      EstimatorState st = make_estimator(sig.z(0.0), sigma);
      double max_err = 0.0;
      for (std::size_t k = 1; k <= 100'000; ++k) {
        const double t = static_cast<double>(k) * dt;
        st = derivative_filter_step(st, sig.z(t), sigma, dt);
        if (t > 20.0 / sigma) max_err = std::max(max_err, std::abs(st.y - sig.dz(t)));
      }
      const double excess = max_err - filter_error_bound(sig.eps, sigma);
      if (excess > worst_excess) {
        worst_excess = excess;
        where = std::string(sig.name) + " at sigma " + std::to_string(sigma);
      }
    }
  }
  rep.checks.push_back(make_check("filter_error_bound", Severity::required, worst_excess <= 1e-4, worst_excess, 1e-4,
                                  "largest excess of |y - dz/dt| over eps/sigma (" + where + ")"));
}

void saturation_identity(std::mt19937_64& rng, BoundReport& rep) {
  std::uniform_real_distribution<double> u(-3.0, 3.0), e(0.05, 3.0);
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0.0;
  for (int n = 0; n < 100'000; ++n) {
    Eigen::VectorXd s(dim(rng));
    for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = u(rng);
    const double eps = e(rng);
    const double lhs = s.dot(sat_vec(s, eps));
    double rhs = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) rhs += std::min(s[k] * s[k] / eps, std::abs(s[k]));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rep.checks.push_back(make_check("saturation_identity", Severity::required, worst <= 1e-12, worst, 1e-12,
                                  "s^T sat(s/eps) = sum min(s_i^2/eps, |s_i|) on 1e5 random vectors"));

  Eigen::VectorXd s(1);
  s << 0.5;
  const double lhs = s.dot(sat_vec(s, 1.0));
  PropertyCheck c{"saturation_printed_bound", Severity::informational, Verdict::failed_by_construction, lhs,
                  s.norm(), "counterexample n=1, eps=1, s=0.5: s^T sat(s/eps) = 0.25 < ||s|| = 0.5"};
  if (!(lhs < s.norm())) c.verdict = Verdict::fail;
  rep.checks.push_back(c);
}

}  // namespace

BoundReport run_property_suite(const Scenario& voltage_base, const Scenario& current_base, const SuiteOptions& opt) {
  voltage_base.validate();
  current_base.validate();
  std::mt19937_64 rng(opt.seed);
  BoundReport rep;

  const RunResult base_run = run_scenario(voltage_base);
  BoundReport base = verify_bounds(base_run.log, voltage_base, opt.verify);
  for (auto& c : base.checks) {
    c.name = "cascade_" + c.name;
    if (c.name != "cascade_voltage_reaching_bound") c.severity = Severity::informational;
    rep.checks.push_back(c);
  }
  rep.lyapunov_samples = base.lyapunov_samples;
  rep.lyapunov_violations = base.lyapunov_violations;

  Scenario reduced = voltage_base;
  reduced.inner_loop = InnerLoop::ideal;
  reduced.decimation = 1;
  const RunResult reduced_run = run_scenario(reduced);
  for (auto c : verify_bounds(reduced_run.log, reduced, opt.verify).checks) {
    if (c.name.rfind("current_", 0) == 0) continue;
    if (c.name == "lyapunov_monotonicity") c.severity = Severity::informational;
    c.name = "reduced_" + c.name;
    rep.checks.push_back(c);
  }

  voltage_reaching_randomized(voltage_base, opt, rng, rep);
  current_reaching_randomized(current_base, opt, rng, rep);
  sliding_times(rep);
  filter_bound(rep);
  saturation_identity(rng, rep);
  return rep;
}

}  // namespace ftrect
