#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ftrect/currctl.hpp"
#include "ftrect/engine.hpp"
#include "ftrect/estimator.hpp"
#include "ftrect/scenario_io.hpp"
#include "ftrect/timeseries_io.hpp"
#include "ftrect/voltctl.hpp"

using namespace ftrect;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Line {
  std::string criterion;
  bool pass = false;
  std::string detail;
};

std::string num(double x, int precision = 4) {
  if (!std::isfinite(x)) return "not reached";
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

std::string ms(double t) { return std::isfinite(t) ? num(t * 1e3) + " ms" : "not reached"; }

Scenario bundled(const std::string& name) { return load_scenario(fs::path(FTRECT_SCENARIO_DIR) / (name + ".json")); }

// Independent metric oracles over a run log.

double settle_time(const std::vector<double>& t, const std::vector<double>& x, const std::vector<double>& ref,
                   double band, double floor = 0.0) {
  for (std::size_t k = t.size(); k-- > 0;) {
    const double tol = std::max(band * std::abs(ref[k]), floor);
    if (std::abs(x[k] - ref[k]) > tol) return k + 1 < t.size() ? t[k + 1] : kInf;
  }
  return t.front();
}

double voltage_settle(const RunLog& log) { return settle_time(log[Col::t], log[Col::v_dc], log[Col::v_dc_ref], 0.01); }

double current_settle(const RunLog& log) {
  const auto& t = log[Col::t];
  std::vector<double> err(t.size()), zero(t.size(), 0.0);
  double ref_norm = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    err[k] = std::hypot(log[Col::i_d][k] - log[Col::i_d_ref][k], log[Col::i_q][k] - log[Col::i_q_ref][k]);
    ref_norm = std::max(ref_norm, std::hypot(log[Col::i_d_ref][k], log[Col::i_q_ref][k]));
  }
  return settle_time(t, err, zero, 0.0, 0.01 * ref_norm);
}

double rms_ratio(const std::vector<double>& t, const std::vector<double>& x, const std::vector<double>& ref, double t0,
                 double t1) {
  double num2 = 0.0, den2 = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t0 || t[k] > t1) continue;
    num2 += (x[k] - ref[k]) * (x[k] - ref[k]);
    den2 += ref[k] * ref[k];
  }
  return std::sqrt(num2 / den2);
}

RunResult run(const Scenario& sc) {
  RunResult r = run_scenario(sc);
  if (r.aborted) std::cerr << sc.name << " aborted: " << r.abort_reason << '\n';
  return r;
}

std::vector<RunResult> run_all(const std::vector<Scenario>& scenarios) {
  std::vector<std::future<RunResult>> jobs;
  for (const auto& sc : scenarios) jobs.push_back(std::async(std::launch::async, [&sc] { return run(sc); }));
  std::vector<RunResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

const std::vector<Method> kBaselines{Method::pi_pr, Method::adaptive_sta, Method::itsmc};

// Shared runs, computed once.

struct VoltageRuns {
  Scenario scenario;
  RunResult proposed;
  double wall_seconds = 0.0;
  std::vector<RunResult> baselines;
};

VoltageRuns& voltage_runs() {
  static VoltageRuns v = [] {
    VoltageRuns r;
    r.scenario = bundled("fig2_proposed");
    const auto start = std::chrono::steady_clock::now();
    r.proposed = run(r.scenario);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<Scenario> swaps;
    for (Method m : kBaselines) {
      Scenario sc = r.scenario;
      sc.controller = m;
      swaps.push_back(sc);
    }
    r.baselines = run_all(swaps);
    return r;
  }();
  return v;
}

Line voltage_convergence() {
  auto& v = voltage_runs();
  const double tc = voltage_settle(v.proposed.log);
  const bool ok = !v.proposed.aborted && tc <= 5e-3 && v.wall_seconds < 30.0;
  return {"Voltage convergence", ok,
          "enters and stays in +-1% of 520 V at " + ms(tc) + " (limit 5 ms), run time " + num(v.wall_seconds, 3) +
              " s (limit 30 s)"};
}

Line voltage_ordering() {
  auto& v = voltage_runs();
  const double tp = voltage_settle(v.proposed.log);
  bool ok = std::isfinite(tp);
  std::string detail = "proposed " + ms(tp);
  const double reported[] = {93.50, 74.19, 99.40};
  for (std::size_t k = 0; k < kBaselines.size(); ++k) {
    const double tb = voltage_settle(v.baselines[k].log);
    ok = ok && tb >= 3.0 * tp;
    const double imp = std::isfinite(tb) ? (tb - tp) / tb * 100.0 : 100.0;
    detail += "; " + std::string(to_string(kBaselines[k])) + " " + ms(tb) + " (ratio " +
              (std::isfinite(tb) ? num(tb / tp, 3) : std::string("inf")) + ", improvement " + num(imp, 4) +
              "%, reported " + num(reported[k], 4) + "%)";
  }
  return {"Baseline ordering, voltage", ok, detail + "; itsmc not reached within the 50 ms horizon counts as slower"};
}

Line current_convergence() {
  const Scenario base = bundled("fig5_current");
  std::vector<Scenario> scs;
  for (Method m : {Method::proposed, Method::adaptive_sta, Method::pi_pr, Method::itsmc}) {
    Scenario sc = base;
    sc.controller = m;
    scs.push_back(sc);
  }
  const auto runs = run_all(scs);
  std::vector<double> tc;
  for (const auto& r : runs) tc.push_back(current_settle(r.log));
  const auto& log = runs[0].log;
  double overshoot = 0.0;
  for (std::size_t k = 0; k < log.size(); ++k) overshoot = std::max(overshoot, log[Col::i_d][k] - log[Col::i_d_ref][k]);
  // Zero overshoot read as below a tenth of the 1% convergence band of the 1 A step.
  const bool zero_overshoot = overshoot < 1e-3;
  const bool ordered = tc[0] < tc[1] && tc[1] < tc[2] && tc[2] < tc[3];
  const bool ok = tc[0] <= 15e-3 && zero_overshoot && ordered;
  return {"Current convergence", ok,
          "proposed " + ms(tc[0]) + " (limit 15 ms), overshoot " + num(overshoot, 3) +
              " A (zero read as < 1e-3 A); ordering proposed < adaptive_sta < pi_pr < itsmc: " + ms(tc[0]) + " < " +
              ms(tc[1]) + " < " + ms(tc[2]) + " < " + ms(tc[3]) + (ordered ? "" : " NOT ordered") +
              " (reported 10/30/50/80 ms)"};
}

double first_hit(const std::vector<double>& t, const std::vector<double>& s, double tol) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::abs(s[k]) < tol) return t[k];
    if (k + 1 < s.size() && (s[k] > 0) != (s[k + 1] > 0) && s[k + 1] != 0.0) {
      return t[k] + s[k] / (s[k] - s[k + 1]) * (t[k + 1] - t[k]);
    }
  }
  return kInf;
}

double voltage_reaching_bound(double s0, double rho0, double gamma, double delta, double eta) {
  const double c = std::max(gamma, 1.0) /
                   (std::numbers::sqrt2 * std::min(gamma * (delta + eta), 1.0) * std::min(std::sqrt(gamma), 1.0));
  return c * std::sqrt(s0 * s0 + rho0 * rho0);
}

Line voltage_reaching() {
  Scenario base = bundled("fig2_proposed");
  base.horizon = 0.1;
  base.dt = 1e-6;
  base.decimation = 1;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> v0(495.0, 545.0), z1(-500.0, 500.0), rho0(0.0, 2000.0);
  std::vector<Scenario> scs;
  for (int n = 0; n < 20; ++n) {
    Scenario sc = base;
    sc.initial.v_dc = v0(rng);
    sc.initial.z_tilde1 = z1(rng);
    sc.initial.rho_hat = rho0(rng);
    scs.push_back(sc);
  }
  const auto runs = run_all(scs);
  int violations = 0;
  double worst = 0.0, worst_hit = 0.0;
  for (std::size_t n = 0; n < runs.size(); ++n) {
    const auto& log = runs[n].log;
    const auto& g = scs[n].voltage;
    const double bound = voltage_reaching_bound(log[Col::s_v][0], log[Col::rho][0] - log[Col::rho_hat][0], g.gamma, g.delta,
                                        g.eta);
    const double hit = first_hit(log[Col::t], log[Col::s_v], 1e-4);
    if (runs[n].aborted || !(hit <= bound + 2 * scs[n].dt)) ++violations;
    if (hit / bound > worst) {
      worst = hit / bound;
      worst_hit = hit;
    }
  }
  return {"Voltage reaching-time bound", violations == 0,
          "20 randomized initializations, " + std::to_string(violations) + " violations; latest hit " + ms(worst_hit) +
              ", worst hit/bound ratio " + num(worst, 3)};
}

Line current_reaching() {
  Scenario base = bundled("fig5_current");
  base.horizon = 5e-3;
  base.decimation = 1;
  const double eps = base.current.eps_bl, l = base.plant.l, eta = base.current.eta;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Scenario> scs;
  std::vector<double> norms;
  for (int n = 0; n < 20; ++n) {
    Scenario sc = base;
    const double r = eps * std::numbers::sqrt2 * std::sqrt(u(rng));
    const double a = 2.0 * std::numbers::pi * u(rng);
    const Vec2 ref(sc.reference.currents.front().i_d, sc.reference.currents.front().i_q);
    sc.initial.i = ref + Vec2(r * std::cos(a), r * std::sin(a));
    scs.push_back(sc);
    norms.push_back(r);
  }
  const auto runs = run_all(scs);
  int violations = 0, layer_entries = 0;
  double worst = 0.0;
  for (std::size_t n = 0; n < runs.size(); ++n) {
    const auto& log = runs[n].log;
    std::vector<double> sn(log.size());
    for (std::size_t k = 0; k < log.size(); ++k) sn[k] = std::hypot(log[Col::s_d][k], log[Col::s_q][k]);
    const double bound = l * norms[n] / (eta * std::numbers::sqrt2) + 2 * base.dt;
    const double hit = first_hit(log[Col::t], sn, 1e-4);
    if (!(hit <= bound)) ++violations;
    worst = std::max(worst, hit / bound);
    bool in_layer = false;
    for (std::size_t k = 0; k < log.size() && !in_layer; ++k) {
      in_layer = std::max(std::abs(log[Col::s_d][k]), std::abs(log[Col::s_q][k])) <= eps;
    }
    layer_entries += in_layer ? 1 : 0;
  }
  return {"Current reaching-time bound", violations == 0,
          std::to_string(violations) + " of 20 runs reach ||s|| < 1e-4 A after l||s0||/(eta sqrt 2) + 2 steps; worst ratio " +
              num(worst, 3) + "; boundary layer entered in " + std::to_string(layer_entries) +
              "/20 runs; inside |s_i| <= eps the law is linear in s, so s decays exponentially with time constant l eps/(delta+eta) = " +
              num(l * eps / (base.current.delta + eta) * 1e3, 3) + " ms and never reaches zero in finite time"};
}

Line sliding_times() {
  double worst = 0.0;
  int points = 0;
  const double k1s[] = {0.5, 1.0, 2.0, 4.0, 8.0};
  const double betas[] = {0.25, 0.5, 1.0, 2.0, 5.0};
  const std::pair<int, int> pqs[] = {{5, 3}, {7, 5}};
  for (int g = 0; g < 5; ++g) {
    const auto [p, q] = pqs[g % 2];
    const double r = static_cast<double>(q) / p;
    VoltageGains vg;
    vg.k1 = k1s[g];
    vg.p = p;
    vg.q = q;
    for (double z0 : {1.0, 1.0e4}) {
      const double numeric = oracle::passage_time(z0, std::pow(vg.k1, -r), r, 1e-12 * z0);
      worst = std::max(worst, std::abs(sliding_phase_time(z0, vg) - numeric) / numeric);
    }
    for (double i0 : {0.1, 32.0}) {
      const double numeric = oracle::passage_time(i0, betas[g], r, 1e-12 * i0);
      worst = std::max(worst, std::abs(terminal_time(i0, betas[g], p, q) - numeric) / numeric);
    }
    points += 2;
  }
  return {"Sliding-phase and terminal times", worst < 5e-3,
          std::to_string(points) + "-point gain grid, worst relative error " + num(worst, 3) + " (limit 0.5%)"};
}

Line filter_bound() {
  double worst_excess = -kInf;
  std::string where;
  const double dt = 1e-5;
  struct Signal {
    std::string name;
    std::function<double(double)> z, dz;
    double eps;
    double t_end;
  };
  const std::vector<Signal> signals{
      {"sinusoid", [](double t) { return 2.0 * std::sin(10.0 * t); }, [](double t) { return 20.0 * std::cos(10.0 * t); },
       200.0, 2.0},
      {"cubic", [](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; }, 12.0, 2.0},
  };
  for (const auto& sig : signals) {
    for (double sigma : {50.0, 100.0, 500.0}) {
      EstimatorState st = make_estimator(sig.z(0.0), sigma);
      const double e0 = std::abs(st.y - sig.dz(0.0));
      const double transient = std::log(std::max(e0, 1e-4) / 1e-5) / sigma;
      for (std::size_t k = 1; static_cast<double>(k) * dt <= sig.t_end; ++k) {
        const double t = static_cast<double>(k) * dt;
        st = derivative_filter_step(st, sig.z(t), sigma, dt);
        if (t < transient) continue;
        const double excess = std::abs(st.y - sig.dz(t)) - (sig.eps / sigma + 1e-4);
        if (excess > worst_excess) {
          worst_excess = excess;
          where = sig.name + " at sigma " + num(sigma, 3);
        }
      }
    }
  }
  return {"Derivative filter error bound", worst_excess <= 0.0,
          "sinusoid and cubic across sigma {50, 100, 500}; largest |y - dz/dt| - (eps/sigma + 1e-4) = " +
              num(worst_excess, 3) + " (" + where + ")"};
}

Line saturation_identity() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> x(-10.0, 10.0), e(0.05, 5.0);
  std::uniform_int_distribution<int> dim(1, 8);
  double worst = 0.0;
  for (int n = 0; n < 100000; ++n) {
    Eigen::VectorXd s(dim(rng));
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = x(rng);
    const double eps = e(rng);
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) rhs += std::min(s(i) * s(i) / eps, std::abs(s(i)));
    worst = std::max(worst, std::abs(s.dot(sat_vec(s, eps)) - rhs));
  }
  Eigen::VectorXd c(1);
  c << 0.5;
  const double lhs = c.dot(sat_vec(c, 1.0));
  const bool counterexample = lhs == 0.25 && lhs < c.norm();
  return {"Saturation identity", worst <= 1e-12 && counterexample,
          "identity worst deviation " + num(worst, 3) + " over 1e5 vectors; printed bound counterexample n=1, eps=1, s=0.5 gives " +
              num(lhs, 3) + " < " + num(c.norm(), 3) + " (INFORMATIONAL, failed by construction)"};
}

Line lyapunov() {
  auto& v = voltage_runs();
  const auto& log = v.proposed.log;
  const double gamma = v.scenario.voltage.gamma;
  const auto& s = log[Col::s_v];
  std::size_t samples = 0, violations = 0, agree = 0, agree_viol = 0;
  for (std::size_t k = 0; k + 1 < log.size(); ++k) {
    if (std::abs(s[k]) < 1e-4) continue;
    const double e0 = log[Col::rho][k] - log[Col::rho_hat][k];
    const double e1 = log[Col::rho][k + 1] - log[Col::rho_hat][k + 1];
    const double v0 = 0.5 * s[k] * s[k] + e0 * e0 / (2 * gamma);
    const double v1 = 0.5 * s[k + 1] * s[k + 1] + e1 * e1 / (2 * gamma);
    const double ds = s[k + 1] - s[k], de = e1 - e0;
    const bool bad = v1 - v0 > 0.5 * (ds * ds + de * de / gamma) + 1e-12 * v0;
    ++samples;
    violations += bad ? 1 : 0;
    if ((log[Col::rho_tilde_est][k] > 0) == (e0 > 0)) {
      ++agree;
      agree_viol += bad ? 1 : 0;
    }
  }
  const double frac = 1.0 - static_cast<double>(violations) / samples;
  const double afrac = 1.0 - static_cast<double>(agree_viol) / agree;
  return {"Lyapunov monotonicity", frac >= 0.999,
          num(frac * 100, 5) + "% of " + std::to_string(samples) +
              " samples non-increasing beyond the second-order step slack (limit 99.9%); " + num(afrac * 100, 5) +
              "% on the samples where the filtered error estimate has the sign of the true estimation error"};
}

double step_overshoot(const RunLog& log, Col est, const std::vector<std::pair<double, double>>& segs, double horizon) {
  const auto& t = log[Col::t];
  double worst = 0.0;
  double prev = log[est][0];
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double t0 = segs[j].first, t1 = j + 1 < segs.size() ? segs[j + 1].first : horizon;
    const double level = segs[j].second, step = level - prev;
    if (std::abs(step) > 1e-9) {
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t0 || t[k] >= t1) continue;
        worst = std::max(worst, (log[est][k] - level) * (step > 0 ? 1.0 : -1.0) / std::abs(step));
      }
    }
    prev = level;
  }
  return worst;
}

Line estimation() {
  const Scenario sc = bundled("fig2_estimation");
  const RunResult r = run(sc);
  const auto& log = r.log;
  const auto& t = log[Col::t];
  std::vector<std::pair<double, double>> segs;
  for (const auto& seg : sc.load.segments) segs.emplace_back(seg.start, seg.value);
  double worst_end = 0.0;
  std::string ends;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double t1 = j + 1 < segs.size() ? segs[j + 1].first : sc.horizon;
    std::size_t k = 0;
    while (k + 1 < t.size() && t[k + 1] < t1 - 1e-12) ++k;
    const double err = std::abs(log[Col::rho][k] - log[Col::rho_hat][k]);
    worst_end = std::max(worst_end, err);
    ends += (j ? ", " : "") + num(err, 3);
  }
  const double adaptive = step_overshoot(log, Col::rho_hat, segs, sc.horizon);
  const double eso = step_overshoot(log, Col::rho_eso, segs, sc.horizon);

  const auto& v = voltage_runs().proposed.log;
  double a_all = 0, e_all = 0, a_late = 0, e_late = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double ea = std::abs(v[Col::rho_hat][k] - v[Col::rho][k]);
    const double ee = std::abs(v[Col::rho_eso][k] - v[Col::rho][k]);
    a_all = std::max(a_all, ea);
    e_all = std::max(e_all, ee);
    if (v[Col::t][k] >= 0.02) {
      a_late = std::max(a_late, ea);
      e_late = std::max(e_late, ee);
    }
  }
  const bool ok = worst_end < 5.0 && adaptive < eso;
  return {"Disturbance estimation", ok,
          "|rho - rho_hat| at segment ends " + ends + " W (limit 5 W); peak step overshoot adaptive " +
              num(adaptive * 100, 4) + "% vs ESO " + num(eso * 100, 4) +
              "% of the step (must be strictly smaller); sinusoidal scenario peak |error| adaptive " + num(a_all, 4) +
              " W vs ESO " + num(e_all, 4) + " W over the run, " + num(a_late, 3) + " W vs " + num(e_late, 3) +
              " W from 20 ms on"};
}

Line robustness() {
  const Scenario ramp = bundled("fig6_frequency_ramp");
  const Scenario base = bundled("fig7_parameter_robustness");
  std::vector<Scenario> scs{ramp};
  for (double lf : {0.9, 1.0, 1.1}) {
    for (double rf : {0.9, 1.0, 1.1}) {
      Scenario sc = base;
      sc.grid.l_factor = lf;
      sc.grid.r_factor = rf;
      scs.push_back(sc);
    }
  }
  const auto runs = run_all(scs);
  const auto& rl = runs[0].log;
  const double ramp_err = rms_ratio(rl[Col::t], rl[Col::i_a], rl[Col::i_a_ref], 0.5, 2.5);
  double sweep_worst = 0.0;
  for (std::size_t n = 1; n < runs.size(); ++n) {
    const auto& l = runs[n].log;
    sweep_worst = std::max(sweep_worst, rms_ratio(l[Col::t], l[Col::i_a], l[Col::i_a_ref], 0.05, scs[n].horizon));
  }
  return {"Robustness", ramp_err < 0.05 && sweep_worst < 0.05,
          "phase-A RMS error during the 60 -> 59 Hz, 2 s ramp " + num(ramp_err * 100, 3) +
              "%; worst over the l, r in {0.9, 1.0, 1.1}x sweep " + num(sweep_worst * 100, 3) + "% (limit 5%)"};
}

double detrended_chatter(const RunLog& log) {
  const auto& t = log[Col::t];
  const std::size_t n = log.size();
  const double t_start = t.front() + 0.8 * (t.back() - t.front());
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (t[k] >= t_start) peak = std::max(peak, std::abs(log[Col::i_a_ref][k]));
  }
  std::vector<double> e(n);
  for (std::size_t k = 0; k < n; ++k) e[k] = (log[Col::i_a][k] - log[Col::i_a_ref][k]) / peak;
  const auto half = static_cast<std::size_t>(std::round(0.5e-3 / log.sample_period));
  double lo = kInf, hi = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (t[k] < t_start) continue;
    const std::size_t a = k >= half ? k - half : 0, b = std::min(n, k + half + 1);
    double mean = 0.0;
    for (std::size_t j = a; j < b; ++j) mean += e[j];
    mean /= static_cast<double>(b - a);
    lo = std::min(lo, e[k] - mean);
    hi = std::max(hi, e[k] - mean);
  }
  return hi - lo;
}

Line chattering() {
  const Scenario cascade = bundled("chattering_constant_load");
  Scenario fixed = bundled("fig5_current");
  fixed.horizon = 0.2;
  const auto runs = run_all({cascade, fixed});
  const double amp = detrended_chatter(runs[0].log);
  const double inner = detrended_chatter(runs[1].log);
  return {"Chattering", amp < 6e-3,
          "cascade at constant load: detrended normalized phase-A oscillation " + num(amp, 3) +
              " (limit 6e-3); current loop alone with fixed references " + num(inner, 3)};
}

bool bit_identical(const RunLog& a, const RunLog& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    if (std::memcmp(a.data[c].data(), b.data[c].data(), a.size() * sizeof(double)) != 0) return false;
  }
  std::ostringstream sa, sb;
  write_timeseries(sa, a);
  write_timeseries(sb, b);
  return sa.str() == sb.str();
}

struct Shift {
  double worst = 0.0;
  std::string name;
  std::vector<std::string> over;
};

void compare_metrics(const Metrics& a, const Metrics& b, const std::string& loop, double floor, Shift& s) {
  const std::pair<const char*, std::pair<double, double>> items[] = {
      {"convergence_time", {a.convergence_time, b.convergence_time}},
      {"rise_time", {a.rise_time, b.rise_time}},
      {"overshoot", {a.overshoot, b.overshoot}},
      {"ripple_pp", {a.ripple_pp, b.ripple_pp}},
      {"steady_state_error", {a.steady_state_error, b.steady_state_error}},
      {"chattering_amplitude", {a.chattering_amplitude, b.chattering_amplitude}},
      {"control_energy", {a.control_energy, b.control_energy}},
  };
  for (const auto& [name, vals] : items) {
    const auto [x, y] = vals;
    double rel = 0.0;
    if (std::isfinite(x) != std::isfinite(y)) {
      rel = kInf;
    } else if (std::isfinite(x) && std::abs(x - y) > floor) {
      rel = std::abs(x - y) / std::max(std::abs(x), std::abs(y));
    }
    const std::string label = loop + "." + name + " " + num(x, 6) + " -> " + num(y, 6);
    if (rel >= 5e-3) s.over.push_back(label);
    if (rel > s.worst) {
      s.worst = rel;
      s.name = label;
    }
  }
}

Line determinism() {
  auto& v = voltage_runs();
  const RunResult again = run(v.scenario);
  const bool identical = bit_identical(v.proposed.log, again.log);

  Scenario vh = v.scenario;
  vh.dt /= 2;
  vh.decimation *= 2;
  Scenario cur = bundled("fig5_current");
  Scenario ch = cur;
  ch.dt /= 2;
  ch.decimation *= 2;
  const auto runs = run_all({vh, cur, ch});
  Shift s;
  // Shifts below 1e-6 in the metric's own unit are treated as equal.
  compare_metrics(v.proposed.metrics.voltage, runs[0].metrics.voltage, "voltage", 1e-6, s);
  compare_metrics(runs[1].metrics.current, runs[2].metrics.current, "current", 1e-6, s);
  const double dv = std::abs(v.proposed.log[Col::v_dc].back() - runs[0].log[Col::v_dc].back());
  std::string over;
  for (const auto& o : s.over) over += (over.empty() ? "" : "; ") + o;
  return {"Determinism and step convergence", identical && s.worst < 5e-3,
          std::string(identical ? "reruns bit-identical" : "reruns DIFFER") + "; worst metric shift under dt halving " +
              num(s.worst * 100, 3) + "% (limit 0.5%)" + (over.empty() ? "" : ", over the limit: " + over) +
              "; final v_dc shift " + num(dv, 3) + " V"};
}

Line energy_fairness() {
  auto& v = voltage_runs();
  double lo = v.proposed.metrics.voltage.control_energy, hi = lo;
  std::string detail = "proposed " + num(lo, 3);
  for (std::size_t k = 0; k < kBaselines.size(); ++k) {
    const double e = v.baselines[k].metrics.voltage.control_energy;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    detail += ", " + std::string(to_string(kBaselines[k])) + " " + num(e, 3);
  }
  return {"Control energy within a factor of 2 (informational)", hi <= 2 * lo, detail + " s^0.5"};
}

}  // namespace

int main() {
  const std::vector<std::function<Line()>> primary{voltage_convergence, voltage_ordering, current_convergence, voltage_reaching,
                                                   current_reaching, sliding_times, filter_bound, saturation_identity, lyapunov, estimation,
                                                   robustness, chattering, determinism};
  int failed = 0;
  for (const auto& criterion : primary) {
    const Line line = criterion();
    failed += line.pass ? 0 : 1;
    std::cout << (line.pass ? "PASS  " : "FAIL  ") << line.criterion << ": " << line.detail << std::endl;
  }
  const Line info = energy_fairness();
  std::cout << (info.pass ? "INFO PASS  " : "INFO FAIL  ") << info.criterion << ": " << info.detail << std::endl;
  std::cout << primary.size() - failed << " of " << primary.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
