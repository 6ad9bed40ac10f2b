#include "ftrect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ftrect {

double convergence_time(const std::vector<double>& t, const std::vector<double>& err, const std::vector<double>& tol) {
  const std::size_t n = t.size();
  if (n == 0) return kNotReached;
  if (std::abs(err[n - 1]) > tol[n - 1]) return kNotReached;
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(err[k]) > tol[k]) return t[k + 1];
  }
  return t.front();
}

double rise_time(const std::vector<double>& t, const std::vector<double>& x, double x0, double x_final) {
  const double span = x_final - x0;
  if (span == 0.0) return 0.0;
  auto crossing = [&](double level) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double frac = (x[k] - x0) / span;
      if (frac >= level) {
        if (k == 0) return t[0];
        const double prev = (x[k - 1] - x0) / span;
        return t[k - 1] + (level - prev) / (frac - prev) * (t[k] - t[k - 1]);
      }
    }
    return kNotReached;
  };
  const double t10 = crossing(0.1);
  const double t90 = crossing(0.9);
  if (!std::isfinite(t90)) return kNotReached;
  return t90 - t10;
}

double peak_to_peak(const std::vector<double>& x, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  double lo = x[idx.front()], hi = lo;
  for (std::size_t k : idx) {
    lo = std::min(lo, x[k]);
    hi = std::max(hi, x[k]);
  }
  return hi - lo;
}

std::vector<std::size_t> steady_window(const std::vector<double>& t, double fraction, const std::vector<double>& events,
                                       double exclusion) {
  std::vector<std::size_t> idx;
  if (t.empty()) return idx;
  const double t_end = t.back();
  const double start = t.front() + (1.0 - fraction) * (t_end - t.front());
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < start) continue;
    const bool excluded = std::any_of(events.begin(), events.end(),
                                      [&](double e) { return t[k] >= e && t[k] < e + exclusion; });
    if (!excluded) idx.push_back(k);
  }
  return idx;
}

double detrended_peak_to_peak(const std::vector<double>& x, const std::vector<std::size_t>& idx, std::size_t window) {
  if (idx.empty()) return 0.0;
  const std::size_t n = x.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + x[k];
  const std::size_t half = window / 2;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t k : idx) {
    const std::size_t a = k >= half ? k - half : 0;
    const std::size_t b = std::min(n, k + half + 1);
    const double mean = (prefix[b] - prefix[a]) / static_cast<double>(b - a);
    const double r = x[k] - mean;
    if (first) {
      lo = hi = r;
      first = false;
    }
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

double energy_norm(const std::vector<double>& u, double dt) {
  const double sum = std::accumulate(u.begin(), u.end(), 0.0, [](double acc, double v) { return acc + v * v; });
  return std::sqrt(sum * dt);
}

namespace {

double overshoot_fraction(const std::vector<double>& x, const std::vector<double>& ref, double x0, double x_final) {
  const double span = x_final - x0;
  if (span == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    worst = std::max(worst, (x[k] - ref[k]) / span);
  }
  return worst;
}

double mean_over(const std::vector<double>& x, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k : idx) sum += x[k];
  return sum / static_cast<double>(idx.size());
}

double chattering(const RunLog& log, const std::vector<std::size_t>& idx, const MetricsConfig& cfg) {
  const auto& ia = log[Col::i_a];
  const auto& ia_ref = log[Col::i_a_ref];
  double peak = 0.0;
  for (std::size_t k : idx) peak = std::max(peak, std::abs(ia_ref[k]));
  if (peak < cfg.current_floor) peak = cfg.current_floor;
  std::vector<double> e(ia.size());
  for (std::size_t k = 0; k < ia.size(); ++k) e[k] = (ia[k] - ia_ref[k]) / peak;
  const auto window = static_cast<std::size_t>(std::max(1.0, std::round(cfg.detrend_window / log.sample_period)));
  return detrended_peak_to_peak(e, idx, window);
}

}  // namespace

double relative_rms(const std::vector<double>& x, const std::vector<double>& ref, std::size_t start) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = start; k < x.size(); ++k) {
    num += (x[k] - ref[k]) * (x[k] - ref[k]);
    den += ref[k] * ref[k];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

MetricsReport compute_metrics(const RunLog& log, const MetricsConfig& cfg, const std::vector<double>& events) {
  MetricsReport rep;
  rep.voltage_loop = log.voltage_loop;
  if (log.empty()) return rep;
  const auto& t = log[Col::t];
  const std::size_t n = log.size();
  const double dt = log.sample_period;

  {
    const auto& v = log[Col::v_dc];
    const auto& vr = log[Col::v_dc_ref];
    std::vector<double> err(n), tol(n), abs_err(n);
    for (std::size_t k = 0; k < n; ++k) {
      err[k] = v[k] - vr[k];
      tol[k] = cfg.band * std::abs(vr[k]);
      abs_err[k] = std::abs(err[k]);
    }
    Metrics& m = rep.voltage;
    m.convergence_time = convergence_time(t, err, tol);
    m.converged = std::isfinite(m.convergence_time);
    m.rise_time = rise_time(t, v, v.front(), vr.back());
    m.overshoot = overshoot_fraction(v, vr, v.front(), vr.back());
    const double excl = std::isfinite(m.rise_time) ? cfg.event_exclusion_rises * m.rise_time : 0.0;
    const auto idx = steady_window(t, cfg.steady_fraction, events, excl);
    m.ripple_pp = peak_to_peak(v, idx);
    m.steady_state_error = mean_over(abs_err, idx);
    m.chattering_amplitude = chattering(log, idx, cfg);
    m.control_energy = energy_norm(log[Col::u_v], dt);
  }
  {
    const auto& id = log[Col::i_d];
    const auto& iq = log[Col::i_q];
    const auto& idr = log[Col::i_d_ref];
    const auto& iqr = log[Col::i_q_ref];
    std::vector<double> err(n), tol(n);
    for (std::size_t k = 0; k < n; ++k) {
      err[k] = std::hypot(id[k] - idr[k], iq[k] - iqr[k]);
      tol[k] = cfg.band * std::max(std::hypot(idr[k], iqr[k]), cfg.current_floor);
    }
    Metrics& m = rep.current;
    m.convergence_time = convergence_time(t, err, tol);
    m.converged = std::isfinite(m.convergence_time);
    m.rise_time = rise_time(t, id, id.front(), idr.back());
    m.overshoot = overshoot_fraction(id, idr, id.front(), idr.back());
    const double excl = std::isfinite(m.rise_time) ? cfg.event_exclusion_rises * m.rise_time : 0.0;
    const auto idx = steady_window(t, cfg.steady_fraction, events, excl);
    m.ripple_pp = peak_to_peak(id, idx);
    m.steady_state_error = mean_over(err, idx);
    m.chattering_amplitude = chattering(log, idx, cfg);
    std::vector<double> unorm(n);
    for (std::size_t k = 0; k < n; ++k) unorm[k] = std::hypot(log[Col::u_d][k], log[Col::u_q][k]);
    m.control_energy = energy_norm(unorm, dt);
    std::size_t start = 0;
    if (m.converged) {
      while (start + 1 < n && t[start] < m.convergence_time) ++start;
    }
    m.tracking_rms = relative_rms(log[Col::i_a], log[Col::i_a_ref], start);
  }
  return rep;
}

}  // namespace ftrect
