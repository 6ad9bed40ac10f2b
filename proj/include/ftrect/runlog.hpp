#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace ftrect {

enum class Col : std::size_t {
  t, v_dc, v_dc_ref, z_tilde1, z_tilde2, s_v, rho, rho_hat, rho_eso, rho_tilde_est,
  i_d, i_q, i_d_ref, i_q_ref, u_v, p_cmd, u_d, u_q, s_d, s_q, i_a, i_a_ref,
  clamp_v, clamp_d, clamp_q,
  count_
};

inline constexpr std::size_t kColumnCount = static_cast<std::size_t>(Col::count_);

struct ColumnInfo {
  std::string_view name;
  std::string_view unit;
};

/// Fixed column order and units of the time-series file.
const std::array<ColumnInfo, kColumnCount>& column_info();

/// Uniformly sampled run record; one vector per column, all the same length.
struct RunLog {
  std::array<std::vector<double>, kColumnCount> data;
  double sample_period = 0.0;
  /// False when the run bypassed the voltage loop with fixed current references.
  bool voltage_loop = true;

  std::vector<double>& operator[](Col c) { return data[static_cast<std::size_t>(c)]; }
  const std::vector<double>& operator[](Col c) const { return data[static_cast<std::size_t>(c)]; }
  std::size_t size() const { return data[0].size(); }
  bool empty() const { return size() == 0; }
  void reserve(std::size_t n);
  void push(const std::array<double, kColumnCount>& row);
};

}  // namespace ftrect
