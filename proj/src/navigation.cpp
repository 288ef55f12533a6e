#include "coldnav/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coldnav/constants.hpp"

namespace coldnav::nav {

using constants::two_pi;

namespace {

// Solves the symmetric 3x3 system M x = b in place; returns the inverse of M
// as well (needed for the parameter covariance). Plain Gaussian elimination
// with partial pivoting is plenty at this size.
struct Solve3 {
  std::array<double, 3> x{};
  std::array<std::array<double, 3>, 3> inverse{};
};

Solve3 solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b) {
  std::array<std::array<double, 3>, 3> inv{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-12) {
      throw std::invalid_argument("fringe fit design matrix is rank deficient");
    }
    std::swap(m[col], m[pivot]);
    std::swap(inv[col], inv[pivot]);
    std::swap(b[col], b[pivot]);
    const double scale = 1.0 / m[col][col];
    for (int c = 0; c < 3; ++c) {
      m[col][c] *= scale;
      inv[col][c] *= scale;
    }
    b[col] *= scale;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
      b[r] -= f * b[col];
    }
  }
  return {b, inv};
}

double principal_phase(double phase) {
  double p = std::remainder(phase, two_pi);  // (-pi, pi]
  if (p <= -constants::pi) p += two_pi;
  return p;
}

}  // namespace

PhaseEstimate fit_fringe(const FringeScan& scan) {
  const std::size_t n = scan.phases.size();
  if (n != scan.populations.size()) {
    throw std::invalid_argument("scan phases and populations differ in length");
  }
  if (n < 5) throw std::invalid_argument("fringe fit needs at least 5 points");
  const auto [min_it, max_it] = std::minmax_element(scan.phases.begin(), scan.phases.end());
  if (*max_it - *min_it + 1e-12 < constants::pi) {
    throw std::invalid_argument("scan must span at least pi of commanded phase");
  }

  // Normal equations for [c0, A, B].
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> b{};
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(scan.phases[i]);
    const double s = std::sin(scan.phases[i]);
    const double row[3] = {1.0, c, s};
    for (int r = 0; r < 3; ++r) {
      for (int col = 0; col < 3; ++col) m[r][col] += row[r] * row[col];
      b[r] += row[r] * scan.populations[i];
    }
  }
  const Solve3 solved = solve3(m, b);
  const double c0 = solved.x[0];
  const double a = solved.x[1];
  const double bb = solved.x[2];

  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double model = c0 + a * std::cos(scan.phases[i]) + bb * std::sin(scan.phases[i]);
    const double r = scan.populations[i] - model;
    ssr += r * r;
  }

  PhaseEstimate est;
  const double amplitude = std::hypot(a, bb);  // C/2
  const double raw_contrast = 2.0 * amplitude;
  est.contrast_est = std::min(raw_contrast, 1.05);
  est.contrast_overshoot = raw_contrast > 1.0;
  est.low_contrast = est.contrast_est < 0.05;
  double phi = std::atan2(-bb, a);
  if (phi < 0.0) phi += two_pi;
  est.total_phase = phi;
  est.residual_rms = std::sqrt(ssr / static_cast<double>(n));

  // Heteroscedasticity-consistent covariance in (c0, A, B): shot noise is
  // strongest where the fringe is steepest, so the uniform-sigma form reads
  // low. Sandwich (X^T X)^-1 (sum r_i^2 x_i x_i^T) (X^T X)^-1 with the
  // small-sample n/(n-3) correction, then through the Jacobian of
  // (c0, C, Phi).
  std::array<std::array<double, 3>, 3> meat{};
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(scan.phases[i]);
    const double s = std::sin(scan.phases[i]);
    const double model = c0 + a * c + bb * s;
    const double resid = scan.populations[i] - model;
    const double row[3] = {1.0, c, s};
    for (int r = 0; r < 3; ++r) {
      for (int col = 0; col < 3; ++col) meat[r][col] += resid * resid * row[r] * row[col];
    }
  }
  const double dof = static_cast<double>(n) - 3.0;
  const double correction = dof > 0.0 ? static_cast<double>(n) / dof : 0.0;
  std::array<std::array<double, 3>, 3> cov_lin{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) acc += solved.inverse[r][k] * meat[k][l] * solved.inverse[l][c];
      }
      cov_lin[r][c] = correction * acc;
    }
  }
  const double r2 = amplitude * amplitude;
  std::array<std::array<double, 3>, 3> jac{};
  jac[0][0] = 1.0;
  if (r2 > 0.0) {
    jac[1][1] = 2.0 * a / amplitude;
    jac[1][2] = 2.0 * bb / amplitude;
    jac[2][1] = bb / r2;
    jac[2][2] = -a / r2;
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) acc += jac[r][k] * cov_lin[k][l] * jac[c][l];
      }
      est.covariance[r][c] = acc;
    }
  }
  return est;
}

SeparatedPhases separate_inertial(double phase_forward, double phase_backward) {
  return {0.5 * (phase_forward + phase_backward), 0.5 * (phase_forward - phase_backward)};
}

double accel_from_phase(double phase, const InterferometerConfig& config) {
  config.validate();
  const double scale = config.k_eff * config.T * config.T;
  if (scale == 0.0) throw std::invalid_argument("degenerate config: k_eff * T^2 == 0");
  return -phase / scale;
}

double rotation_from_phase(double phase, const InterferometerConfig& config,
                           double sagnac_area) {
  config.validate();
  if (sagnac_area == 0.0) throw std::invalid_argument("zero Sagnac area");
  const double scale = 2.0 * config.atom_mass * sagnac_area / constants::hbar;
  return phase / scale;
}

Sensitivity sensitivity(const InterferometerConfig& config, double phase_resolution) {
  config.validate();
  Sensitivity s;
  s.accel_res = phase_resolution / (config.k_eff * config.T * config.T);
  const double area = interferometer::sagnac_area_from_geometry(config);
  s.rot_res = phase_resolution / std::abs(2.0 * config.atom_mass * area / constants::hbar);
  s.shot_noise_phase =
      config.n_atoms_per_shot > 0
          ? 1.0 / (config.contrast * std::sqrt(static_cast<double>(config.n_atoms_per_shot)))
          : 0.0;
  return s;
}

double unwrap_phase(double phase_mod_2pi, long long fringe_order) {
  return principal_phase(phase_mod_2pi) + two_pi * static_cast<double>(fringe_order);
}

std::vector<NavState> dead_reckon(std::span<const ImuSample> samples, double dt,
                                  const NavState& initial) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ImuSample& s = samples[i];
    if (!std::isfinite(s.accel_x) || !std::isfinite(s.accel_y) || !std::isfinite(s.rot_rate)) {
      throw std::invalid_argument("non-finite sample at index " + std::to_string(i));
    }
  }
  std::vector<NavState> out;
  if (samples.empty()) return out;
  out.reserve(samples.size());
  out.push_back(initial);

  auto nav_accel = [](const ImuSample& s, double heading) {
    const double c = std::cos(heading);
    const double sn = std::sin(heading);
    return std::array<double, 2>{c * s.accel_x - sn * s.accel_y,
                                 sn * s.accel_x + c * s.accel_y};
  };

  std::array<double, 2> prev_a = nav_accel(samples[0], initial.heading);
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const NavState& cur = out.back();
    NavState next;
    next.time = cur.time + dt;
    next.heading = cur.heading + 0.5 * (samples[k].rot_rate + samples[k + 1].rot_rate) * dt;
    const std::array<double, 2> a_next = nav_accel(samples[k + 1], next.heading);
    next.vx = cur.vx + 0.5 * (prev_a[0] + a_next[0]) * dt;
    next.vy = cur.vy + 0.5 * (prev_a[1] + a_next[1]) * dt;
    next.x = cur.x + 0.5 * (cur.vx + next.vx) * dt;
    next.y = cur.y + 0.5 * (cur.vy + next.vy) * dt;
    out.push_back(next);
    prev_a = a_next;
  }
  return out;
}

DualScanInversion invert_dual(const PhaseEstimate& forward, const PhaseEstimate& backward,
                              const InterferometerConfig& forward_config,
                              double forward_sagnac_area, double calibration_offset,
                              long long order_forward, long long order_backward) {
  const double fwd =
      unwrap_phase(forward.total_phase - calibration_offset, order_forward);
  const double bwd =
      unwrap_phase(backward.total_phase - calibration_offset, order_backward);
  const SeparatedPhases parts = separate_inertial(fwd, bwd);
  DualScanInversion inv;
  inv.accel_phase = parts.accel_phase;
  inv.rotation_phase = parts.rotation_phase;
  inv.accel = accel_from_phase(parts.accel_phase, forward_config);
  inv.rot_rate = rotation_from_phase(parts.rotation_phase, forward_config, forward_sagnac_area);
  return inv;
}

}  // namespace coldnav::nav
