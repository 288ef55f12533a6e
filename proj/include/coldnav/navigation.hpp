#pragma once

#include <array>
#include <span>
#include <vector>

#include "coldnav/interferometer.hpp"

// Inversion of fringe scans back to inertial quantities and planar dead
// reckoning. Acceleration and rotation are separated by running the same
// geometry with the beam direction reversed: the acceleration phase is even
// under that reversal, the Sagnac phase odd.

namespace coldnav::nav {

using interferometer::FringeScan;
using interferometer::InterferometerConfig;

struct PhaseEstimate {
  double total_phase = 0.0;    // rad, in [0, 2 pi)
  double contrast_est = 0.0;
  double residual_rms = 0.0;
  std::array<std::array<double, 3>, 3> covariance{};  // (offset, contrast, phase)
  bool low_contrast = false;      // contrast_est < 0.05
  bool contrast_overshoot = false;  // raw estimate exceeded 1 before clamping at 1.05
};

/// Least-squares fit of P(phi3) = c0 + (C/2) cos(phi3 + Phi) through the
/// linear reparameterization c0 + A cos phi3 + B sin phi3 (solved exactly,
/// no iteration). Needs >= 5 points spanning >= pi of commanded phase.
PhaseEstimate fit_fringe(const FringeScan& scan);

struct SeparatedPhases {
  double accel_phase = 0.0;
  double rotation_phase = 0.0;
};

/// accel = (fwd + bwd)/2, rotation = (fwd - bwd)/2. Callers unwrap fringe
/// orders first.
SeparatedPhases separate_inertial(double phase_forward, double phase_backward);

/// Inverse of the acceleration phase: -phase / (k_eff T^2).
double accel_from_phase(double phase, const InterferometerConfig& config);

/// Inverse of the rotation phase for the given signed Sagnac area.
double rotation_from_phase(double phase, const InterferometerConfig& config, double sagnac_area);

struct Sensitivity {
  double accel_res = 0.0;        // m/s^2 per phase_resolution
  double rot_res = 0.0;          // rad/s per phase_resolution
  double shot_noise_phase = 0.0; // rad, 1/(C sqrt(N)) single-shot floor
};

Sensitivity sensitivity(const InterferometerConfig& config, double phase_resolution);

/// Maps a fitted phase in [0, 2 pi) to its principal value in (-pi, pi] plus
/// the supplied integer number of whole fringes.
double unwrap_phase(double phase_mod_2pi, long long fringe_order);

struct NavState {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double heading = 0.0;
};

struct ImuSample {
  double accel_x = 0.0;   // m/s^2 body frame
  double accel_y = 0.0;   // m/s^2 body frame
  double rot_rate = 0.0;  // rad/s
};

/// Planar strapdown integration: trapezoidal heading, body->nav rotation of
/// the specific force, trapezoidal velocity and position. samples[k] is the
/// measurement at initial.time + k*dt; the returned trajectory has one state
/// per sample, starting at the initial state.
std::vector<NavState> dead_reckon(std::span<const ImuSample> samples, double dt,
                                  const NavState& initial);

struct DualScanInversion {
  double accel = 0.0;
  double rot_rate = 0.0;
  double accel_phase = 0.0;
  double rotation_phase = 0.0;
};

/// Full inversion of a forward/backward scan pair: subtracts the laser-phase
/// calibration offset, unwraps each phase with its fringe-order hint,
/// separates the even/odd parts and converts to physical units using the
/// forward-beam geometry.
DualScanInversion invert_dual(const PhaseEstimate& forward, const PhaseEstimate& backward,
                              const InterferometerConfig& forward_config,
                              double forward_sagnac_area, double calibration_offset = 0.0,
                              long long order_forward = 0, long long order_backward = 0);

}  // namespace coldnav::nav
