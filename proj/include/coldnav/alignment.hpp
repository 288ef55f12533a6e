#pragma once

// Raman-beam timing and horizontal-alignment tolerances. The tilt bound comes
// from requiring the Doppler shift across the tilted beam to stay inside the
// transit-limited Raman linewidth.

namespace coldnav::alignment {

struct BeamGeometry {
  double d = 0.0;      // m, beam width
  double v_z = 0.0;    // m/s
  double k_eff = 0.0;  // rad/m
  double tilt = 0.0;   // rad from perpendicular

  void validate() const;  // throws std::invalid_argument
};

struct AlignmentReport {
  double tau_s = 0.0;
  double linewidth_rad_s = 0.0;
  double max_tilt_rad = 0.0;
  double tilt_rad = 0.0;
  double safety_factor = 1.0;
  bool pass = false;
};

/// Transit time tau = d / v_z.
double pulse_duration(const BeamGeometry& g);

/// Raman linewidth 2 pi * 0.8 * v_z / d.
double raman_linewidth(const BeamGeometry& g);

/// Doppler shift -k_eff * v_z * sin(tilt).
double doppler_shift(const BeamGeometry& g);

/// Tilt at which the Doppler shift reaches the Raman linewidth:
/// asin(linewidth / (k_eff v_z)), clamped to pi/2 when the linewidth already
/// exceeds k_eff v_z. Rejects k_eff * v_z == 0.
double max_tilt(const BeamGeometry& g);

/// Pass iff |tilt| * safety_factor <= max_tilt. safety_factor >= 1.
AlignmentReport check_alignment(const BeamGeometry& g, double safety_factor = 10.0);

}  // namespace coldnav::alignment
