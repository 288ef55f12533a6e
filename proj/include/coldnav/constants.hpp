#pragma once

// Physical constants and the default Rb-87 beam scenario shared across the
// simulator. SI units throughout.

namespace coldnav::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double planck = 6.62607015e-34;        // J s (exact SI)
inline constexpr double hbar = planck / two_pi;         // J s
inline constexpr double rb87_mass_kg = 1.4432e-25;      // kg

// Default beam geometry: 780 nm Raman light on a 15 m/s longitudinal beam,
// 1 mm wide Raman zones spaced 9.5 mm apart.
inline constexpr double default_lambda_m = 780e-9;
inline constexpr double default_v_z_mps = 15.0;
inline constexpr double default_beam_width_m = 1e-3;
inline constexpr double default_zone_spacing_m = 9.5e-3;
inline constexpr long long default_atoms_per_shot = 1000000;

// Phase-plate scan: a 9 um PZT stroke commands 30 rad of third-pulse phase.
inline constexpr double pzt_max_displacement_m = 9e-6;
inline constexpr double pzt_phase_rad_at_max = 30.0;

// Laser-bench figures carried as named constants only; nothing downstream
// models the hardware behind them.
inline constexpr double default_modulation_freq_hz = 100e3;  // diode current modulation
inline constexpr double pd1_bandwidth_hz = 10e6;             // spectroscopy photodiode
inline constexpr double phd12_bandwidth_hz = 15e9;           // fast beat-note photodetector
inline constexpr double ld_temperature_c = 31.0;
inline constexpr double ld_current_a = 90e-3;
inline constexpr double crossover_red_shift_hz = 78.5e6;     // lock point below the repump line
inline constexpr double d2_natural_linewidth_hz = 6.06e6;

inline constexpr double earth_rotation_rate_radps = 7.29e-5;

}  // namespace coldnav::constants
