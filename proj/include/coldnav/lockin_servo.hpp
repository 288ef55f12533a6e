#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Digital lock-in demodulation of modulated spectroscopy signals, the
// frequency-to-voltage error signal, and an integral servo that holds a
// simulated laser offset on its setpoint.

namespace coldnav::lockin {

struct ModulatedSignal {
  double sample_rate = 0.0;      // Hz
  double ref_freq = 0.0;         // Hz, reference nu
  std::vector<double> samples;

  void validate() const;  // Nyquist and non-empty checks
};

/// s1 sin(2 pi nu t) + s2 sin(4 pi nu t) + Gaussian noise of the given RMS,
/// sampled at sample_rate for the given duration. Deterministic per seed.
ModulatedSignal synthesize(double s1, double s2, double ref_freq, double noise_rms,
                           double duration, double sample_rate, std::uint64_t rng_seed);

/// The raw lock-in integral (1/T) sum samples * sin(2 pi nu t) dt over a
/// whole number of reference periods; equals s1/2 for a clean signal.
double demodulate_raw(const ModulatedSignal& sig);

/// 2x the raw integral, so the return value estimates s1 directly.
double demodulate(const ModulatedSignal& sig);

struct ServoConfig {
  double gain = 0.0;        // applied to the error each step
  double setpoint = 0.0;    // Hz
  double v_offset = 0.0;    // absorbed into the setpoint; kept for reporting
  double fvc_slope = 0.0;   // error units per Hz
  long long max_steps = 0;
  double tolerance = 0.0;   // Hz

  void validate() const;
};

/// fvc_slope * (freq - setpoint): zero exactly at the setpoint.
double fvc_error(double freq, const ServoConfig& cfg);

enum class ServoStatus { Converged, MaxStepsReached, Unstable };

struct ServoSample {
  long long step = 0;
  double freq = 0.0;
  double error = 0.0;
};

struct ServoRun {
  std::vector<ServoSample> trajectory;
  ServoStatus status = ServoStatus::MaxStepsReached;
  long long converged_at = -1;  // first step of the in-tolerance run
  double loop_gain = 0.0;       // gain * fvc_slope
};

/// Integral controller freq_{k+1} = freq_k - gain * error_k + disturbance(k).
/// Converged after 10 consecutive in-tolerance steps; flagged Unstable when
/// |error| grows for 100 consecutive steps.
ServoRun run_servo(double initial_freq, const std::function<double(long long)>& disturbance,
                   const ServoConfig& cfg);

struct Transition {
  double center = 0.0;  // Hz, detuning of the transition
  double depth = 0.0;   // fractional dip depth
};

struct SpectrumPoint {
  double detuning = 0.0;
  double absorption = 0.0;
};

/// Saturation-spectroscopy lineshape: Gaussian Doppler profile (RMS width
/// doppler_width) carved by Lorentzian Lamb dips (HWHM lamb_dip_width) at
/// each transition and at every pairwise crossover midpoint.
std::vector<SpectrumPoint> sas_spectrum(double detuning_min, double detuning_max, int n_points,
                                        std::span<const Transition> transitions,
                                        double doppler_width, double lamb_dip_width,
                                        double doppler_center = 0.0);

}  // namespace coldnav::lockin
