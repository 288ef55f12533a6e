#include "coldnav/lockin_servo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coldnav/constants.hpp"
#include "coldnav/random.hpp"

namespace coldnav::lockin {

using constants::two_pi;

void ModulatedSignal::validate() const {
  if (samples.empty()) throw std::invalid_argument("signal has no samples");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    throw std::invalid_argument("sample_rate must be positive");
  }
  if (!(ref_freq > 0.0) || !std::isfinite(ref_freq)) {
    throw std::invalid_argument("ref_freq must be positive");
  }
  if (!(sample_rate > 2.0 * ref_freq)) {
    throw std::invalid_argument("sample_rate must exceed 2 * ref_freq");
  }
}

ModulatedSignal synthesize(double s1, double s2, double ref_freq, double noise_rms,
                           double duration, double sample_rate, std::uint64_t rng_seed) {
  if (!std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(noise_rms) || noise_rms < 0.0) {
    throw std::invalid_argument("amplitudes must be finite, noise_rms >= 0");
  }
  const long long n = std::llround(duration * sample_rate);
  if (n < 16) throw std::invalid_argument("duration * sample_rate must be >= 16 samples");

  ModulatedSignal sig;
  sig.sample_rate = sample_rate;
  sig.ref_freq = ref_freq;
  sig.samples.resize(static_cast<std::size_t>(n));
  sig.validate();

  rng::Engine eng(rng_seed);
  const double w = two_pi * ref_freq / sample_rate;
  for (long long i = 0; i < n; ++i) {
    const double phase = w * static_cast<double>(i);
    double v = s1 * std::sin(phase) + s2 * std::sin(2.0 * phase);
    if (noise_rms > 0.0) v += noise_rms * rng::normal(eng);
    sig.samples[static_cast<std::size_t>(i)] = v;
  }
  return sig;
}

double demodulate_raw(const ModulatedSignal& sig) {
  sig.validate();
  const double n = static_cast<double>(sig.samples.size());
  const double periods = n * sig.ref_freq / sig.sample_rate;
  if (std::abs(periods - std::round(periods)) > 1e-6 || periods < 1.0) {
    throw std::invalid_argument("signal must span a whole number of reference periods");
  }
  const double w = two_pi * sig.ref_freq / sig.sample_rate;
  double acc = 0.0;
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    acc += sig.samples[i] * std::sin(w * static_cast<double>(i));
  }
  return acc / n;  // (1/T) * sum * dt
}

double demodulate(const ModulatedSignal& sig) { return 2.0 * demodulate_raw(sig); }

void ServoConfig::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("gain must be > 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!std::isfinite(setpoint) || !std::isfinite(fvc_slope)) {
    throw std::invalid_argument("servo config must be finite");
  }
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

double fvc_error(double freq, const ServoConfig& cfg) {
  cfg.validate();
  return cfg.fvc_slope * freq - cfg.fvc_slope * cfg.setpoint;
}

ServoRun run_servo(double initial_freq, const std::function<double(long long)>& disturbance,
                   const ServoConfig& cfg) {
  cfg.validate();

  ServoRun run;
  run.loop_gain = cfg.gain * cfg.fvc_slope;

  double freq = initial_freq;
  int in_tolerance = 0;
  int growing = 0;
  double prev_abs_error = -1.0;

  for (long long step = 0; step < cfg.max_steps; ++step) {
    const double error = fvc_error(freq, cfg);
    run.trajectory.push_back({step, freq, error});

    if (std::abs(freq - cfg.setpoint) < cfg.tolerance) {
      ++in_tolerance;
      if (in_tolerance >= 10) {
        run.status = ServoStatus::Converged;
        run.converged_at = step - (in_tolerance - 1);
        return run;
      }
    } else {
      in_tolerance = 0;
    }

    const double abs_error = std::abs(error);
    if (prev_abs_error >= 0.0 && abs_error > prev_abs_error) {
      ++growing;
      if (growing >= 100) {
        run.status = ServoStatus::Unstable;
        return run;
      }
    } else {
      growing = 0;
    }
    prev_abs_error = abs_error;

    freq = freq - cfg.gain * error + (disturbance ? disturbance(step) : 0.0);
  }
  run.status = ServoStatus::MaxStepsReached;
  return run;
}

std::vector<SpectrumPoint> sas_spectrum(double detuning_min, double detuning_max, int n_points,
                                        std::span<const Transition> transitions,
                                        double doppler_width, double lamb_dip_width,
                                        double doppler_center) {
  if (!(doppler_width > 0.0) || !(lamb_dip_width > 0.0)) {
    throw std::invalid_argument("widths must be positive");
  }
  if (n_points < 2 || !(detuning_max > detuning_min)) {
    throw std::invalid_argument("need an increasing detuning range with >= 2 points");
  }

  // Dips at every transition plus every pairwise crossover midpoint.
  struct Dip { double center; double depth; };
  std::vector<Dip> dips;
  for (const Transition& t : transitions) dips.push_back({t.center, t.depth});
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    for (std::size_t j = i + 1; j < transitions.size(); ++j) {
      dips.push_back({0.5 * (transitions[i].center + transitions[j].center),
                      0.5 * (transitions[i].depth + transitions[j].depth)});
    }
  }

  std::vector<SpectrumPoint> spectrum(static_cast<std::size_t>(n_points));
  const double step = (detuning_max - detuning_min) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double delta = detuning_min + step * static_cast<double>(i);
    const double x = (delta - doppler_center) / doppler_width;
    double absorption = std::exp(-0.5 * x * x);
    double carved = 1.0;
    for (const Dip& dip : dips) {
      const double u = (delta - dip.center) / lamb_dip_width;
      carved -= dip.depth / (1.0 + u * u);
    }
    absorption *= std::max(carved, 0.0);
    spectrum[static_cast<std::size_t>(i)] = {delta, absorption};
  }
  return spectrum;
}

}  // namespace coldnav::lockin
