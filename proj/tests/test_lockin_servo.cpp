#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <initializer_list>
#include <complex>
#include <vector>

#include "coldnav/constants.hpp"
#include "coldnav/lockin_servo.hpp"

using namespace coldnav;
using namespace coldnav::lockin;
using constants::two_pi;

namespace {

// Single-bin DFT magnitude at frequency f, normalized so a unit sine reads 1.
double dft_peak(const ModulatedSignal& sig, double f) {
  std::complex<double> acc{0.0, 0.0};
  const double w = two_pi * f / sig.sample_rate;
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    acc += sig.samples[i] * std::polar(1.0, -w * static_cast<double>(i));
  }
  return 2.0 * std::abs(acc) / static_cast<double>(sig.samples.size());
}

ModulatedSignal clean_signal(double s1, double s2, double periods = 100.0) {
  const double ref = 100e3;
  const double fs = 20.0 * ref;
  return synthesize(s1, s2, ref, 0.0, periods / ref, fs, 1);
}

// Log-log slope by least squares.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (static_cast<double>(n) * sxy - sx * sy) / (static_cast<double>(n) * sxx - sx * sx);
}

}  // namespace

TEST_CASE("synthesize: pure tones and silence") {
  const ModulatedSignal pure = clean_signal(1.0, 0.0);
  CHECK(dft_peak(pure, pure.ref_freq) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dft_peak(pure, 2.0 * pure.ref_freq) == doctest::Approx(0.0).epsilon(1e-9));

  const ModulatedSignal silent = clean_signal(0.0, 0.0);
  for (double v : silent.samples) CHECK(v == 0.0);

  const ModulatedSignal both = clean_signal(1.0, 0.5);
  CHECK(dft_peak(both, both.ref_freq) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dft_peak(both, 2.0 * both.ref_freq) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("synthesize: deterministic noise, Nyquist and length checks") {
  const ModulatedSignal a = synthesize(0.3, 0.7, 100e3, 0.1, 1e-3, 2e6, 42);
  const ModulatedSignal b = synthesize(0.3, 0.7, 100e3, 0.1, 1e-3, 2e6, 42);
  CHECK(a.samples == b.samples);
  CHECK_THROWS_AS(synthesize(1.0, 0.0, 100e3, 0.0, 1e-3, 150e3, 1), std::invalid_argument);
  CHECK_THROWS_AS(synthesize(1.0, 0.0, 100e3, 0.0, 1e-6, 2e6, 1), std::invalid_argument);
}

TEST_CASE("demodulate: recovers s1 against the harmonic and the raw integral is s1/2") {
  const ModulatedSignal sig = clean_signal(0.3, 0.7);
  CHECK(demodulate(sig) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(demodulate_raw(sig) == doctest::Approx(0.15).epsilon(1e-9));

  const ModulatedSignal none = clean_signal(0.0, 0.9);
  CHECK(demodulate(none) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("demodulate: rejects fractional period counts") {
  ModulatedSignal sig = clean_signal(1.0, 0.0);
  sig.samples.pop_back();
  CHECK_THROWS_AS(demodulate(sig), std::invalid_argument);
}

TEST_CASE("demodulate: linear in s1") {
  for (double s1 : {-1.0, -0.25, 0.1, 0.5, 2.0}) {
    CHECK(demodulate(clean_signal(s1, 0.4)) == doctest::Approx(s1).epsilon(1e-9));
  }
}

TEST_CASE("demodulate: noisy estimate lands within the averaging bound") {
  const double ref = 100e3;
  const double fs = 20.0 * ref;
  const double periods = 1e4;
  const ModulatedSignal sig = synthesize(0.3, 0.7, ref, 0.1, periods / ref, fs, 7);
  const double n_samples = static_cast<double>(sig.samples.size());
  const double bound = 0.1 * std::sqrt(2.0 / n_samples);
  CHECK(std::abs(demodulate(sig) - 0.3) < 3.0 * bound);
}

TEST_CASE("property: demodulation error RMS scales as 1/sqrt(samples)") {
  const double ref = 100e3;
  const double fs = 20.0 * ref;
  std::vector<double> counts, rms;
  for (double periods : {100.0, 400.0, 1600.0, 6400.0}) {
    double acc = 0.0;
    const int seeds = 40;
    for (int seed = 1; seed <= seeds; ++seed) {
      const ModulatedSignal sig =
          synthesize(0.3, 0.7, ref, 0.2, periods / ref, fs, static_cast<std::uint64_t>(seed));
      const double err = demodulate(sig) - 0.3;
      acc += err * err;
    }
    counts.push_back(periods * fs / ref);
    rms.push_back(std::sqrt(acc / seeds));
  }
  const double slope = fitted_slope(counts, rms);
  CHECK(slope == doctest::Approx(-0.5).scale(0.0).epsilon(0.2));  // -0.5 +/- 0.1
}

TEST_CASE("fvc_error: zero at setpoint, linear, sign change") {
  ServoConfig cfg;
  cfg.gain = 1.0;
  cfg.setpoint = 8e6;
  cfg.fvc_slope = 2.0;
  cfg.max_steps = 100;
  cfg.tolerance = 1.0;
  CHECK(fvc_error(8e6, cfg) == 0.0);
  CHECK(fvc_error(8e6 + 1e3, cfg) == doctest::Approx(2e3).epsilon(1e-12));
  CHECK(fvc_error(8e6 - 1e3, cfg) == doctest::Approx(-2e3).epsilon(1e-12));
}

TEST_CASE("run_servo: fixed point at setpoint, converged at step 0") {
  ServoConfig cfg;
  cfg.gain = 0.5;
  cfg.setpoint = 8e6;
  cfg.fvc_slope = 1.0;
  cfg.max_steps = 1000;
  cfg.tolerance = 1.0;
  const ServoRun run = run_servo(8e6, nullptr, cfg);
  CHECK(run.status == ServoStatus::Converged);
  CHECK(run.converged_at == 0);
  for (const ServoSample& s : run.trajectory) {
    CHECK(s.freq == 8e6);
    CHECK(s.error == 0.0);
  }
}

TEST_CASE("run_servo: converges from a 1 MHz offset across the stable gain range") {
  for (double loop_gain : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    ServoConfig cfg;
    cfg.gain = loop_gain / 2.0;
    cfg.fvc_slope = 2.0;
    cfg.setpoint = 8e6;
    cfg.max_steps = 5000;
    cfg.tolerance = 1.0;
    for (double offset : {1e6, -1e6}) {
      const ServoRun run = run_servo(8e6 + offset, nullptr, cfg);
      CHECK(run.status == ServoStatus::Converged);
      CHECK(std::abs(run.trajectory.back().freq - cfg.setpoint) < cfg.tolerance);
    }
  }
}

TEST_CASE("run_servo: loop gain 2.5 is flagged unstable") {
  ServoConfig cfg;
  cfg.gain = 2.5;
  cfg.fvc_slope = 1.0;
  cfg.setpoint = 8e6;
  cfg.max_steps = 100000;
  cfg.tolerance = 1.0;
  const ServoRun run = run_servo(9e6, nullptr, cfg);
  CHECK(run.status == ServoStatus::Unstable);
  CHECK(run.loop_gain == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("run_servo: rides out a step disturbance") {
  ServoConfig cfg;
  cfg.gain = 0.8;
  cfg.fvc_slope = 1.0;
  cfg.setpoint = 8e6;
  cfg.max_steps = 5000;
  cfg.tolerance = 1.0;
  const auto kick = [](long long step) { return step == 5 ? 0.5e6 : 0.0; };
  const ServoRun run = run_servo(8e6 + 1e6, kick, cfg);
  CHECK(run.status == ServoStatus::Converged);
  CHECK(std::abs(run.trajectory.back().freq - cfg.setpoint) < cfg.tolerance);
}

TEST_CASE("sas_spectrum: Gaussian profile, dips, and crossover placement") {
  SUBCASE("no transitions: pure Gaussian") {
    const auto spectrum = sas_spectrum(-10e6, 10e6, 201, {}, 3e6, 0.5e6);
    REQUIRE(spectrum.size() == 201);
    for (const auto& p : spectrum) {
      const double x = p.detuning / 3e6;
      CHECK(p.absorption == doctest::Approx(std::exp(-0.5 * x * x)).epsilon(1e-12));
    }
  }
  SUBCASE("single transition at the Doppler center: symmetric dip") {
    const std::vector<Transition> lines{{0.0, 0.3}};
    const auto spectrum = sas_spectrum(-10e6, 10e6, 201, lines, 3e6, 0.5e6);
    const std::size_t n = spectrum.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      CHECK(spectrum[i].absorption ==
            doctest::Approx(spectrum[n - 1 - i].absorption).epsilon(1e-9));
    }
    // Dip visible at the center.
    CHECK(spectrum[n / 2].absorption < 0.8);
  }
  SUBCASE("two transitions 157 MHz apart: crossover 78.5 MHz red of the upper line") {
    const std::vector<Transition> lines{{0.0, 0.2}, {157e6, 0.2}};
    const auto spectrum = sas_spectrum(-50e6, 200e6, 2001, lines, 200e6, 1e6);
    // Local minimum at the midpoint 78.5 MHz.
    const double step = 250e6 / 2000.0;
    const auto index_of = [&](double f) {
      return static_cast<std::size_t>(std::llround((f + 50e6) / step));
    };
    const std::size_t mid = index_of(78.5e6);
    CHECK(spectrum[mid].absorption < spectrum[index_of(70e6)].absorption);
    CHECK(spectrum[mid].absorption < spectrum[index_of(87e6)].absorption);
    CHECK(spectrum[mid].detuning == doctest::Approx(78.5e6).epsilon(1e-9));
  }
  CHECK_THROWS_AS(sas_spectrum(0.0, 1.0, 10, {}, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sas_spectrum(1.0, 0.0, 10, {}, 1.0, 1.0), std::invalid_argument);
}
