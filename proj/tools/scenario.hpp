#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coldnav/interferometer.hpp"

#include <json.hpp>

// Scenario documents: a single JSON file per run. Keys carry explicit units
// (_m, _s, _hz, _rad, _mps, _mps2, _radps, _kg). Anything omitted falls back
// to the default Rb-87 beam scenario and is listed in defaults_applied so the
// echoed config stays reproducible.

namespace coldnav::scenario {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InertialStep {
  double t = 0.0;
  double accel = 0.0;     // m/s^2
  double rot_rate = 0.0;  // rad/s
};

struct InertialTruth {
  std::vector<InertialStep> steps;  // sorted by t; value holds until the next step

  double accel_at(double t) const;
  double rot_rate_at(double t) const;
};

struct ScanBlock {
  int points = 32;
  double pzt_max_m = 9e-6;
  std::uint64_t seed = 1;
  bool noise = true;
  double phi1_rad = 0.0;
  double phi2_rad = 0.0;
};

struct NavigationBlock {
  double dt_s = 0.1;
  double duration_s = 10.0;
  long long fringe_order_forward = 0;
  long long fringe_order_backward = 0;
};

struct ServoBlock {
  double gain = 0.5;
  double setpoint_hz = 8e6;
  double fvc_slope = 1.0;
  double v_offset = 0.0;
  long long max_steps = 10000;
  double tolerance_hz = 1.0;
  double initial_offset_hz = 1e6;
};

struct SasBlock {
  double detuning_min_hz = -300e6;
  double detuning_max_hz = 300e6;
  int points = 601;
  double doppler_width_hz = 250e6;
  double lamb_dip_width_hz = 3e6;
  double doppler_center_hz = 0.0;
  std::vector<std::pair<double, double>> transitions;  // (center_hz, depth)
};

struct LockinBlock {
  std::string mode = "demod";  // demod | servo | sas
  double s1 = 0.3;
  double s2 = 0.7;
  double ref_freq_hz = 100e3;
  double noise_rms = 0.0;
  double duration_s = 1e-3;
  double sample_rate_hz = 2e6;
  ServoBlock servo;
  SasBlock sas;
};

struct AlignBlock {
  double tilt_rad = 0.0;
  double safety_factor = 10.0;
};

struct Scenario {
  interferometer::InterferometerConfig config;
  double sagnac_area_m2 = 0.0;  // forward-beam signed area
  InertialTruth truth;
  ScanBlock scan;
  NavigationBlock navigation;
  LockinBlock lockin;
  AlignBlock align;
  std::vector<std::string> defaults_applied;

  /// Fully-resolved scenario (defaults included) for embedding in outputs.
  Json echo() const;
};

/// Parses a scenario document. Blocks named in `required` must be present;
/// a missing one raises ConfigError naming the block.
Scenario load_scenario(const Json& doc, const std::vector<std::string>& required);
Scenario load_scenario_file(const std::string& path, const std::vector<std::string>& required);

}  // namespace coldnav::scenario
