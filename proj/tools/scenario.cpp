#include "scenario.hpp"

#include <algorithm>
#include <fstream>

#include "coldnav/constants.hpp"

namespace coldnav::scenario {

namespace {

double read_double(const Json& block, const std::string& block_name, const std::string& key,
                   double fallback, std::vector<std::string>* defaults) {
  if (block.contains(key)) {
    const Json& v = block.at(key);
    if (!v.is_number()) throw ConfigError(block_name + "." + key + " must be a number");
    return v.get<double>();
  }
  if (defaults) defaults->push_back(block_name + "." + key);
  return fallback;
}

long long read_int(const Json& block, const std::string& block_name, const std::string& key,
                   long long fallback, std::vector<std::string>* defaults) {
  if (block.contains(key)) {
    const Json& v = block.at(key);
    if (!v.is_number_integer()) throw ConfigError(block_name + "." + key + " must be an integer");
    return v.get<long long>();
  }
  if (defaults) defaults->push_back(block_name + "." + key);
  return fallback;
}

bool read_bool(const Json& block, const std::string& block_name, const std::string& key,
               bool fallback, std::vector<std::string>* defaults) {
  if (block.contains(key)) {
    const Json& v = block.at(key);
    if (!v.is_boolean()) throw ConfigError(block_name + "." + key + " must be a boolean");
    return v.get<bool>();
  }
  if (defaults) defaults->push_back(block_name + "." + key);
  return fallback;
}

Json block_or_empty(const Json& doc, const std::string& name) {
  if (!doc.contains(name)) return Json::object();
  if (!doc.at(name).is_object()) throw ConfigError("`" + name + "` block must be an object");
  return doc.at(name);
}

}  // namespace

double InertialTruth::accel_at(double t) const {
  double value = 0.0;
  for (const InertialStep& s : steps) {
    if (s.t <= t) value = s.accel;
    else break;
  }
  return value;
}

double InertialTruth::rot_rate_at(double t) const {
  double value = 0.0;
  for (const InertialStep& s : steps) {
    if (s.t <= t) value = s.rot_rate;
    else break;
  }
  return value;
}

Scenario load_scenario(const Json& doc, const std::vector<std::string>& required) {
  if (!doc.is_object()) throw ConfigError("scenario document must be a JSON object");
  for (const std::string& name : required) {
    if (!doc.contains(name)) throw ConfigError("missing `" + name + "` block");
  }

  Scenario sc;
  auto* defs = &sc.defaults_applied;

  {
    const Json block = block_or_empty(doc, "interferometer");
    const double lambda =
        read_double(block, "interferometer", "lambda_laser_m", constants::default_lambda_m, defs);
    const double v_z =
        read_double(block, "interferometer", "v_z_mps", constants::default_v_z_mps, defs);
    const double d =
        read_double(block, "interferometer", "d_m", constants::default_beam_width_m, defs);
    const double L =
        read_double(block, "interferometer", "L_m", constants::default_zone_spacing_m, defs);
    const double mass =
        read_double(block, "interferometer", "atom_mass_kg", constants::rb87_mass_kg, defs);
    const long long atoms = read_int(block, "interferometer", "n_atoms_per_shot",
                                     constants::default_atoms_per_shot, defs);
    const double contrast = read_double(block, "interferometer", "contrast", 1.0, defs);
    try {
      sc.config =
          interferometer::InterferometerConfig::from_geometry(lambda, v_z, d, L, mass, atoms,
                                                              contrast);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("interferometer: ") + e.what());
    }
    sc.sagnac_area_m2 =
        read_double(block, "interferometer", "sagnac_area_m2",
                    interferometer::sagnac_area_from_geometry(sc.config), defs);
  }

  {
    const Json block = block_or_empty(doc, "inertial");
    if (block.contains("piecewise")) {
      const Json& list = block.at("piecewise");
      if (!list.is_array() || list.empty()) {
        throw ConfigError("inertial.piecewise must be a non-empty array");
      }
      for (const Json& item : list) {
        InertialStep step;
        step.t = read_double(item, "inertial.piecewise[]", "t_s", 0.0, nullptr);
        step.accel = read_double(item, "inertial.piecewise[]", "accel_mps2", 0.0, nullptr);
        step.rot_rate = read_double(item, "inertial.piecewise[]", "rot_rate_radps", 0.0, nullptr);
        sc.truth.steps.push_back(step);
      }
      std::sort(sc.truth.steps.begin(), sc.truth.steps.end(),
                [](const InertialStep& a, const InertialStep& b) { return a.t < b.t; });
    } else {
      InertialStep step;
      step.t = 0.0;
      step.accel = read_double(block, "inertial", "accel_mps2", 0.0, defs);
      step.rot_rate = read_double(block, "inertial", "rot_rate_radps", 0.0, defs);
      sc.truth.steps.push_back(step);
    }
  }

  {
    const Json block = block_or_empty(doc, "scan");
    sc.scan.points = static_cast<int>(read_int(block, "scan", "points", 32, defs));
    sc.scan.pzt_max_m = read_double(block, "scan", "pzt_max_m", 9e-6, defs);
    sc.scan.seed = static_cast<std::uint64_t>(read_int(block, "scan", "seed", 1, defs));
    sc.scan.noise = read_bool(block, "scan", "noise", true, defs);
    sc.scan.phi1_rad = read_double(block, "scan", "phi1_rad", 0.0, defs);
    sc.scan.phi2_rad = read_double(block, "scan", "phi2_rad", 0.0, defs);
    if (block.contains("atoms_per_shot")) {
      sc.config.n_atoms_per_shot = read_int(block, "scan", "atoms_per_shot", 0, nullptr);
      try {
        sc.config.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scan.atoms_per_shot: ") + e.what());
      }
    }
    if (sc.scan.points < 5) throw ConfigError("scan.points must be >= 5");
  }

  {
    const Json block = block_or_empty(doc, "navigation");
    sc.navigation.dt_s = read_double(block, "navigation", "dt_s", 0.1, defs);
    sc.navigation.duration_s = read_double(block, "navigation", "duration_s", 10.0, defs);
    sc.navigation.fringe_order_forward =
        read_int(block, "navigation", "fringe_order_forward", 0, defs);
    sc.navigation.fringe_order_backward =
        read_int(block, "navigation", "fringe_order_backward", 0, defs);
    if (!(sc.navigation.dt_s > 0.0)) throw ConfigError("navigation.dt_s must be > 0");
    if (!(sc.navigation.duration_s >= sc.navigation.dt_s)) {
      throw ConfigError("navigation.duration_s must cover at least one dt");
    }
  }

  {
    const Json block = block_or_empty(doc, "lockin");
    if (block.contains("mode")) {
      const Json& v = block.at("mode");
      if (!v.is_string()) throw ConfigError("lockin.mode must be a string");
      sc.lockin.mode = v.get<std::string>();
      if (sc.lockin.mode != "demod" && sc.lockin.mode != "servo" && sc.lockin.mode != "sas") {
        throw ConfigError("lockin.mode must be demod, servo or sas");
      }
    } else {
      defs->push_back("lockin.mode");
    }
    sc.lockin.s1 = read_double(block, "lockin", "s1", 0.3, defs);
    sc.lockin.s2 = read_double(block, "lockin", "s2", 0.7, defs);
    sc.lockin.ref_freq_hz =
        read_double(block, "lockin", "ref_freq_hz", constants::default_modulation_freq_hz, defs);
    sc.lockin.noise_rms = read_double(block, "lockin", "noise_rms", 0.0, defs);
    sc.lockin.duration_s = read_double(block, "lockin", "duration_s", 1e-3, defs);
    sc.lockin.sample_rate_hz = read_double(block, "lockin", "sample_rate_hz", 2e6, defs);

    const Json servo = block.contains("servo") ? block.at("servo") : Json::object();
    sc.lockin.servo.gain = read_double(servo, "lockin.servo", "gain", 0.5, defs);
    sc.lockin.servo.setpoint_hz = read_double(servo, "lockin.servo", "setpoint_hz", 8e6, defs);
    sc.lockin.servo.fvc_slope = read_double(servo, "lockin.servo", "fvc_slope", 1.0, defs);
    sc.lockin.servo.v_offset = read_double(servo, "lockin.servo", "v_offset", 0.0, defs);
    sc.lockin.servo.max_steps = read_int(servo, "lockin.servo", "max_steps", 10000, defs);
    sc.lockin.servo.tolerance_hz = read_double(servo, "lockin.servo", "tolerance_hz", 1.0, defs);
    sc.lockin.servo.initial_offset_hz =
        read_double(servo, "lockin.servo", "initial_offset_hz", 1e6, defs);

    const Json sas = block.contains("sas") ? block.at("sas") : Json::object();
    sc.lockin.sas.detuning_min_hz =
        read_double(sas, "lockin.sas", "detuning_min_hz", -300e6, defs);
    sc.lockin.sas.detuning_max_hz =
        read_double(sas, "lockin.sas", "detuning_max_hz", 300e6, defs);
    sc.lockin.sas.points = static_cast<int>(read_int(sas, "lockin.sas", "points", 601, defs));
    sc.lockin.sas.doppler_width_hz =
        read_double(sas, "lockin.sas", "doppler_width_hz", 250e6, defs);
    sc.lockin.sas.lamb_dip_width_hz =
        read_double(sas, "lockin.sas", "lamb_dip_width_hz", 3e6, defs);
    sc.lockin.sas.doppler_center_hz =
        read_double(sas, "lockin.sas", "doppler_center_hz", 0.0, defs);
    if (sas.contains("transitions")) {
      for (const Json& t : sas.at("transitions")) {
        sc.lockin.sas.transitions.emplace_back(
            read_double(t, "lockin.sas.transitions[]", "center_hz", 0.0, nullptr),
            read_double(t, "lockin.sas.transitions[]", "depth", 0.0, nullptr));
      }
    } else {
      // Repump line with its crossover partner 157 MHz below.
      sc.lockin.sas.transitions = {{0.0, 0.25}, {-157e6, 0.25}};
      defs->push_back("lockin.sas.transitions");
    }
  }

  {
    const Json block = block_or_empty(doc, "alignment");
    sc.align.tilt_rad = read_double(block, "alignment", "tilt_rad", 0.0, defs);
    sc.align.safety_factor = read_double(block, "alignment", "safety_factor", 10.0, defs);
  }

  return sc;
}

Scenario load_scenario_file(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  return load_scenario(doc, required);
}

Json Scenario::echo() const {
  Json j;
  j["interferometer"] = {{"lambda_laser_m", config.lambda_laser},
                         {"k_eff_rad_m", config.k_eff},
                         {"v_z_mps", config.v_z},
                         {"d_m", config.d},
                         {"L_m", config.L},
                         {"T_s", config.T},
                         {"atom_mass_kg", config.atom_mass},
                         {"n_atoms_per_shot", config.n_atoms_per_shot},
                         {"contrast", config.contrast},
                         {"sagnac_area_m2", sagnac_area_m2}};
  Json steps = Json::array();
  for (const InertialStep& s : truth.steps) {
    steps.push_back({{"t_s", s.t}, {"accel_mps2", s.accel}, {"rot_rate_radps", s.rot_rate}});
  }
  j["inertial"] = {{"piecewise", std::move(steps)}};
  j["scan"] = {{"points", scan.points},      {"pzt_max_m", scan.pzt_max_m},
               {"seed", scan.seed},          {"noise", scan.noise},
               {"phi1_rad", scan.phi1_rad},  {"phi2_rad", scan.phi2_rad}};
  j["navigation"] = {{"dt_s", navigation.dt_s},
                     {"duration_s", navigation.duration_s},
                     {"fringe_order_forward", navigation.fringe_order_forward},
                     {"fringe_order_backward", navigation.fringe_order_backward}};
  j["lockin"] = {{"mode", lockin.mode},
                 {"s1", lockin.s1},
                 {"s2", lockin.s2},
                 {"ref_freq_hz", lockin.ref_freq_hz},
                 {"noise_rms", lockin.noise_rms},
                 {"duration_s", lockin.duration_s},
                 {"sample_rate_hz", lockin.sample_rate_hz},
                 {"servo",
                  {{"gain", lockin.servo.gain},
                   {"setpoint_hz", lockin.servo.setpoint_hz},
                   {"fvc_slope", lockin.servo.fvc_slope},
                   {"v_offset", lockin.servo.v_offset},
                   {"max_steps", lockin.servo.max_steps},
                   {"tolerance_hz", lockin.servo.tolerance_hz},
                   {"initial_offset_hz", lockin.servo.initial_offset_hz}}}};
  Json transitions = Json::array();
  for (const auto& [center, depth] : lockin.sas.transitions) {
    transitions.push_back({{"center_hz", center}, {"depth", depth}});
  }
  j["lockin"]["sas"] = {{"detuning_min_hz", lockin.sas.detuning_min_hz},
                        {"detuning_max_hz", lockin.sas.detuning_max_hz},
                        {"points", lockin.sas.points},
                        {"doppler_width_hz", lockin.sas.doppler_width_hz},
                        {"lamb_dip_width_hz", lockin.sas.lamb_dip_width_hz},
                        {"doppler_center_hz", lockin.sas.doppler_center_hz},
                        {"transitions", std::move(transitions)}};
  j["alignment"] = {{"tilt_rad", align.tilt_rad}, {"safety_factor", align.safety_factor}};
  Json defaults = Json::array();
  for (const std::string& d : defaults_applied) defaults.push_back(d);
  j["defaults_applied"] = std::move(defaults);
  return j;
}

}  // namespace coldnav::scenario
