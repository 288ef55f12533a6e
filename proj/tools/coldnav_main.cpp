#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coldnav/alignment.hpp"
#include "coldnav/freq_chain.hpp"
#include "coldnav/interferometer.hpp"
#include "coldnav/io.hpp"
#include "coldnav/lockin_servo.hpp"
#include "coldnav/navigation.hpp"
#include "coldnav/random.hpp"
#include "scenario.hpp"

// Scenario runner: simulate fringe scans, invert them to inertial estimates
// and dead-reckon, verify frequency-chain lock points, and run the lock-in /
// servo demos. Exit codes: 0 ok, 1 I/O failure, 2 configuration error,
// 3 check failure.

namespace {

namespace fs = std::filesystem;
using coldnav::io::Json;
using coldnav::scenario::Scenario;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool json = false;
};

Scenario load(const GlobalOptions& opts, const std::vector<std::string>& required_blocks) {
  Scenario sc;
  if (opts.config_path.empty()) {
    sc = coldnav::scenario::load_scenario(Json::object(), {});
  } else {
    sc = coldnav::scenario::load_scenario_file(opts.config_path, required_blocks);
  }
  if (opts.seed_set) sc.scan.seed = opts.seed;
  return sc;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

void emit(const GlobalOptions& opts, const Json& summary, const std::string& human) {
  if (opts.json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

coldnav::nav::PhaseEstimate fit_scan(const coldnav::interferometer::FringeScan& scan) {
  return coldnav::nav::fit_fringe(scan);
}

// Noise-free zero-input run that measures the laser-phase combination
// phi1 - 2 phi2 absorbed in every fitted phase.
double calibration_offset(const Scenario& sc) {
  using namespace coldnav::interferometer;
  const InertialInput rest{0.0, 0.0, sc.sagnac_area_m2};
  const FringeScan scan =
      pzt_scan(sc.config, rest, sc.scan.phi1_rad, sc.scan.phi2_rad,
               pzt_sweep(sc.scan.points, sc.scan.pzt_max_m), 0, DetectionMode::Ideal);
  return fit_scan(scan).total_phase;
}

int cmd_fringe(const GlobalOptions& opts) {
  using namespace coldnav::interferometer;
  const Scenario sc = load(opts, {"interferometer", "inertial", "scan"});
  ensure_out_dir(opts.out_dir);

  const double accel = sc.truth.accel_at(0.0);
  const double rot = sc.truth.rot_rate_at(0.0);
  const InertialInput inertial{accel, rot, sc.sagnac_area_m2};
  const auto disps = pzt_sweep(sc.scan.points, sc.scan.pzt_max_m);
  const FringeScan scan =
      pzt_scan(sc.config, inertial, sc.scan.phi1_rad, sc.scan.phi2_rad, disps, sc.scan.seed,
               sc.scan.noise ? DetectionMode::Counting : DetectionMode::Ideal);

  const double phi_a = accel_phase(sc.config, accel);
  const double phi_w = rotation_phase(sc.config, rot, sc.sagnac_area_m2);
  const double combo = sc.scan.phi1_rad - 2.0 * sc.scan.phi2_rad;

  Json summary;
  summary["command"] = "fringe";
  summary["true_phases"] = {{"accel_phase_rad", phi_a},
                            {"rotation_phase_rad", phi_w},
                            {"laser_combination_rad", combo},
                            {"total_rad", phi_a + phi_w + combo}};
  summary["outputs"] = {{"csv", (fs::path(opts.out_dir) / "fringe.csv").string()}};
  summary["scenario"] = sc.echo();

  coldnav::io::write_file((fs::path(opts.out_dir) / "fringe.csv").string(),
                          coldnav::io::fringe_scan_csv(scan));
  coldnav::io::write_file((fs::path(opts.out_dir) / "fringe.json").string(),
                          summary.dump(2) + "\n");

  char line[160];
  std::snprintf(line, sizeof(line),
                "fringe: %d points, true total phase %.6f rad, wrote %s\n", sc.scan.points,
                phi_a + phi_w + combo, (fs::path(opts.out_dir) / "fringe.csv").string().c_str());
  emit(opts, summary, line);
  return kExitOk;
}

int cmd_navigate(const GlobalOptions& opts) {
  using namespace coldnav::interferometer;
  using namespace coldnav::nav;
  const Scenario sc = load(opts, {"interferometer", "inertial", "scan", "navigation"});
  ensure_out_dir(opts.out_dir);

  const InterferometerConfig fwd = sc.config;
  const InterferometerConfig bwd = fwd.reversed();
  const double area_f = sc.sagnac_area_m2;
  const double area_b = -sc.sagnac_area_m2;
  const auto disps = pzt_sweep(sc.scan.points, sc.scan.pzt_max_m);
  const DetectionMode mode =
      sc.scan.noise ? DetectionMode::Counting : DetectionMode::Ideal;
  const double offset = calibration_offset(sc);

  const long long epochs =
      std::llround(sc.navigation.duration_s / sc.navigation.dt_s) + 1;
  std::vector<ImuSample> measured;
  std::vector<ImuSample> truth_samples;
  Json estimates = Json::array();
  measured.reserve(static_cast<std::size_t>(epochs));

  for (long long k = 0; k < epochs; ++k) {
    const double t = static_cast<double>(k) * sc.navigation.dt_s;
    const double a_true = sc.truth.accel_at(t);
    const double w_true = sc.truth.rot_rate_at(t);
    truth_samples.push_back({a_true, 0.0, w_true});

    const InertialInput in_f{a_true, w_true, area_f};
    const InertialInput in_b{a_true, w_true, area_b};
    const FringeScan scan_f =
        pzt_scan(fwd, in_f, sc.scan.phi1_rad, sc.scan.phi2_rad, disps,
                 coldnav::rng::mix_seed(sc.scan.seed, static_cast<std::uint64_t>(k), 0), mode);
    const FringeScan scan_b =
        pzt_scan(bwd, in_b, sc.scan.phi1_rad, sc.scan.phi2_rad, disps,
                 coldnav::rng::mix_seed(sc.scan.seed, static_cast<std::uint64_t>(k), 1), mode);

    const PhaseEstimate est_f = fit_scan(scan_f);
    const PhaseEstimate est_b = fit_scan(scan_b);
    const DualScanInversion inv =
        invert_dual(est_f, est_b, fwd, area_f, offset, sc.navigation.fringe_order_forward,
                    sc.navigation.fringe_order_backward);
    measured.push_back({inv.accel, 0.0, inv.rot_rate});
    if (k < 16) {  // keep the summary bounded
      estimates.push_back(coldnav::io::estimate_json(est_f, inv.accel, inv.rot_rate));
    }
  }

  const NavState origin{};
  const auto trajectory = dead_reckon(measured, sc.navigation.dt_s, origin);
  const auto truth_traj = dead_reckon(truth_samples, sc.navigation.dt_s, origin);

  double rms = 0.0;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double dx = trajectory[i].x - truth_traj[i].x;
    const double dy = trajectory[i].y - truth_traj[i].y;
    rms += dx * dx + dy * dy;
  }
  rms = std::sqrt(rms / static_cast<double>(trajectory.size()));
  const double final_err = std::hypot(trajectory.back().x - truth_traj.back().x,
                                      trajectory.back().y - truth_traj.back().y);

  Json summary;
  summary["command"] = "navigate";
  summary["epochs"] = epochs;
  summary["calibration_offset_rad"] = offset;
  summary["final_state"] = {{"t", trajectory.back().time},
                            {"x", trajectory.back().x},
                            {"y", trajectory.back().y},
                            {"vx", trajectory.back().vx},
                            {"vy", trajectory.back().vy},
                            {"heading", trajectory.back().heading}};
  summary["truth_final_state"] = {{"t", truth_traj.back().time},
                                  {"x", truth_traj.back().x},
                                  {"y", truth_traj.back().y},
                                  {"vx", truth_traj.back().vx},
                                  {"vy", truth_traj.back().vy},
                                  {"heading", truth_traj.back().heading}};
  summary["final_position_error_m"] = final_err;
  summary["rms_position_error_m"] = rms;
  summary["estimates"] = std::move(estimates);
  summary["outputs"] = {{"csv", (fs::path(opts.out_dir) / "trajectory.csv").string()}};
  summary["scenario"] = sc.echo();

  coldnav::io::write_file((fs::path(opts.out_dir) / "trajectory.csv").string(),
                          coldnav::io::trajectory_csv(trajectory));
  coldnav::io::write_file((fs::path(opts.out_dir) / "navigate.json").string(),
                          summary.dump(2) + "\n");

  char line[200];
  std::snprintf(line, sizeof(line),
                "navigate: %lld epochs, final position (%.4f, %.4f) m, error vs truth %.3e m\n",
                epochs, trajectory.back().x, trajectory.back().y, final_err);
  emit(opts, summary, line);
  return kExitOk;
}

int cmd_chain(const std::string& path) {
  using namespace coldnav::freq_chain;
  FreqChain chain;
  try {
    chain = parse_chain_file(path);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return kExitConfig;
  }
  const CheckReport report = check_locks(chain);
  std::cout << coldnav::io::check_report_json(report).dump(2) << "\n";
  return report.all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_lockin(const GlobalOptions& opts) {
  using namespace coldnav::lockin;
  const Scenario sc = load(opts, {"lockin"});
  ensure_out_dir(opts.out_dir);
  const auto& lk = sc.lockin;

  Json summary;
  summary["command"] = "lockin";
  summary["mode"] = lk.mode;
  std::string human;

  if (lk.mode == "demod") {
    const ModulatedSignal sig = synthesize(lk.s1, lk.s2, lk.ref_freq_hz, lk.noise_rms,
                                           lk.duration_s, lk.sample_rate_hz, sc.scan.seed);
    const double raw = demodulate_raw(sig);
    const double estimate = 2.0 * raw;
    summary["s1_true"] = lk.s1;
    summary["s1_estimate"] = estimate;
    summary["raw_integral"] = raw;
    summary["samples"] = sig.samples.size();
    coldnav::io::write_file((fs::path(opts.out_dir) / "lockin_signal.csv").string(),
                            coldnav::io::signal_csv(sig));
    summary["outputs"] = {{"csv", (fs::path(opts.out_dir) / "lockin_signal.csv").string()}};
    char line[160];
    std::snprintf(line, sizeof(line), "lockin demod: s1 estimate %.9f (true %.9f)\n", estimate,
                  lk.s1);
    human = line;
  } else if (lk.mode == "servo") {
    ServoConfig cfg;
    cfg.gain = lk.servo.gain;
    cfg.setpoint = lk.servo.setpoint_hz;
    cfg.fvc_slope = lk.servo.fvc_slope;
    cfg.v_offset = lk.servo.v_offset;
    cfg.max_steps = lk.servo.max_steps;
    cfg.tolerance = lk.servo.tolerance_hz;
    const ServoRun run = run_servo(lk.servo.setpoint_hz + lk.servo.initial_offset_hz, nullptr,
                                   cfg);
    summary["status"] = run.status == ServoStatus::Converged       ? "converged"
                        : run.status == ServoStatus::Unstable      ? "unstable"
                                                                   : "max_steps";
    summary["converged"] = run.status == ServoStatus::Converged;
    summary["converged_at_step"] = run.converged_at;
    summary["loop_gain"] = run.loop_gain;
    summary["final_freq_hz"] = run.trajectory.back().freq;
    coldnav::io::write_file((fs::path(opts.out_dir) / "servo.csv").string(),
                            coldnav::io::servo_csv(run));
    summary["outputs"] = {{"csv", (fs::path(opts.out_dir) / "servo.csv").string()}};
    char line[160];
    std::snprintf(line, sizeof(line), "lockin servo: %s after %zu steps, final %.3f Hz\n",
                  summary["status"].get<std::string>().c_str(), run.trajectory.size(),
                  run.trajectory.back().freq);
    human = line;
  } else {  // sas
    std::vector<Transition> transitions;
    for (const auto& [center, depth] : lk.sas.transitions) {
      transitions.push_back({center, depth});
    }
    const auto spectrum =
        sas_spectrum(lk.sas.detuning_min_hz, lk.sas.detuning_max_hz, lk.sas.points, transitions,
                     lk.sas.doppler_width_hz, lk.sas.lamb_dip_width_hz,
                     lk.sas.doppler_center_hz);
    coldnav::io::write_file((fs::path(opts.out_dir) / "sas.csv").string(),
                            coldnav::io::spectrum_csv(spectrum));
    summary["points"] = spectrum.size();
    summary["outputs"] = {{"csv", (fs::path(opts.out_dir) / "sas.csv").string()}};
    char line[160];
    std::snprintf(line, sizeof(line), "lockin sas: %zu spectrum points written\n",
                  spectrum.size());
    human = line;
  }

  summary["scenario"] = sc.echo();
  coldnav::io::write_file((fs::path(opts.out_dir) / "lockin.json").string(),
                          summary.dump(2) + "\n");
  emit(opts, summary, human);
  return kExitOk;
}

int cmd_align(const GlobalOptions& opts) {
  using namespace coldnav::alignment;
  const Scenario sc = load(opts, {"alignment"});
  const BeamGeometry g{sc.config.d, std::abs(sc.config.v_z), sc.config.k_eff,
                       sc.align.tilt_rad};
  const AlignmentReport report = check_alignment(g, sc.align.safety_factor);
  Json j = coldnav::io::alignment_report_json(report);
  j["safety_factor"] = report.safety_factor;
  j["scenario"] = sc.echo();
  std::cout << j.dump(2) << "\n";
  return report.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coldnav: cold-atom-beam interferometer and inertial navigation simulator"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "Scenario JSON document");
  app.add_option("--out", opts.out_dir, "Output directory (default: current)");
  auto* seed_opt = app.add_option("--seed", opts.seed, "Override the scenario RNG seed");
  app.add_flag("--json", opts.json, "Machine-readable summary on stdout");

  auto* fringe = app.add_subcommand("fringe", "Simulate a PZT fringe scan");
  auto* navigate = app.add_subcommand("navigate", "Dual-beam inversion + dead reckoning");
  auto* chain = app.add_subcommand("chain", "Parse and verify a frequency-chain file");
  std::string chain_path;
  chain->add_option("file", chain_path, "Chain description (.fc)")->required();
  auto* lockin = app.add_subcommand("lockin", "Lock-in demodulation / servo / SAS demos");
  auto* align = app.add_subcommand("align", "Check Raman beam alignment tolerances");
  for (auto* sub : {fringe, navigate, chain, lockin, align}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : kExitOk;
  }
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (fringe->parsed()) return cmd_fringe(opts);
    if (navigate->parsed()) return cmd_navigate(opts);
    if (chain->parsed()) return cmd_chain(chain_path);
    if (lockin->parsed()) return cmd_lockin(opts);
    if (align->parsed()) return cmd_align(opts);
  } catch (const coldnav::scenario::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const coldnav::freq_chain::EvalError& e) {
    std::cerr << "chain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
