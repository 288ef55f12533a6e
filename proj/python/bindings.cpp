#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "coldnav/alignment.hpp"
#include "coldnav/atom_optics.hpp"
#include "coldnav/constants.hpp"
#include "coldnav/freq_chain.hpp"
#include "coldnav/interferometer.hpp"
#include "coldnav/lockin_servo.hpp"
#include "coldnav/navigation.hpp"

namespace py = pybind11;
using namespace coldnav;

namespace {

py::dict check_report_to_dicts(const freq_chain::CheckReport& report) {
  py::list results;
  for (const auto& r : report.results) {
    py::dict item;
    item["id"] = r.id;
    item["expected_hz"] = static_cast<double>(r.expected) / 1000.0;
    if (r.nearest.has_value()) {
      item["nearest_hz"] = static_cast<double>(*r.nearest) / 1000.0;
    } else {
      item["nearest_hz"] = py::none();
    }
    item["pass"] = r.pass;
    results.append(item);
  }
  py::dict out;
  out["results"] = results;
  out["all_pass"] = report.all_pass;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cold-atom-beam Mach-Zehnder interferometer and inertial navigation simulator";

  // ---- atom optics ----
  py::class_<atom_optics::AtomState>(m, "AtomState")
      .def(py::init<>())
      .def(py::init([](std::complex<double> f, std::complex<double> e) {
             return atom_optics::AtomState{f, e};
           }),
           py::arg("amp_f"), py::arg("amp_e"))
      .def_readwrite("amp_f", &atom_optics::AtomState::amp_f)
      .def_readwrite("amp_e", &atom_optics::AtomState::amp_e)
      .def("norm_sq", &atom_optics::AtomState::norm_sq)
      .def("ground_population", &atom_optics::AtomState::ground_population)
      .def("excited_population", &atom_optics::AtomState::excited_population);

  py::class_<atom_optics::RamanPulse>(m, "RamanPulse")
      .def_readonly("rabi_phase", &atom_optics::RamanPulse::rabi_phase)
      .def_readonly("laser_phase", &atom_optics::RamanPulse::laser_phase)
      .def_readonly("duration", &atom_optics::RamanPulse::duration)
      .def_static("half_pi", &atom_optics::RamanPulse::half_pi, py::arg("laser_phase"),
                  py::arg("duration") = 0.0)
      .def_static("pi", &atom_optics::RamanPulse::pi, py::arg("laser_phase"),
                  py::arg("duration") = 0.0)
      .def_static("custom", &atom_optics::RamanPulse::custom, py::arg("rabi_phase"),
                  py::arg("laser_phase"), py::arg("duration") = 0.0);

  py::class_<atom_optics::PulseUnitary>(m, "PulseUnitary")
      .def_readonly("ff", &atom_optics::PulseUnitary::ff)
      .def_readonly("fe", &atom_optics::PulseUnitary::fe)
      .def_readonly("ef", &atom_optics::PulseUnitary::ef)
      .def_readonly("ee", &atom_optics::PulseUnitary::ee)
      .def("apply", &atom_optics::PulseUnitary::apply)
      .def("unitarity_defect", &atom_optics::PulseUnitary::unitarity_defect);

  m.def("pulse_unitary", &atom_optics::pulse_unitary);
  m.def("apply_pulse", &atom_optics::apply_pulse);
  m.def("compose_sequence", [](const std::vector<atom_optics::RamanPulse>& pulses) {
    return atom_optics::compose_sequence(pulses);
  });

  // ---- interferometer ----
  py::class_<interferometer::InterferometerConfig>(m, "InterferometerConfig")
      .def(py::init<>())
      .def_static("from_geometry", &interferometer::InterferometerConfig::from_geometry,
                  py::arg("lambda_laser"), py::arg("v_z"), py::arg("d"), py::arg("L"),
                  py::arg("atom_mass"), py::arg("n_atoms_per_shot"), py::arg("contrast") = 1.0)
      .def("reversed", &interferometer::InterferometerConfig::reversed)
      .def("validate", &interferometer::InterferometerConfig::validate)
      .def_readwrite("lambda_laser", &interferometer::InterferometerConfig::lambda_laser)
      .def_readwrite("k_eff", &interferometer::InterferometerConfig::k_eff)
      .def_readwrite("v_z", &interferometer::InterferometerConfig::v_z)
      .def_readwrite("d", &interferometer::InterferometerConfig::d)
      .def_readwrite("L", &interferometer::InterferometerConfig::L)
      .def_readwrite("T", &interferometer::InterferometerConfig::T)
      .def_readwrite("atom_mass", &interferometer::InterferometerConfig::atom_mass)
      .def_readwrite("n_atoms_per_shot", &interferometer::InterferometerConfig::n_atoms_per_shot)
      .def_readwrite("contrast", &interferometer::InterferometerConfig::contrast);

  py::class_<interferometer::InertialInput>(m, "InertialInput")
      .def(py::init([](double accel, double rot_rate, double sagnac_area) {
             return interferometer::InertialInput{accel, rot_rate, sagnac_area};
           }),
           py::arg("accel") = 0.0, py::arg("rot_rate") = 0.0, py::arg("sagnac_area") = 0.0)
      .def_readwrite("accel", &interferometer::InertialInput::accel)
      .def_readwrite("rot_rate", &interferometer::InertialInput::rot_rate)
      .def_readwrite("sagnac_area", &interferometer::InertialInput::sagnac_area);

  py::class_<interferometer::FringeScan>(m, "FringeScan")
      .def(py::init<>())
      .def_readwrite("phases", &interferometer::FringeScan::phases)
      .def_readwrite("populations", &interferometer::FringeScan::populations)
      .def_readwrite("counts", &interferometer::FringeScan::counts);

  m.def("default_config", &interferometer::default_config);
  m.def("accel_phase", &interferometer::accel_phase);
  m.def("rotation_phase", &interferometer::rotation_phase);
  m.def("sagnac_area_from_geometry", &interferometer::sagnac_area_from_geometry);
  m.def("fringe_probability", &interferometer::fringe_probability, py::arg("total_phase"),
        py::arg("contrast") = 1.0);
  m.def("phase_from_trajectory", &interferometer::phase_from_trajectory, py::arg("config"),
        py::arg("position_at"), py::arg("t1"), py::arg("t2"), py::arg("t3"));
  m.def(
      "simulate_shot",
      [](const interferometer::InterferometerConfig& cfg,
         const interferometer::InertialInput& inertial, double phi1, double phi2, double phi3,
         std::uint64_t seed) {
        const auto r = interferometer::simulate_shot(cfg, inertial, {phi1, phi2, phi3}, seed);
        return py::make_tuple(r.probability, r.count);
      },
      py::arg("config"), py::arg("inertial"), py::arg("phi1"), py::arg("phi2"), py::arg("phi3"),
      py::arg("seed"));
  m.def(
      "pzt_scan",
      [](const interferometer::InterferometerConfig& cfg,
         const interferometer::InertialInput& inertial, double phi1, double phi2,
         const std::vector<double>& displacements, std::uint64_t seed, bool noise) {
        return interferometer::pzt_scan(cfg, inertial, phi1, phi2, displacements, seed,
                                        noise ? interferometer::DetectionMode::Counting
                                              : interferometer::DetectionMode::Ideal);
      },
      py::arg("config"), py::arg("inertial"), py::arg("phi1"), py::arg("phi2"),
      py::arg("displacements"), py::arg("seed") = 1, py::arg("noise") = true);
  m.def("pzt_sweep", &interferometer::pzt_sweep, py::arg("points"),
        py::arg("max_displacement") = constants::pzt_max_displacement_m);

  // ---- alignment ----
  py::class_<alignment::BeamGeometry>(m, "BeamGeometry")
      .def(py::init([](double d, double v_z, double k_eff, double tilt) {
             return alignment::BeamGeometry{d, v_z, k_eff, tilt};
           }),
           py::arg("d"), py::arg("v_z"), py::arg("k_eff"), py::arg("tilt") = 0.0)
      .def_readwrite("d", &alignment::BeamGeometry::d)
      .def_readwrite("v_z", &alignment::BeamGeometry::v_z)
      .def_readwrite("k_eff", &alignment::BeamGeometry::k_eff)
      .def_readwrite("tilt", &alignment::BeamGeometry::tilt);

  py::class_<alignment::AlignmentReport>(m, "AlignmentReport")
      .def_readonly("tau_s", &alignment::AlignmentReport::tau_s)
      .def_readonly("linewidth_rad_s", &alignment::AlignmentReport::linewidth_rad_s)
      .def_readonly("max_tilt_rad", &alignment::AlignmentReport::max_tilt_rad)
      .def_readonly("tilt_rad", &alignment::AlignmentReport::tilt_rad)
      .def_readonly("safety_factor", &alignment::AlignmentReport::safety_factor)
      .def_readonly("pass_", &alignment::AlignmentReport::pass)
      .def("__bool__", [](const alignment::AlignmentReport& r) { return r.pass; });

  m.def("pulse_duration", &alignment::pulse_duration);
  m.def("raman_linewidth", &alignment::raman_linewidth);
  m.def("doppler_shift", &alignment::doppler_shift);
  m.def("max_tilt", &alignment::max_tilt);
  m.def("check_alignment", &alignment::check_alignment, py::arg("geometry"),
        py::arg("safety_factor") = 10.0);

  // ---- frequency chain ----
  py::class_<freq_chain::FreqChain>(m, "FreqChain")
      .def_property_readonly("node_count",
                             [](const freq_chain::FreqChain& c) { return c.nodes.size(); })
      .def_property_readonly("check_count",
                             [](const freq_chain::FreqChain& c) { return c.checks.size(); });

  m.def("parse_chain", [](const std::string& text) { return freq_chain::parse_chain(text); });
  m.def("parse_chain_file", &freq_chain::parse_chain_file);
  m.def("parse_frequency_mhz_exact",
        [](const std::string& text) { return freq_chain::parse_frequency(text); },
        "Parse a frequency literal to exact integer millihertz");
  m.def("evaluate_chain", [](const freq_chain::FreqChain& chain) {
    py::dict out;
    for (const auto& [id, set] : freq_chain::evaluate(chain)) {
      py::list components;
      for (const auto f : set.components) components.append(static_cast<double>(f) / 1000.0);
      out[py::str(id)] = components;
    }
    return out;
  });
  m.def("check_locks",
        [](const freq_chain::FreqChain& chain) {
          return check_report_to_dicts(freq_chain::check_locks(chain));
        });

  // ---- lock-in / servo ----
  py::class_<lockin::ModulatedSignal>(m, "ModulatedSignal")
      .def_readwrite("sample_rate", &lockin::ModulatedSignal::sample_rate)
      .def_readwrite("ref_freq", &lockin::ModulatedSignal::ref_freq)
      .def_readwrite("samples", &lockin::ModulatedSignal::samples);

  py::class_<lockin::ServoConfig>(m, "ServoConfig")
      .def(py::init([](double gain, double setpoint, double fvc_slope, long long max_steps,
                       double tolerance, double v_offset) {
             return lockin::ServoConfig{gain, setpoint, v_offset, fvc_slope, max_steps,
                                        tolerance};
           }),
           py::arg("gain"), py::arg("setpoint"), py::arg("fvc_slope"), py::arg("max_steps"),
           py::arg("tolerance"), py::arg("v_offset") = 0.0)
      .def_readwrite("gain", &lockin::ServoConfig::gain)
      .def_readwrite("setpoint", &lockin::ServoConfig::setpoint)
      .def_readwrite("fvc_slope", &lockin::ServoConfig::fvc_slope)
      .def_readwrite("max_steps", &lockin::ServoConfig::max_steps)
      .def_readwrite("tolerance", &lockin::ServoConfig::tolerance)
      .def_readwrite("v_offset", &lockin::ServoConfig::v_offset);

  py::enum_<lockin::ServoStatus>(m, "ServoStatus")
      .value("Converged", lockin::ServoStatus::Converged)
      .value("MaxStepsReached", lockin::ServoStatus::MaxStepsReached)
      .value("Unstable", lockin::ServoStatus::Unstable);

  py::class_<lockin::ServoRun>(m, "ServoRun")
      .def_readonly("status", &lockin::ServoRun::status)
      .def_readonly("converged_at", &lockin::ServoRun::converged_at)
      .def_readonly("loop_gain", &lockin::ServoRun::loop_gain)
      .def_property_readonly("trajectory", [](const lockin::ServoRun& run) {
        py::list out;
        for (const auto& s : run.trajectory) out.append(py::make_tuple(s.step, s.freq, s.error));
        return out;
      });

  m.def("synthesize", &lockin::synthesize, py::arg("s1"), py::arg("s2"), py::arg("ref_freq"),
        py::arg("noise_rms"), py::arg("duration"), py::arg("sample_rate"), py::arg("seed") = 1);
  m.def("demodulate", &lockin::demodulate);
  m.def("demodulate_raw", &lockin::demodulate_raw);
  m.def("fvc_error", &lockin::fvc_error);
  m.def(
      "run_servo",
      [](double initial_freq, const std::function<double(long long)>& disturbance,
         const lockin::ServoConfig& cfg) { return lockin::run_servo(initial_freq, disturbance, cfg); },
      py::arg("initial_freq"), py::arg("disturbance"), py::arg("config"));
  m.def(
      "sas_spectrum",
      [](double lo, double hi, int n, const std::vector<std::pair<double, double>>& transitions,
         double doppler_width, double dip_width, double doppler_center) {
        std::vector<lockin::Transition> lines;
        lines.reserve(transitions.size());
        for (const auto& [center, depth] : transitions) lines.push_back({center, depth});
        const auto spec =
            lockin::sas_spectrum(lo, hi, n, lines, doppler_width, dip_width, doppler_center);
        py::list out;
        for (const auto& p : spec) out.append(py::make_tuple(p.detuning, p.absorption));
        return out;
      },
      py::arg("detuning_min"), py::arg("detuning_max"), py::arg("points"),
      py::arg("transitions"), py::arg("doppler_width"), py::arg("lamb_dip_width"),
      py::arg("doppler_center") = 0.0);

  // ---- navigation ----
  py::class_<nav::PhaseEstimate>(m, "PhaseEstimate")
      .def_readonly("total_phase", &nav::PhaseEstimate::total_phase)
      .def_readonly("contrast_est", &nav::PhaseEstimate::contrast_est)
      .def_readonly("residual_rms", &nav::PhaseEstimate::residual_rms)
      .def_readonly("covariance", &nav::PhaseEstimate::covariance)
      .def_readonly("low_contrast", &nav::PhaseEstimate::low_contrast)
      .def_readonly("contrast_overshoot", &nav::PhaseEstimate::contrast_overshoot);

  py::class_<nav::NavState>(m, "NavState")
      .def(py::init([](double time, double x, double y, double vx, double vy, double heading) {
             return nav::NavState{time, x, y, vx, vy, heading};
           }),
           py::arg("time") = 0.0, py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("vx") = 0.0,
           py::arg("vy") = 0.0, py::arg("heading") = 0.0)
      .def_readwrite("time", &nav::NavState::time)
      .def_readwrite("x", &nav::NavState::x)
      .def_readwrite("y", &nav::NavState::y)
      .def_readwrite("vx", &nav::NavState::vx)
      .def_readwrite("vy", &nav::NavState::vy)
      .def_readwrite("heading", &nav::NavState::heading);

  py::class_<nav::ImuSample>(m, "ImuSample")
      .def(py::init([](double ax, double ay, double rot) {
             return nav::ImuSample{ax, ay, rot};
           }),
           py::arg("accel_x") = 0.0, py::arg("accel_y") = 0.0, py::arg("rot_rate") = 0.0)
      .def_readwrite("accel_x", &nav::ImuSample::accel_x)
      .def_readwrite("accel_y", &nav::ImuSample::accel_y)
      .def_readwrite("rot_rate", &nav::ImuSample::rot_rate);

  py::class_<nav::DualScanInversion>(m, "DualScanInversion")
      .def_readonly("accel", &nav::DualScanInversion::accel)
      .def_readonly("rot_rate", &nav::DualScanInversion::rot_rate)
      .def_readonly("accel_phase", &nav::DualScanInversion::accel_phase)
      .def_readonly("rotation_phase", &nav::DualScanInversion::rotation_phase);

  py::class_<nav::Sensitivity>(m, "Sensitivity")
      .def_readonly("accel_res", &nav::Sensitivity::accel_res)
      .def_readonly("rot_res", &nav::Sensitivity::rot_res)
      .def_readonly("shot_noise_phase", &nav::Sensitivity::shot_noise_phase);

  m.def("fit_fringe", &nav::fit_fringe);
  m.def("separate_inertial", [](double fwd, double bwd) {
    const auto parts = nav::separate_inertial(fwd, bwd);
    return py::make_tuple(parts.accel_phase, parts.rotation_phase);
  });
  m.def("accel_from_phase", &nav::accel_from_phase);
  m.def("rotation_from_phase", &nav::rotation_from_phase);
  m.def("sensitivity", &nav::sensitivity);
  m.def("unwrap_phase", &nav::unwrap_phase, py::arg("phase_mod_2pi"),
        py::arg("fringe_order") = 0);
  m.def(
      "dead_reckon",
      [](const std::vector<nav::ImuSample>& samples, double dt, const nav::NavState& initial) {
        return nav::dead_reckon(samples, dt, initial);
      },
      py::arg("samples"), py::arg("dt"), py::arg("initial") = nav::NavState{});
  m.def("invert_dual", &nav::invert_dual, py::arg("forward"), py::arg("backward"),
        py::arg("forward_config"), py::arg("forward_sagnac_area"),
        py::arg("calibration_offset") = 0.0, py::arg("order_forward") = 0,
        py::arg("order_backward") = 0);

  // ---- constants ----
  m.attr("HBAR") = constants::hbar;
  m.attr("PLANCK") = constants::planck;
  m.attr("RB87_MASS_KG") = constants::rb87_mass_kg;
  m.attr("PZT_MAX_DISPLACEMENT_M") = constants::pzt_max_displacement_m;
  m.attr("PZT_PHASE_RAD_AT_MAX") = constants::pzt_phase_rad_at_max;
  m.attr("EARTH_ROTATION_RATE_RADPS") = constants::earth_rotation_rate_radps;
}
