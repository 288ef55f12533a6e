#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "coldnav/alignment.hpp"
#include "coldnav/freq_chain.hpp"
#include "coldnav/interferometer.hpp"
#include "coldnav/lockin_servo.hpp"
#include "coldnav/navigation.hpp"

#include <json.hpp>

// CSV and JSON serialization for the shared result types. Number formatting
// is deterministic: doubles print as shortest round-trip via %.17g, and JSON
// uses insertion-ordered keys.

namespace coldnav::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::string fringe_scan_csv(const interferometer::FringeScan& scan) {
  std::string out = "phase_rad,population,count\n";
  for (std::size_t i = 0; i < scan.phases.size(); ++i) {
    out += format_double(scan.phases[i]);
    out += ',';
    out += format_double(scan.populations[i]);
    out += ',';
    if (i < scan.counts.size()) out += std::to_string(scan.counts[i]);
    out += '\n';
  }
  return out;
}

inline std::string trajectory_csv(std::span<const nav::NavState> states) {
  std::string out = "t,x,y,vx,vy,heading\n";
  for (const nav::NavState& s : states) {
    out += format_double(s.time);
    out += ',';
    out += format_double(s.x);
    out += ',';
    out += format_double(s.y);
    out += ',';
    out += format_double(s.vx);
    out += ',';
    out += format_double(s.vy);
    out += ',';
    out += format_double(s.heading);
    out += '\n';
  }
  return out;
}

inline std::string servo_csv(const lockin::ServoRun& run) {
  std::string out = "step,freq_hz,error\n";
  for (const lockin::ServoSample& s : run.trajectory) {
    out += std::to_string(s.step);
    out += ',';
    out += format_double(s.freq);
    out += ',';
    out += format_double(s.error);
    out += '\n';
  }
  return out;
}

inline std::string signal_csv(const lockin::ModulatedSignal& sig) {
  std::string out = "t_s,value\n";
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    out += format_double(static_cast<double>(i) / sig.sample_rate);
    out += ',';
    out += format_double(sig.samples[i]);
    out += '\n';
  }
  return out;
}

inline std::string spectrum_csv(std::span<const lockin::SpectrumPoint> spectrum) {
  std::string out = "detuning_hz,absorption\n";
  for (const lockin::SpectrumPoint& p : spectrum) {
    out += format_double(p.detuning);
    out += ',';
    out += format_double(p.absorption);
    out += '\n';
  }
  return out;
}

inline Json alignment_report_json(const alignment::AlignmentReport& r) {
  Json j;
  j["tau_s"] = r.tau_s;
  j["linewidth_rad_s"] = r.linewidth_rad_s;
  j["max_tilt_rad"] = r.max_tilt_rad;
  j["tilt_rad"] = r.tilt_rad;
  j["pass"] = r.pass;
  return j;
}

inline Json check_report_json(const freq_chain::CheckReport& report) {
  Json list = Json::array();
  for (const freq_chain::CheckResult& r : report.results) {
    Json item;
    item["id"] = r.id;
    item["expected_hz"] = static_cast<double>(r.expected) / 1000.0;
    if (r.nearest.has_value()) {
      item["nearest_hz"] = static_cast<double>(*r.nearest) / 1000.0;
    } else {
      item["nearest_hz"] = nullptr;
    }
    item["pass"] = r.pass;
    list.push_back(std::move(item));
  }
  return list;
}

inline Json estimate_json(const nav::PhaseEstimate& est, double accel, double rot_rate) {
  Json j;
  j["phase"] = est.total_phase;
  j["contrast"] = est.contrast_est;
  j["accel"] = accel;
  j["rot_rate"] = rot_rate;
  Json cov = Json::array();
  for (const auto& row : est.covariance) {
    cov.push_back(Json::array({row[0], row[1], row[2]}));
  }
  j["covariance"] = std::move(cov);
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace coldnav::io
