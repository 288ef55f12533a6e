#include "coldnav/alignment.hpp"

#include <cmath>
#include <stdexcept>

#include "coldnav/constants.hpp"

namespace coldnav::alignment {

void BeamGeometry::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("d must be positive");
  if (!(v_z > 0.0) || !std::isfinite(v_z)) throw std::invalid_argument("v_z must be positive");
  if (!std::isfinite(k_eff)) throw std::invalid_argument("k_eff must be finite");
  if (!std::isfinite(tilt)) throw std::invalid_argument("tilt must be finite");
}

double pulse_duration(const BeamGeometry& g) {
  g.validate();
  return g.d / g.v_z;
}

double raman_linewidth(const BeamGeometry& g) {
  g.validate();
  return constants::two_pi * 0.8 * g.v_z / g.d;
}

double doppler_shift(const BeamGeometry& g) {
  g.validate();
  return -g.k_eff * g.v_z * std::sin(g.tilt);
}

double max_tilt(const BeamGeometry& g) {
  g.validate();
  const double scale = g.k_eff * g.v_z;
  if (scale == 0.0) throw std::invalid_argument("max_tilt is singular for k_eff * v_z == 0");
  const double ratio = raman_linewidth(g) / std::abs(scale);
  if (ratio >= 1.0) return constants::pi / 2.0;  // linewidth swallows any tilt
  return std::asin(ratio);
}

AlignmentReport check_alignment(const BeamGeometry& g, double safety_factor) {
  if (!(safety_factor >= 1.0)) throw std::invalid_argument("safety_factor must be >= 1");
  AlignmentReport r;
  r.tau_s = pulse_duration(g);
  r.linewidth_rad_s = raman_linewidth(g);
  r.max_tilt_rad = max_tilt(g);
  r.tilt_rad = g.tilt;
  r.safety_factor = safety_factor;
  r.pass = std::abs(g.tilt) * safety_factor <= r.max_tilt_rad;
  return r;
}

}  // namespace coldnav::alignment
