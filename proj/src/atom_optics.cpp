#include "coldnav/atom_optics.hpp"

#include <cmath>
#include <stdexcept>

#include "coldnav/constants.hpp"

namespace coldnav::atom_optics {

namespace {

void require_finite_phase(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

RamanPulse RamanPulse::half_pi(double laser_phase, double duration) {
  require_finite_phase(laser_phase, "laser_phase");
  return {constants::pi / 2.0, laser_phase, duration, PulseLabel::HalfPi};
}

RamanPulse RamanPulse::pi(double laser_phase, double duration) {
  require_finite_phase(laser_phase, "laser_phase");
  return {constants::pi, laser_phase, duration, PulseLabel::Pi};
}

RamanPulse RamanPulse::custom(double rabi_phase, double laser_phase, double duration) {
  require_finite_phase(rabi_phase, "rabi_phase");
  require_finite_phase(laser_phase, "laser_phase");
  if (rabi_phase < 0.0) {
    throw std::invalid_argument("rabi_phase must be >= 0");
  }
  return {rabi_phase, laser_phase, duration, PulseLabel::Custom};
}

double PulseUnitary::unitarity_defect() const {
  // Rows of U U^dagger minus the identity.
  const Complex d00 = ff * std::conj(ff) + fe * std::conj(fe) - 1.0;
  const Complex d01 = ff * std::conj(ef) + fe * std::conj(ee);
  const Complex d10 = ef * std::conj(ff) + ee * std::conj(fe);
  const Complex d11 = ef * std::conj(ef) + ee * std::conj(ee) - 1.0;
  return std::max(std::max(std::abs(d00), std::abs(d01)),
                  std::max(std::abs(d10), std::abs(d11)));
}

PulseUnitary operator*(const PulseUnitary& lhs, const PulseUnitary& rhs) {
  return {lhs.ff * rhs.ff + lhs.fe * rhs.ef, lhs.ff * rhs.fe + lhs.fe * rhs.ee,
          lhs.ef * rhs.ff + lhs.ee * rhs.ef, lhs.ef * rhs.fe + lhs.ee * rhs.ee};
}

PulseUnitary pulse_unitary(const RamanPulse& pulse) {
  require_finite_phase(pulse.rabi_phase, "rabi_phase");
  require_finite_phase(pulse.laser_phase, "laser_phase");
  if (pulse.rabi_phase < 0.0) {
    throw std::invalid_argument("rabi_phase must be >= 0");
  }
  const double half = 0.5 * pulse.rabi_phase;
  const double c = std::cos(half);
  const double s = std::sin(half);
  const Complex mi{0.0, -1.0};
  const Complex phase = std::polar(1.0, pulse.laser_phase);
  return {Complex{c, 0.0}, mi * std::conj(phase) * s,
          mi * phase * s, Complex{c, 0.0}};
}

AtomState apply_pulse(const AtomState& state, const RamanPulse& pulse) {
  if (std::abs(state.norm_sq() - 1.0) > 1e-9) {
    throw std::invalid_argument("atom state is not normalized");
  }
  return pulse_unitary(pulse).apply(state);
}

PulseUnitary compose_sequence(std::span<const RamanPulse> pulses) {
  if (pulses.empty()) {
    throw std::invalid_argument("pulse sequence is empty");
  }
  PulseUnitary total = PulseUnitary::identity();
  for (const RamanPulse& pulse : pulses) {
    total = pulse_unitary(pulse) * total;
  }
  return total;
}

}  // namespace coldnav::atom_optics
