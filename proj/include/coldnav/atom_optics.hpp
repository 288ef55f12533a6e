#pragma once

#include <complex>
#include <span>

// Exact two-level propagator for stimulated Raman pulses. The basis is
// (|f,p>, |e,p+hk_eff>); momentum rides along with the internal label, so a
// state is just two complex amplitudes. Everything here is a pure function
// on immutable values.

namespace coldnav::atom_optics {

using Complex = std::complex<double>;

struct AtomState {
  Complex amp_f{1.0, 0.0};
  Complex amp_e{0.0, 0.0};

  double norm_sq() const { return std::norm(amp_f) + std::norm(amp_e); }
  double ground_population() const { return std::norm(amp_f); }
  double excited_population() const { return std::norm(amp_e); }
};

enum class PulseLabel { HalfPi, Pi, Custom };

/// A square Raman pulse: Rabi phase (pulse area), the laser phase imprinted
/// on the transition, and the physical duration (carried for bookkeeping,
/// the resonant propagator depends only on the two phases).
struct RamanPulse {
  double rabi_phase = 0.0;   // rad, >= 0
  double laser_phase = 0.0;  // rad
  double duration = 0.0;     // s
  PulseLabel label = PulseLabel::Custom;

  static RamanPulse half_pi(double laser_phase, double duration = 0.0);
  static RamanPulse pi(double laser_phase, double duration = 0.0);
  static RamanPulse custom(double rabi_phase, double laser_phase, double duration = 0.0);
};

/// 2x2 unitary in the (f, e) basis; entry xy couples y -> x.
struct PulseUnitary {
  Complex ff{1.0, 0.0};
  Complex fe{0.0, 0.0};
  Complex ef{0.0, 0.0};
  Complex ee{1.0, 0.0};

  AtomState apply(const AtomState& s) const {
    return {ff * s.amp_f + fe * s.amp_e, ef * s.amp_f + ee * s.amp_e};
  }

  static PulseUnitary identity() { return {}; }

  /// Max-abs deviation of U U^dagger from the identity.
  double unitarity_defect() const;
};

/// lhs * rhs: rhs acts first.
PulseUnitary operator*(const PulseUnitary& lhs, const PulseUnitary& rhs);

/// Resonant Rabi rotation
///   U(phi_R, phi) = [ cos(phi_R/2)              -i e^{-i phi} sin(phi_R/2) ]
///                   [ -i e^{+i phi} sin(phi_R/2)  cos(phi_R/2)             ]
/// so a pi/2 pulse on |f> yields (|f> - i e^{i phi}|e>)/sqrt(2). Throws
/// std::invalid_argument on non-finite or negative Rabi phase.
PulseUnitary pulse_unitary(const RamanPulse& pulse);

/// U(pulse) * state. The input must be normalized to within 1e-9.
AtomState apply_pulse(const AtomState& state, const RamanPulse& pulse);

/// Product of the pulse unitaries in time order (the last pulse is the
/// leftmost factor). Throws on an empty sequence.
PulseUnitary compose_sequence(std::span<const RamanPulse> pulses);

}  // namespace coldnav::atom_optics
