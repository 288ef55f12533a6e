#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// pi/2 - pi - pi/2 Mach-Zehnder sequence built from beam geometry: inertial
// phases, the closed-form fringe, and phase-plate scans with per-shot atom
// counting.

namespace coldnav::interferometer {

/// Geometry and beam parameters. v_z is signed: a negative value describes
/// the counter-propagating beam configuration (the pulse interval T stays
/// positive, the Sagnac area flips sign).
struct InterferometerConfig {
  double lambda_laser = 0.0;       // m
  double k_eff = 0.0;              // rad/m
  double v_z = 0.0;                // m/s, signed
  double d = 0.0;                  // m, Raman beam width
  double L = 0.0;                  // m, zone spacing
  double T = 0.0;                  // s, pulse interval
  double atom_mass = 0.0;          // kg
  long long n_atoms_per_shot = 0;
  double contrast = 1.0;           // (0, 1]

  /// k_eff = 2 * (2 pi / lambda), T = L / |v_z|.
  static InterferometerConfig from_geometry(double lambda_laser, double v_z, double d,
                                            double L, double atom_mass,
                                            long long n_atoms_per_shot, double contrast = 1.0);

  /// The same geometry traversed in the opposite direction (v_z -> -v_z).
  InterferometerConfig reversed() const;

  void validate() const;  // throws std::invalid_argument
};

/// Default Rb-87 beam scenario.
InterferometerConfig default_config();

struct InertialInput {
  double accel = 0.0;        // m/s^2 along k_eff
  double rot_rate = 0.0;     // rad/s on the Sagnac-area normal
  double sagnac_area = 0.0;  // m^2, signed

  void validate() const;
};

struct LaserPhases {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;

  double combination() const { return phi1 - 2.0 * phi2 + phi3; }
};

struct FringeScan {
  std::vector<double> phases;       // commanded phi3 offsets, rad
  std::vector<double> populations;  // in [0, 1]
  std::vector<long long> counts;    // empty when the scan is noise-free
};

enum class DetectionMode { Counting, Ideal };

/// phi_a = -k_eff * a * T^2.
double accel_phase(const InterferometerConfig& config, double accel);

/// Matter-wave Sagnac phase 2 m A Omega / hbar, evaluated through the
/// de Broglie form 4 pi / (lambda_dB v_z) * A * Omega with
/// lambda_dB = h / (m v_z). Rejects zero v_z or zero atom mass.
double rotation_phase(const InterferometerConfig& config, double rot_rate, double sagnac_area);

/// Area of the parallelogram enclosed by the two recoil-separated paths over
/// 2T: (hbar k_eff / m) * v_z * T^2. Signed through v_z.
double sagnac_area_from_geometry(const InterferometerConfig& config);

/// k_eff * (x(t1) - 2 x(t2) + x(t3)): the second difference of the trajectory
/// sampled at the pulses. Requires equal intervals t2-t1 == t3-t2.
double phase_from_trajectory(const InterferometerConfig& config,
                             const std::function<double(double)>& position_at,
                             double t1, double t2, double t3);

/// The effective laser phase each pulse imprints when fired at x(t_i):
/// phi_i - k_eff * x(t_i). With these phases the pulse-level propagator
/// reproduces the closed-form fringe including the phi_a sign.
std::array<double, 3> effective_pulse_phases(const InterferometerConfig& config,
                                             const LaserPhases& phases,
                                             const std::function<double(double)>& position_at,
                                             double t1, double t2, double t3);

/// P = 1/2 [1 + contrast * cos(total_phase)].
double fringe_probability(double total_phase, double contrast);

/// phi_a + phi_Omega + phi1 - 2 phi2 + phi3 for the given truth.
double total_phase(const InterferometerConfig& config, const InertialInput& inertial,
                   const LaserPhases& phases);

struct ShotResult {
  double probability = 0.0;
  long long count = 0;
};

/// One detection shot: closed-form probability plus a binomial atom count,
/// deterministic for a fixed seed.
ShotResult simulate_shot(const InterferometerConfig& config, const InertialInput& inertial,
                         const LaserPhases& phases, std::uint64_t rng_seed);

/// Phase-plate scan: each displacement in [0, 9 um] commands a phi3 offset of
/// displacement * (30 rad / 9 um). Counting mode draws per-point binomial
/// counts; Ideal mode records the exact probabilities and leaves counts empty.
FringeScan pzt_scan(const InterferometerConfig& config, const InertialInput& inertial,
                    double phi1, double phi2, std::span<const double> pzt_displacements,
                    std::uint64_t rng_seed, DetectionMode mode = DetectionMode::Counting);

/// Evenly spaced displacements covering [0, max_displacement].
std::vector<double> pzt_sweep(int points, double max_displacement);

}  // namespace coldnav::interferometer
