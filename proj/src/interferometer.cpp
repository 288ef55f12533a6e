#include "coldnav/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coldnav/constants.hpp"
#include "coldnav/random.hpp"

namespace coldnav::interferometer {

using constants::hbar;
using constants::planck;
using constants::two_pi;

InterferometerConfig InterferometerConfig::from_geometry(double lambda_laser, double v_z,
                                                         double d, double L, double atom_mass,
                                                         long long n_atoms_per_shot,
                                                         double contrast) {
  InterferometerConfig cfg;
  cfg.lambda_laser = lambda_laser;
  cfg.k_eff = 2.0 * (two_pi / lambda_laser);
  cfg.v_z = v_z;
  cfg.d = d;
  cfg.L = L;
  cfg.T = L / std::abs(v_z);
  cfg.atom_mass = atom_mass;
  cfg.n_atoms_per_shot = n_atoms_per_shot;
  cfg.contrast = contrast;
  cfg.validate();
  return cfg;
}

InterferometerConfig InterferometerConfig::reversed() const {
  InterferometerConfig cfg = *this;
  cfg.v_z = -cfg.v_z;
  return cfg;
}

void InterferometerConfig::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(lambda_laser) || lambda_laser <= 0.0) {
    throw std::invalid_argument("lambda_laser must be positive");
  }
  if (!finite(k_eff)) throw std::invalid_argument("k_eff must be finite");
  if (!finite(v_z) || v_z == 0.0) throw std::invalid_argument("v_z must be nonzero");
  if (!finite(d) || d <= 0.0) throw std::invalid_argument("d must be positive");
  if (!finite(L) || L <= 0.0) throw std::invalid_argument("L must be positive");
  if (!finite(T) || T <= 0.0) throw std::invalid_argument("T must be positive");
  if (!finite(atom_mass) || atom_mass <= 0.0) {
    throw std::invalid_argument("atom_mass must be positive");
  }
  if (n_atoms_per_shot < 0) throw std::invalid_argument("n_atoms_per_shot must be >= 0");
  if (!finite(contrast) || contrast <= 0.0 || contrast > 1.0) {
    throw std::invalid_argument("contrast must be in (0, 1]");
  }
}

InterferometerConfig default_config() {
  return InterferometerConfig::from_geometry(
      constants::default_lambda_m, constants::default_v_z_mps, constants::default_beam_width_m,
      constants::default_zone_spacing_m, constants::rb87_mass_kg,
      constants::default_atoms_per_shot, 1.0);
}

void InertialInput::validate() const {
  if (!std::isfinite(accel) || !std::isfinite(rot_rate) || !std::isfinite(sagnac_area)) {
    throw std::invalid_argument("inertial input must be finite");
  }
}

double accel_phase(const InterferometerConfig& config, double accel) {
  config.validate();
  return -config.k_eff * accel * config.T * config.T;
}

double rotation_phase(const InterferometerConfig& config, double rot_rate, double sagnac_area) {
  config.validate();
  if (config.v_z == 0.0 || config.atom_mass == 0.0) {
    throw std::invalid_argument("rotation phase is singular for zero v_z or atom mass");
  }
  const double lambda_db = planck / (config.atom_mass * config.v_z);
  return (4.0 * constants::pi / (lambda_db * config.v_z)) * sagnac_area * rot_rate;
}

double sagnac_area_from_geometry(const InterferometerConfig& config) {
  config.validate();
  const double recoil_velocity = hbar * config.k_eff / config.atom_mass;
  return recoil_velocity * config.v_z * config.T * config.T;
}

double phase_from_trajectory(const InterferometerConfig& config,
                             const std::function<double(double)>& position_at,
                             double t1, double t2, double t3) {
  config.validate();
  const double dt1 = t2 - t1;
  const double dt2 = t3 - t2;
  if (!(dt1 > 0.0) || !(dt2 > 0.0) ||
      std::abs(dt1 - dt2) > 1e-9 * std::max(std::abs(dt1), std::abs(dt2))) {
    throw std::invalid_argument("pulse times must be equally spaced");
  }
  return config.k_eff * (position_at(t1) - 2.0 * position_at(t2) + position_at(t3));
}

std::array<double, 3> effective_pulse_phases(const InterferometerConfig& config,
                                             const LaserPhases& phases,
                                             const std::function<double(double)>& position_at,
                                             double t1, double t2, double t3) {
  config.validate();
  return {phases.phi1 - config.k_eff * position_at(t1),
          phases.phi2 - config.k_eff * position_at(t2),
          phases.phi3 - config.k_eff * position_at(t3)};
}

double fringe_probability(double total_phase, double contrast) {
  if (!std::isfinite(contrast) || contrast <= 0.0 || contrast > 1.0) {
    throw std::invalid_argument("contrast must be in (0, 1]");
  }
  if (!std::isfinite(total_phase)) {
    throw std::invalid_argument("total_phase must be finite");
  }
  const double p = 0.5 * (1.0 + contrast * std::cos(total_phase));
  return std::clamp(p, 0.0, 1.0);
}

double total_phase(const InterferometerConfig& config, const InertialInput& inertial,
                   const LaserPhases& phases) {
  inertial.validate();
  return accel_phase(config, inertial.accel) +
         rotation_phase(config, inertial.rot_rate, inertial.sagnac_area) +
         phases.combination();
}

ShotResult simulate_shot(const InterferometerConfig& config, const InertialInput& inertial,
                         const LaserPhases& phases, std::uint64_t rng_seed) {
  const double p = fringe_probability(total_phase(config, inertial, phases), config.contrast);
  rng::Engine eng(rng_seed);
  return {p, rng::binomial(eng, config.n_atoms_per_shot, p)};
}

FringeScan pzt_scan(const InterferometerConfig& config, const InertialInput& inertial,
                    double phi1, double phi2, std::span<const double> pzt_displacements,
                    std::uint64_t rng_seed, DetectionMode mode) {
  config.validate();
  inertial.validate();
  if (mode == DetectionMode::Counting && config.n_atoms_per_shot <= 0) {
    throw std::invalid_argument("counting scan needs n_atoms_per_shot > 0");
  }
  FringeScan scan;
  scan.phases.reserve(pzt_displacements.size());
  scan.populations.reserve(pzt_displacements.size());

  const double base = accel_phase(config, inertial.accel) +
                      rotation_phase(config, inertial.rot_rate, inertial.sagnac_area) +
                      phi1 - 2.0 * phi2;

  rng::Engine eng(rng_seed);
  for (double disp : pzt_displacements) {
    if (!(disp >= 0.0) || disp > constants::pzt_max_displacement_m) {
      throw std::invalid_argument("pzt displacement out of [0, 9e-6] m");
    }
    // Ratio first so the full stroke maps to exactly 30 rad.
    const double phi3 =
        disp / constants::pzt_max_displacement_m * constants::pzt_phase_rad_at_max;
    const double p = fringe_probability(base + phi3, config.contrast);
    scan.phases.push_back(phi3);
    if (mode == DetectionMode::Ideal) {
      scan.populations.push_back(p);
    } else {
      const long long count = rng::binomial(eng, config.n_atoms_per_shot, p);
      scan.counts.push_back(count);
      scan.populations.push_back(static_cast<double>(count) /
                                 static_cast<double>(config.n_atoms_per_shot));
    }
  }
  return scan;
}

std::vector<double> pzt_sweep(int points, double max_displacement) {
  if (points < 2) throw std::invalid_argument("pzt sweep needs at least 2 points");
  if (!(max_displacement >= 0.0) || max_displacement > constants::pzt_max_displacement_m) {
    throw std::invalid_argument("pzt displacement out of [0, 9e-6] m");
  }
  std::vector<double> disps(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    disps[static_cast<std::size_t>(i)] =
        max_displacement * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return disps;
}

}  // namespace coldnav::interferometer
