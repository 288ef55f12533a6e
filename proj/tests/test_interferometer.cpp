#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coldnav/atom_optics.hpp"
#include "coldnav/constants.hpp"
#include "coldnav/interferometer.hpp"
#include "coldnav/random.hpp"

using namespace coldnav;
using namespace coldnav::interferometer;
using constants::pi;

TEST_CASE("config: from_geometry ties k_eff and T to the optics") {
  const InterferometerConfig cfg = default_config();
  CHECK(cfg.k_eff == doctest::Approx(2.0 * (2.0 * pi / 780e-9)).epsilon(1e-12));
  CHECK(cfg.T == doctest::Approx(9.5e-3 / 15.0).epsilon(1e-12));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config: invalid parameters rejected") {
  InterferometerConfig cfg = default_config();
  cfg.contrast = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = default_config();
  cfg.v_z = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(InterferometerConfig::from_geometry(-780e-9, 15.0, 1e-3, 9.5e-3,
                                                      constants::rb87_mass_kg, 1000),
                  std::invalid_argument);
}

TEST_CASE("accel_phase: zero, hand value, sign flips") {
  const InterferometerConfig cfg = default_config();
  CHECK(accel_phase(cfg, 0.0) == 0.0);
  // 780 nm / 15 m/s / 9.5 mm geometry: k_eff T^2 = 6.4622 rad/(m/s^2).
  CHECK(accel_phase(cfg, 9.8) == doctest::Approx(-63.3295).epsilon(1e-4));
  InterferometerConfig flipped = cfg;
  flipped.k_eff = -flipped.k_eff;
  CHECK(accel_phase(flipped, 9.8) == doctest::Approx(63.3295).epsilon(1e-4));
  CHECK(accel_phase(cfg, -9.8) == doctest::Approx(63.3295).epsilon(1e-4));
}

TEST_CASE("sagnac_area_from_geometry: default geometry and scalings") {
  const InterferometerConfig cfg = default_config();
  const double area = sagnac_area_from_geometry(cfg);
  CHECK(area == doctest::Approx(7.083e-8).scale(0.0).epsilon(1e-3));

  // Explicit two-path trajectory integration oracle: both arms sampled at dt,
  // enclosed area = integral of the path separation over the 2T window.
  const double recoil = constants::hbar * cfg.k_eff / cfg.atom_mass;
  const int steps = 200000;
  const double dt = 2.0 * cfg.T / steps;
  double enclosed = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * dt;
    const double separation = t < cfg.T ? recoil * t : recoil * (2.0 * cfg.T - t);
    enclosed += separation * cfg.v_z * dt;  // dz = v_z dt
  }
  CHECK(area == doctest::Approx(enclosed).scale(0.0).epsilon(1e-6));

  InterferometerConfig zero_k = cfg;
  zero_k.k_eff = 0.0;
  CHECK(sagnac_area_from_geometry(zero_k) == 0.0);

  // Area scales as T^2 when only L changes.
  InterferometerConfig doubled = InterferometerConfig::from_geometry(
      cfg.lambda_laser, cfg.v_z, cfg.d, 2.0 * cfg.L, cfg.atom_mass, cfg.n_atoms_per_shot);
  CHECK(sagnac_area_from_geometry(doubled) == doctest::Approx(4.0 * area).scale(0.0).epsilon(1e-12));
}

TEST_CASE("rotation_phase: zero, Earth rate, linearity, singularities") {
  const InterferometerConfig cfg = default_config();
  const double area = sagnac_area_from_geometry(cfg);
  CHECK(rotation_phase(cfg, 0.0, area) == 0.0);
  // 2 m A Omega / hbar at Earth rate with the default-geometry area.
  CHECK(rotation_phase(cfg, 7.29e-5, area) == doctest::Approx(0.0141329).scale(0.0).epsilon(1e-3));
  CHECK(rotation_phase(cfg, 7.29e-5, 2.0 * area) ==
        doctest::Approx(2.0 * rotation_phase(cfg, 7.29e-5, area)).scale(0.0).epsilon(1e-12));
  // Equivalent de Broglie form: 4 pi / (lambda_dB v) * A * Omega.
  const double lambda_db = constants::planck / (cfg.atom_mass * cfg.v_z);
  const double direct = 4.0 * pi / (lambda_db * cfg.v_z) * area * 7.29e-5;
  CHECK(rotation_phase(cfg, 7.29e-5, area) == doctest::Approx(direct).scale(0.0).epsilon(1e-12));
}

TEST_CASE("rotation_phase: reversing v_z flips the geometric area and the phase") {
  const InterferometerConfig fwd = default_config();
  const InterferometerConfig bwd = fwd.reversed();
  const double area_f = sagnac_area_from_geometry(fwd);
  const double area_b = sagnac_area_from_geometry(bwd);
  CHECK(area_b == doctest::Approx(-area_f).scale(0.0).epsilon(1e-12));
  CHECK(rotation_phase(bwd, 1e-3, area_b) ==
        doctest::Approx(-rotation_phase(fwd, 1e-3, area_f)).scale(0.0).epsilon(1e-12));
  // Acceleration phase is even under the reversal.
  CHECK(accel_phase(bwd, 0.3) == doctest::Approx(accel_phase(fwd, 0.3)).epsilon(1e-12));
}

TEST_CASE("phase_from_trajectory: second difference of the sampled path") {
  const InterferometerConfig cfg = default_config();
  const double t1 = 0.0, t2 = cfg.T, t3 = 2.0 * cfg.T;
  CHECK(phase_from_trajectory(cfg, [](double) { return 0.123; }, t1, t2, t3) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(phase_from_trajectory(cfg, [](double t) { return 3.7 * t; }, t1, t2, t3) ==
        doctest::Approx(0.0).epsilon(1e-9));
  const double from_traj =
      phase_from_trajectory(cfg, [](double t) { return 0.5 * 9.8 * t * t; }, t1, t2, t3);
  CHECK(from_traj == doctest::Approx(63.3295).epsilon(1e-4));
  CHECK(from_traj == doctest::Approx(-accel_phase(cfg, 9.8)).epsilon(1e-9));
  CHECK_THROWS_AS(phase_from_trajectory(cfg, [](double) { return 0.0; }, 0.0, cfg.T,
                                        2.5 * cfg.T),
                  std::invalid_argument);
}

TEST_CASE("fringe_probability: closed form values and bounds") {
  CHECK(fringe_probability(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fringe_probability(pi, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fringe_probability(pi / 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fringe_probability(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fringe_probability(0.0, 1.5), std::invalid_argument);

  rng::Engine eng(5);
  for (int i = 0; i < 500; ++i) {
    const double phase = rng::uniform(eng, -50.0, 50.0);
    const double contrast = rng::uniform(eng, 0.01, 1.0);
    const double p = fringe_probability(phase, contrast);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(fringe_probability(phase + 2.0 * pi, contrast) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("simulate_shot: degenerate binomials and seed determinism") {
  InterferometerConfig cfg = default_config();
  const double area = sagnac_area_from_geometry(cfg);
  const InertialInput rest{0.0, 0.0, area};

  const ShotResult full = simulate_shot(cfg, rest, {0.0, 0.0, 0.0}, 11);
  CHECK(full.probability == 1.0);
  CHECK(full.count == cfg.n_atoms_per_shot);

  const ShotResult empty = simulate_shot(cfg, rest, {0.0, 0.0, pi}, 11);
  CHECK(empty.probability == 0.0);
  CHECK(empty.count == 0);

  const ShotResult half_a = simulate_shot(cfg, rest, {0.0, 0.0, pi / 2.0}, 123);
  const ShotResult half_b = simulate_shot(cfg, rest, {0.0, 0.0, pi / 2.0}, 123);
  CHECK(half_a.count == half_b.count);
  // Binomial(1e6, 1/2): stay within 5 sigma of the mean.
  CHECK(std::abs(static_cast<double>(half_a.count) - 5e5) < 5.0 * 500.0);
}

TEST_CASE("pzt_scan: displacement-to-phase mapping and range checks") {
  const InterferometerConfig cfg = default_config();
  const InertialInput rest{0.0, 0.0, sagnac_area_from_geometry(cfg)};

  const std::vector<double> disps{0.0, 3e-6, 9e-6};
  const FringeScan scan = pzt_scan(cfg, rest, 0.0, 0.0, disps, 1, DetectionMode::Ideal);
  REQUIRE(scan.phases.size() == 3);
  CHECK(scan.phases[0] == 0.0);
  CHECK(scan.phases[1] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(scan.phases[2] == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(scan.counts.empty());

  const std::vector<double> bad{10e-6};
  CHECK_THROWS_AS(pzt_scan(cfg, rest, 0.0, 0.0, bad, 1), std::invalid_argument);
  const std::vector<double> negative{-1e-9};
  CHECK_THROWS_AS(pzt_scan(cfg, rest, 0.0, 0.0, negative, 1), std::invalid_argument);
}

TEST_CASE("pzt_scan: counting mode is deterministic and consistent with counts") {
  const InterferometerConfig cfg = default_config();
  const InertialInput in{0.05, 1e-4, sagnac_area_from_geometry(cfg)};
  const std::vector<double> disps = pzt_sweep(16, 9e-6);
  const FringeScan a = pzt_scan(cfg, in, 0.1, 0.05, disps, 77);
  const FringeScan b = pzt_scan(cfg, in, 0.1, 0.05, disps, 77);
  REQUIRE(a.counts.size() == 16);
  CHECK(a.counts == b.counts);
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    CHECK(a.populations[i] ==
          doctest::Approx(static_cast<double>(a.counts[i]) / 1e6).epsilon(1e-15));
  }
}

// The central consistency check: the pulse-level propagator fed with the
// laser phases imprinted along the true trajectory reproduces the closed-form
// fringe, including the acceleration sign convention.
TEST_CASE("property: pulse-level propagation matches the closed form") {
  rng::Engine eng(20240930);
  double max_err = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double lambda = rng::uniform(eng, 500e-9, 1600e-9);
    const double v_z = rng::uniform(eng, 5.0, 30.0);
    const double L = rng::uniform(eng, 5e-3, 20e-3);
    const InterferometerConfig cfg = InterferometerConfig::from_geometry(
        lambda, v_z, 1e-3, L, constants::rb87_mass_kg, 1000);

    const double a = rng::uniform(eng, -20.0, 20.0);
    const double v0 = rng::uniform(eng, -1.0, 1.0);
    const double x0 = rng::uniform(eng, -1e-6, 1e-6);
    const LaserPhases phases{rng::uniform(eng, -pi, pi), rng::uniform(eng, -pi, pi),
                             rng::uniform(eng, -pi, pi)};

    const auto x = [=](double t) { return x0 + v0 * t + 0.5 * a * t * t; };
    const auto eff = effective_pulse_phases(cfg, phases, x, 0.0, cfg.T, 2.0 * cfg.T);

    const std::vector<atom_optics::RamanPulse> seq{atom_optics::RamanPulse::half_pi(eff[0]),
                                                   atom_optics::RamanPulse::pi(eff[1]),
                                                   atom_optics::RamanPulse::half_pi(eff[2])};
    const double pulse_level = atom_optics::compose_sequence(seq)
                                   .apply(atom_optics::AtomState{})
                                   .ground_population();

    const double closed = fringe_probability(
        accel_phase(cfg, a) + phases.combination(), 1.0);
    max_err = std::max(max_err, std::abs(pulse_level - closed));
  }
  CHECK(max_err < 1e-10);
}
