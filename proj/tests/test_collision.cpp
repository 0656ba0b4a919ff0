#include "qpulse/collision.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace qpulse;
using qtest::max_abs_diff;

TEST_CASE("collision_unitary: identity without coupling, unitary with it") {
    CHECK(max_abs_diff(collision_unitary(0.0, 1e-3, 3), identity(6)) < 1e-12);

    const Matrix u = collision_unitary(1.0, 1e-3, 4);
    CHECK(max_abs_diff(u.adjoint() * u, identity(8)) < 1e-10);
}

TEST_CASE("collision_unitary: one-bin excitation transfer is gamma dt to first order") {
    const double gamma = 1.0, dt = 1e-3; // gamma dt = 1e-3
    const int na = 3;
    const Matrix u = collision_unitary(gamma, dt, na);
    // |e,0> = index na, |g,1> = index 1
    const double p_transfer = std::norm(u(1, na));
    CHECK(std::abs(p_transfer - gamma * dt) <= (gamma * dt) * (gamma * dt));
}

TEST_CASE("collision_run: undriven excited atom decays as e^{-gamma t}") {
    const double dt = 1e-3;
    const CollisionConfig cfg(1.0, Complex(0.0, 0.0), dt, 3, 1000);
    const CollisionResult res = collision_run(cfg, atom_excited());
    CHECK(std::abs(res.atom.back().elements(1, 1).real() - std::exp(-1.0)) < 2.0 * dt);
}

TEST_CASE("collision_run: undriven ground atom is stationary") {
    const CollisionConfig cfg(1.0, Complex(0.0, 0.0), 1e-3, 3, 200);
    const CollisionResult res = collision_run(cfg, atom_ground());
    for (const DensityMatrix& rho : res.atom)
        CHECK(std::abs(rho.elements(0, 0).real() - 1.0) < 1e-12);
}

TEST_CASE("collision_run: matches the Bloch trajectory over a pi/2 pulse (coherent frame)") {
    const double gamma = 1.0, omega = 5.0, dt = 1e-3;
    const double duration = (M_PI / 2.0) / omega;
    const int steps = static_cast<int>(std::ceil(duration / dt));
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(gamma, omega, dt, 3, steps);
    REQUIRE(cfg.frame == CollisionFrame::CoherentAncilla);

    const CollisionResult res = collision_run(cfg, atom_ground());
    const PulseSpec pulse(omega, steps * dt, gamma);
    const DensityMatrix rho0 = projector(StateVector({2}, Vector(atom_ground())));
    const std::vector<DensityMatrix> bloch = bloch_evolve(rho0, pulse, res.times);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        worst = std::max(worst, trace_distance(res.atom[i], bloch[i]));
    CHECK(worst < 0.01);
}

TEST_CASE("collision_run: matches the Bloch trajectory at omega_eff = 20 gamma (displaced)") {
    const double gamma = 1.0, omega = 20.0, dt = 1e-3;
    const double duration = (M_PI / 2.0) / omega;
    const int steps = static_cast<int>(std::ceil(duration / dt));
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(gamma, omega, dt, 3, steps);
    REQUIRE(cfg.frame == CollisionFrame::Displaced); // |beta|^2 dt = 0.1 exceeds the lab gate

    const CollisionResult res = collision_run(cfg, atom_ground());
    const PulseSpec pulse(omega, steps * dt, gamma);
    const DensityMatrix rho0 = projector(StateVector({2}, Vector(atom_ground())));
    const std::vector<DensityMatrix> bloch = bloch_evolve(rho0, pulse, res.times);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        worst = std::max(worst, trace_distance(res.atom[i], bloch[i]));
    CHECK(worst < 0.01);
}

TEST_CASE("collision_run: coherent-ancilla and displaced frames give the same atom") {
    const double gamma = 1.0, omega = 5.0, dt = 1e-3;
    const int steps = 400;
    const CollisionConfig lab = CollisionConfig::for_rabi_drive(gamma, omega, dt, 4, steps);
    REQUIRE(lab.frame == CollisionFrame::CoherentAncilla);
    CollisionConfig disp = lab;
    disp.frame = CollisionFrame::Displaced;

    const CollisionResult a = collision_run(lab, atom_ground());
    const CollisionResult b = collision_run(disp, atom_ground());
    double worst = 0.0, worst_emitted = 0.0;
    for (int i = 0; i < steps; ++i) {
        worst = std::max(worst, max_abs_diff(a.atom[i].elements, b.atom[i].elements));
        worst_emitted = std::max(worst_emitted, std::abs(a.emitted[i] - b.emitted[i]));
    }
    CHECK(worst < 1e-6);
    CHECK(worst_emitted < 1e-6);
}

TEST_CASE("collision_run: trajectory is a function of (gamma, omega_eff, dt, steps)") {
    // same config reached through two construction paths
    const double gamma = 1.0, omega = 5.0, dt = 1e-3;
    const CollisionConfig direct(gamma, Complex(0.0, -omega / (2.0 * std::sqrt(gamma))), dt, 3,
                                 300);
    const CollisionConfig derived = CollisionConfig::for_rabi_drive(gamma, omega, dt, 3, 300);
    REQUIRE(direct.frame == derived.frame);
    REQUIRE(direct.beta == derived.beta);

    const CollisionResult a = collision_run(direct, atom_ground());
    const CollisionResult b = collision_run(derived, atom_ground());
    for (int i = 0; i < 300; ++i)
        CHECK(max_abs_diff(a.atom[i].elements, b.atom[i].elements) == 0.0);
}

TEST_CASE("collision_run: survival is nonincreasing in (0,1], emission nondecreasing") {
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(1.0, 8.0, 1e-3, 3, 1000);
    const CollisionResult res = collision_run(cfg, atom_ground());
    double prev_s = 1.0, prev_e = 0.0;
    for (std::size_t i = 0; i < res.survival.size(); ++i) {
        CHECK(res.survival[i] > 0.0);
        CHECK(res.survival[i] <= prev_s + 1e-15);
        CHECK(res.emitted[i] >= prev_e - 1e-12);
        prev_s = res.survival[i];
        prev_e = res.emitted[i];
    }
}

TEST_CASE("collision_run: irreversibility - total excitation is not conserved") {
    // Contrast with the single-mode model: a decaying atom hands excitation
    // to bins that never come back.
    const CollisionConfig cfg(1.0, Complex(0.0, 0.0), 1e-3, 3, 500);
    const CollisionResult res = collision_run(cfg, atom_excited());
    const double pe_final = res.atom.back().elements(1, 1).real();
    CHECK(pe_final < 0.7); // plainly below the initial 1
    CHECK(res.emitted.back() > 0.25);
}

TEST_CASE("collision_run: atom state is insensitive to the ancilla truncation") {
    // The dim-3 vs dim-4 difference scales like the square of the photons
    // per bin; 1e-6 insensitivity holds for |beta|^2 dt below ~2e-3 in the
    // coherent-ancilla frame and at any drive in the displaced frame.
    const double gamma = 1.0, dt = 1e-3;

    const CollisionConfig lab3 = CollisionConfig::for_rabi_drive(gamma, 2.5, dt, 3, 500);
    const CollisionConfig lab4 = CollisionConfig::for_rabi_drive(gamma, 2.5, dt, 4, 500);
    REQUIRE(lab3.frame == CollisionFrame::CoherentAncilla);
    const CollisionResult r3 = collision_run(lab3, atom_ground());
    const CollisionResult r4 = collision_run(lab4, atom_ground());
    double worst = 0.0;
    for (int i = 0; i < 500; ++i)
        worst = std::max(worst, max_abs_diff(r3.atom[i].elements, r4.atom[i].elements));
    CHECK(worst < 1e-6);

    CollisionConfig disp3 = CollisionConfig::for_rabi_drive(gamma, 20.0, dt, 3, 500);
    REQUIRE(disp3.frame == CollisionFrame::Displaced);
    CollisionConfig disp4 = disp3;
    disp4.n_anc = 4;
    const CollisionResult d3 = collision_run(disp3, atom_ground());
    const CollisionResult d4 = collision_run(disp4, atom_ground());
    worst = 0.0;
    for (int i = 0; i < 500; ++i)
        worst = std::max(worst, max_abs_diff(d3.atom[i].elements, d4.atom[i].elements));
    CHECK(worst < 1e-6);
}

TEST_CASE("collision_run: displaced frame at gamma = 0 is an exact rotation") {
    const double omega = 2.0, dt = 1e-3;
    const int steps = 500; // theta = omega * steps * dt = 1
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(0.0, omega, dt, 3, steps);
    REQUIRE(cfg.frame == CollisionFrame::Displaced);
    const CollisionResult res = collision_run(cfg, atom_ground());
    const double theta = omega * steps * dt;
    CHECK(res.atom.back().elements(1, 1).real() ==
          doctest::Approx(std::sin(0.5 * theta) * std::sin(0.5 * theta)).epsilon(1e-10));
    CHECK(res.survival.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("no_jump_probability: no coupling means certain survival") {
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(0.0, 3.0, 1e-3, 3, 0);
    CHECK(no_jump_probability(cfg, atom_ground(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("no_jump_probability: undriven excited atom survives as e^{-gamma t}") {
    const double dt = 1e-3;
    const CollisionConfig cfg(1.0, Complex(0.0, 0.0), dt, 3, 0);
    const double p = no_jump_probability(cfg, atom_excited(), 1.0);
    CHECK(std::abs(p - std::exp(-1.0)) < 2.0 * dt);
}

TEST_CASE("no_jump_probability: strong drive gives e^{-gamma t / 2}") {
    const double gamma = 1.0, dt = 1e-3;
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(gamma, 20.0, dt, 3, 0);
    const double p = no_jump_probability(cfg, atom_ground(), 1.0);
    CHECK(std::abs(p - std::exp(-0.5)) / std::exp(-0.5) < 0.10);
}

TEST_CASE("no_jump_probability: never below the total-decay floor") {
    const double gamma = 1.0, dt = 1e-3;
    for (double omega : {0.0, 2.0, 20.0}) {
        const CollisionConfig cfg = CollisionConfig::for_rabi_drive(gamma, omega, dt, 3, 0);
        for (double t : {0.2, 0.5, 1.0}) {
            const double p_g = no_jump_probability(cfg, atom_ground(), t);
            const double p_e = no_jump_probability(cfg, atom_excited(), t);
            CHECK(p_g >= std::exp(-gamma * t) - 2.0 * dt);
            CHECK(p_e >= std::exp(-gamma * t) - 2.0 * dt);
        }
    }
}

TEST_CASE("mollow_displacement_check: zero at alpha = 0, tiny for real runs") {
    CHECK(mollow_displacement_check(CoherentAmplitude(0.0), 1.0, 1.0, 40) < 1e-12);
    CHECK(mollow_displacement_check(CoherentAmplitude(2.0), 1.0, 1.0,
                                    displacement_cutoff(4.0)) <= 1e-8);
    CHECK(mollow_displacement_check(CoherentAmplitude(3.0), 1.0, 3.0, displacement_cutoff(9.0),
                                    atom_plus()) <= 1e-8);
}

TEST_CASE("mollow_displacement_check: headroom precondition") {
    CHECK_THROWS_AS(mollow_displacement_check(CoherentAmplitude(3.0), 1.0, 1.0, 20),
                    TruncationError);
}

TEST_CASE("lindblad_distance: trivial case vanishes") {
    const CollisionConfig cfg(0.0, Complex(0.0, 0.0), 1e-3, 3, 0, CollisionFrame::Displaced);
    const PulseSpec pulse(0.0, 1.0, 0.0);
    CHECK(lindblad_distance(cfg, pulse, 1.0) < 1e-10);
}

TEST_CASE("lindblad_distance: halving dt halves the distance; extrapolation below 1e-3") {
    // n_anc = 4 keeps the ancilla truncation error well below the
    // discretization error whose convergence is being measured; at n_anc = 3
    // the two are comparable (and of opposite sign) at these bin photon
    // numbers, and the ratio test is meaningless.
    const double gamma = 1.0, omega = 10.0, t = 0.5;
    const double dt = 1e-3;
    const PulseSpec pulse(omega, t, gamma);
    const CollisionConfig c1 = CollisionConfig::for_rabi_drive(gamma, omega, dt, 4, 0);
    const CollisionConfig c2 = CollisionConfig::for_rabi_drive(gamma, omega, dt / 2.0, 4, 0);
    REQUIRE(c1.frame == CollisionFrame::CoherentAncilla);

    const double d1 = lindblad_distance(c1, pulse, t);
    const double d2 = lindblad_distance(c2, pulse, t);
    REQUIRE(d1 > 0.0);
    const double ratio = d2 / d1;
    CHECK(std::abs(ratio - 0.5) <= 0.15);
    CHECK(std::abs(2.0 * d2 - d1) < 1e-3);

    // same study in the displaced frame: clean first order as well
    CollisionConfig e1 = c1, e2 = c2;
    e1.frame = CollisionFrame::Displaced;
    e2.frame = CollisionFrame::Displaced;
    const double f1 = lindblad_distance(e1, pulse, t);
    const double f2 = lindblad_distance(e2, pulse, t);
    CHECK(std::abs(f2 / f1 - 0.5) <= 0.15);
}

TEST_CASE("lindblad_distance: rejects mismatched pulse parameters") {
    const CollisionConfig cfg = CollisionConfig::for_rabi_drive(1.0, 10.0, 1e-3, 3, 0);
    CHECK_THROWS_AS(lindblad_distance(cfg, PulseSpec(9.0, 1.0, 1.0), 0.5), ConfigError);
    CHECK_THROWS_AS(lindblad_distance(cfg, PulseSpec(10.0, 1.0, 0.5), 0.5), ConfigError);
}

TEST_CASE("CollisionConfig: invariant gates") {
    CHECK_THROWS_AS(CollisionConfig(1.0, Complex(10.0, 0.0), 0.01, 3, 10), ConfigError);
    CHECK_THROWS_AS(CollisionConfig(60.0, Complex(0.0, 0.0), 1e-3, 3, 10), ConfigError);
    CHECK_THROWS_AS(CollisionConfig(-1.0, Complex(0.0, 0.0), 1e-3, 3, 10), ConfigError);
    CHECK_THROWS_AS(CollisionConfig(1.0, Complex(0.0, 0.0), 1e-3, 1, 10), ConfigError);
    // the displaced frame carries no photons-per-bin gate
    const CollisionConfig ok(1.0, Complex(10.0, 0.0), 0.01, 3, 10, CollisionFrame::Displaced);
    CHECK(ok.omega_eff() == doctest::Approx(20.0));
}

TEST_CASE("CollisionConfig: truncation warning fires only under real pressure") {
    const CollisionConfig quiet(1.0, Complex(0.0, -0.05), 1e-3, 3, 50);
    CHECK_FALSE(collision_run(quiet, atom_ground()).truncation_warning);

    const CollisionConfig loud = CollisionConfig::for_rabi_drive(1.0, 4.0, 2e-3, 3, 50);
    CHECK(collision_run(loud, atom_ground()).truncation_warning);
}
