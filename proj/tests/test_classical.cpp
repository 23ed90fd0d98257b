#include <doctest.h>

#include <cmath>

#include "ionsplit/classical.hpp"
#include "ionsplit/potential.hpp"

using namespace ionsplit;

namespace {

constexpr double kCoulomb = 7.3516e6;

PotentialParams harmonic() { return {0.5, 0.0, 0.0}; }

ControlFunction frozen(const PotentialParams& p) {
    return [p](double) { return p; };
}

} // namespace

TEST_CASE("frozen trap: energy is conserved to 1e-10 over 1e5 steps") {
    const PotentialParams p = harmonic();
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    // kick both modes so the orbit explores the Coulomb nonlinearity
    s0.p1 = 4.0;
    s0.p2 = -1.5;
    const double e0 = energy_classical(s0, p, kCoulomb);

    ClassicalOptions opt;
    opt.n_steps = 100000;
    const Trajectory tr = propagate_classical(frozen(p), kCoulomb, 60.0, s0, opt);
    const double e1 = energy_classical(tr.final_state(), p, kCoulomb);
    CHECK(std::abs(e1 - e0) < 1e-10 * std::abs(e0));
}

TEST_CASE("rest state stays put under a frozen trap") {
    const PotentialParams p{0.5, 1e-9, 0.02};
    const ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    const auto g = potential_gradient(p, kCoulomb, s0.q1, s0.q2);
    CHECK(std::abs(g[0]) < 1e-8);
    CHECK(std::abs(g[1]) < 1e-8);

    ClassicalOptions opt;
    opt.n_steps = 20000;
    const Trajectory tr = propagate_classical(frozen(p), kCoulomb, 30.0, s0, opt);
    const ClassicalState& sf = tr.final_state();
    CHECK(std::abs(sf.q1 - s0.q1) < 1e-7);
    CHECK(std::abs(sf.q2 - s0.q2) < 1e-7);
    CHECK(std::abs(sf.p1) < 1e-7);
    CHECK(std::abs(sf.p2) < 1e-7);
}

TEST_CASE("harmonic COM mode: closed-form orbit") {
    // the center of mass decouples exactly: Q(t) = Q0 cos(t) for alpha = 1/2
    const PotentialParams p = harmonic();
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    const double shift = 3.0;
    s0.q1 += shift;
    s0.q2 += shift;

    ClassicalOptions opt;
    opt.n_steps = 50000;
    const double t_f = 20.0;
    const Trajectory tr = propagate_classical(frozen(p), kCoulomb, t_f, s0, opt);
    const ClassicalState& sf = tr.final_state();
    const double com = (sf.q1 + sf.q2) / 2;
    const double com0 = (s0.q1 + s0.q2) / 2;
    const double expected = (com0 - 0.0) * std::cos(t_f); // COM oscillates about 0
    CHECK(std::abs(com - expected) < 1e-8 * std::abs(com0));
    // stretch coordinate started at equilibrium and must stay there
    CHECK(std::abs((sf.q1 - sf.q2) - (s0.q1 - s0.q2)) < 1e-7);
}

TEST_CASE("RK4 step error falls 16x per halving") {
    const PotentialParams p = harmonic();
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    s0.p1 = 6.0;

    auto run = [&](int n) {
        ClassicalOptions opt;
        opt.n_steps = n;
        return propagate_classical(frozen(p), kCoulomb, 25.0, s0, opt).final_state();
    };
    const ClassicalState fine = run(16000);
    auto err = [&](const ClassicalState& s) {
        return std::abs(s.q1 - fine.q1) + std::abs(s.q2 - fine.q2) +
               std::abs(s.p1 - fine.p1) + std::abs(s.p2 - fine.p2);
    };
    const double e1 = err(run(500));
    const double e2 = err(run(1000));
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("time reversal returns to the initial condition") {
    const PotentialParams p{0.5, 1e-10, 0.0};
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    s0.p1 = 2.5;
    s0.p2 = 1.0;

    ClassicalOptions opt;
    opt.n_steps = 40000;
    const double t_f = 15.0;
    const Trajectory fwd = propagate_classical(frozen(p), kCoulomb, t_f, s0, opt);
    ClassicalState mid = fwd.final_state();
    mid.p1 = -mid.p1;
    mid.p2 = -mid.p2;
    mid.t = 0;
    const Trajectory bwd = propagate_classical(frozen(p), kCoulomb, t_f, mid, opt);
    const ClassicalState& back = bwd.final_state();
    CHECK(std::abs(back.q1 - s0.q1) < 1e-8);
    CHECK(std::abs(back.q2 - s0.q2) < 1e-8);
    CHECK(std::abs(back.p1 + s0.p1) < 1e-8);
    CHECK(std::abs(back.p2 + s0.p2) < 1e-8);
}

TEST_CASE("mirror symmetry is preserved by the integrator") {
    // untilted potential: a mirror-symmetric state (q2=-q1, p2=-p1) stays so
    const PotentialParams p{0.5, 1e-10, 0.0};
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    s0.p1 = 3.0;
    s0.p2 = -3.0;

    ClassicalOptions opt;
    opt.n_steps = 30000;
    const Trajectory tr = propagate_classical(frozen(p), kCoulomb, 22.0, s0, opt);
    const ClassicalState& sf = tr.final_state();
    CHECK(std::abs(sf.q1 + sf.q2) < 1e-10 * std::abs(sf.q1));
    CHECK(std::abs(sf.p1 + sf.p2) < 1e-10 * (1 + std::abs(sf.p1)));
}

TEST_CASE("verlet option agrees with RK4") {
    const PotentialParams p = harmonic();
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    s0.p1 = 2.0;

    ClassicalOptions rk;
    rk.n_steps = 100000;
    ClassicalOptions vv;
    vv.n_steps = 400000;
    vv.use_verlet = true;
    const ClassicalState a = propagate_classical(frozen(p), kCoulomb, 18.0, s0, rk).final_state();
    const ClassicalState b = propagate_classical(frozen(p), kCoulomb, 18.0, s0, vv).final_state();
    CHECK(std::abs(a.q1 - b.q1) < 1e-5);
    CHECK(std::abs(a.q2 - b.q2) < 1e-5);
    CHECK(std::abs(a.p1 - b.p1) < 1e-4);
    CHECK(std::abs(a.p2 - b.p2) < 1e-4);
}

TEST_CASE("trajectory storage: endpoints only vs sampled") {
    const PotentialParams p = harmonic();
    const ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    ClassicalOptions opt;
    opt.n_steps = 1000;
    const Trajectory ends = propagate_classical(frozen(p), kCoulomb, 5.0, s0, opt);
    CHECK(ends.samples.size() == 2);
    opt.store_every = 100;
    const Trajectory sampled = propagate_classical(frozen(p), kCoulomb, 5.0, s0, opt);
    CHECK(sampled.samples.size() == 11);
    CHECK(sampled.samples.front().t == 0.0);
    CHECK(sampled.final_state().t == doctest::Approx(5.0));
}

TEST_CASE("excitation report: kicked stretch mode shows up in plus quanta only") {
    const PotentialParams p = harmonic();
    ClassicalState s0 = rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb));
    // antisymmetric kick excites only the stretch mode
    const double kick = 0.8;
    s0.p1 = kick;
    s0.p2 = -kick;

    const ExcitationReport rep = classical_excitation(s0, p, kCoulomb, std::cbrt(2 * kCoulomb));
    CHECK(rep.method == "classical");
    // stretch kinetic energy = kick^2 (two ions), in units of hbar*omega_plus
    const double w_plus = std::sqrt(3.0);
    const double expected_plus = kick * kick / w_plus;
    REQUIRE(rep.per_mode.has_value());
    CHECK(rep.per_mode->plus_quanta == doctest::Approx(expected_plus).epsilon(1e-6));
    CHECK(std::abs(rep.per_mode->minus_quanta) < 1e-12);
    CHECK(rep.excitation_quanta ==
          doctest::Approx(rep.per_mode->minus_quanta +
                          rep.per_mode->plus_quanta * w_plus).epsilon(1e-9));
    // energy_reference is the rest energy: a rest state reports zero excitation
    const ExcitationReport rest =
        classical_excitation(rest_state(p, kCoulomb, std::cbrt(2 * kCoulomb)), p, kCoulomb,
                             std::cbrt(2 * kCoulomb));
    CHECK(std::abs(rest.excitation_quanta) < 1e-10);
}
