#include <doctest.h>

#include <cmath>

#include "ionsplit/constants.hpp"
#include "ionsplit/errors.hpp"
#include "ionsplit/trap_spec.hpp"

using namespace ionsplit;
namespace k = ionsplit::constants;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("Be9+ at 2 MHz: derived scales against hand-evaluated formulas") {
    const TrapSpec t = make_trap_spec("Be9+", 2.0e6);

    const double m = k::mass_u_be9 * k::atomic_mass_unit;
    const double w = 2 * k::pi * 2.0e6;
    const double cc = k::elementary_charge * k::elementary_charge / (4 * k::pi * k::epsilon0);

    CHECK(rel(t.mass_kg, m) < 1e-15);
    CHECK(rel(t.charge_C, k::elementary_charge) < 1e-15);
    CHECK(rel(t.omega0_rad_s, w) < 1e-15);
    CHECK(rel(t.coulomb_Jm, cc) < 1e-15);
    CHECK(rel(t.length_scale_m, std::sqrt(k::hbar / (m * w))) < 1e-14);
    CHECK(rel(t.energy_quantum_J, k::hbar * w) < 1e-15);
    CHECK(rel(t.time_scale_s, 1.0 / w) < 1e-15);
    CHECK(rel(t.d0_m, std::cbrt(2 * cc / (m * w * w))) < 1e-14);

    // internal Coulomb strength and equilibrium distance close on each other
    CHECK(rel(t.coulomb, cc / (k::hbar * w * t.length_scale_m)) < 1e-14);
    CHECK(rel(t.d0, std::cbrt(2 * t.coulomb)) < 1e-15);
    CHECK(rel(t.d0 * t.length_scale_m, t.d0_m) < 1e-13);
}

TEST_CASE("Be9+ at 2 MHz: initial separation is 5.80 um") {
    const TrapSpec t = make_trap_spec("Be9+", 2.0e6);
    CHECK(std::abs(t.d0_m - 5.80e-6) < 0.01e-6);
}

TEST_CASE("species lookup is case-insensitive and validates") {
    const TrapSpec a = make_trap_spec("Be9+", 1.0e6);
    const TrapSpec b = make_trap_spec("be9+", 1.0e6);
    const TrapSpec c = make_trap_spec("BE9+", 1.0e6);
    CHECK(a.mass_kg == b.mass_kg);
    CHECK(a.mass_kg == c.mass_kg);

    const TrapSpec ca = make_trap_spec("Ca40+", 1.0e6);
    CHECK(rel(ca.mass_kg, k::mass_u_ca40 * k::atomic_mass_unit) < 1e-15);
    // d0^3 = 2 C_c / (m w^2): heavier ion sits closer
    CHECK(ca.d0_m < a.d0_m);

    CHECK_THROWS_AS(make_trap_spec("Mg24+", 1.0e6), ConfigError);
    CHECK_THROWS_AS(make_trap_spec("Be9+", 0.0), ConfigError);
    CHECK_THROWS_AS(make_trap_spec("Be9+", -3.0e6), ConfigError);
    CHECK_THROWS_AS(make_trap_spec(0.0, k::elementary_charge, 1e6), ConfigError);
}

TEST_CASE("explicit mass/charge constructor matches species table") {
    const TrapSpec a = make_trap_spec("Be9+", 2.5e6);
    const TrapSpec b = make_trap_spec(k::mass_u_be9 * k::atomic_mass_unit,
                                      k::elementary_charge, 2.5e6);
    CHECK(a.coulomb == doctest::Approx(b.coulomb).epsilon(1e-15));
    CHECK(a.d0_m == doctest::Approx(b.d0_m).epsilon(1e-15));
}

TEST_CASE("si_factor: dimensional consistency of every unit tag") {
    const TrapSpec t = make_trap_spec("Ca40+", 1.3e6);
    const double m = t.mass_kg, w = t.omega0_rad_s, L = t.length_scale_m;

    CHECK(rel(si_factor(t, Unit::length), L) < 1e-15);
    CHECK(rel(si_factor(t, Unit::time), 1 / w) < 1e-15);
    CHECK(rel(si_factor(t, Unit::energy), k::hbar * w) < 1e-15);
    // V = alpha q^2: [alpha] = E / L^2
    CHECK(rel(si_factor(t, Unit::alpha), k::hbar * w / (L * L)) < 1e-14);
    // V = beta q^4: [beta] = E / L^4
    CHECK(rel(si_factor(t, Unit::beta), k::hbar * w / (L * L * L * L)) < 1e-14);
    CHECK(rel(si_factor(t, Unit::force), k::hbar * w / L) < 1e-14);
    // alpha scale equals m w^2 / 2 per the harmonic normalization alpha0 = 1/2
    CHECK(rel(si_factor(t, Unit::alpha) * 0.5, m * w * w / 2) < 1e-14);
}

TEST_CASE("to_si / from_si round-trip") {
    const TrapSpec t = make_trap_spec("Be9+", 0.8e6);
    for (Unit u : {Unit::length, Unit::time, Unit::energy, Unit::alpha, Unit::beta, Unit::force}) {
        const double x = 0.37281;
        CHECK(rel(from_si(t, u, to_si(t, u, x)), x) < 1e-15);
    }
    CHECK(unit_from_string("beta") == Unit::beta);
    CHECK_THROWS_AS(unit_from_string("parsec"), ConfigError);
}
