#pragma once

#include <string_view>

namespace ionsplit {

// Two-ion trap description plus the dimensionless unit system derived from it.
// Internal computations use hbar = m = omega0 = 1; lengths are measured in
// sqrt(hbar / (m omega0)). All SI exchange goes through to_si / from_si.
struct TrapSpec {
    // SI inputs
    double mass_kg = 0;
    double charge_C = 0;
    double omega0_rad_s = 0;

    // SI derived
    double coulomb_Jm = 0;      // C_c = q^2 / (4 pi eps0)
    double length_scale_m = 0;  // sqrt(hbar / (m omega0))
    double energy_quantum_J = 0; // hbar omega0
    double time_scale_s = 0;    // 1 / omega0
    double d0_m = 0;            // cbrt(2 C_c / (m omega0^2))

    // internal units
    double coulomb = 0;         // C_c / (energy_quantum * length_scale)
    double d0 = 0;              // cbrt(2 * coulomb)
};

// species: "Be9+" or "Ca40+" (case-insensitive). omega0_hz is omega0 / 2pi.
TrapSpec make_trap_spec(std::string_view species, double omega0_hz);
TrapSpec make_trap_spec(double mass_kg, double charge_C, double omega0_hz);

enum class Unit { length, time, energy, alpha, beta, force };

Unit unit_from_string(std::string_view tag);

// Conversion factor: value_si = value_internal * si_factor(trap, unit).
double si_factor(const TrapSpec& trap, Unit unit);
double to_si(const TrapSpec& trap, Unit unit, double internal_value);
double from_si(const TrapSpec& trap, Unit unit, double si_value);

} // namespace ionsplit
