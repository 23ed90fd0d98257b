#pragma once

namespace ionsplit::constants {

// CODATA-2018 values, hard-coded for reproducibility.
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double epsilon0 = 8.8541878128e-12;    // F / m
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double pi = 3.14159265358979323846;

// Atomic masses (u). The missing electron shifts d0 at the 1e-5 level,
// far below every tolerance in use.
inline constexpr double mass_u_be9 = 9.012183065;
inline constexpr double mass_u_ca40 = 39.962590863;

} // namespace ionsplit::constants
