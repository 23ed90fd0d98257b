#pragma once

#include "ionsplit/waveform.hpp"

namespace ionsplit {

// Non-optimized comparison protocol: prescribed separation
//   d(t) = d0 + (F-1) d0 s^2 sin(pi s / 2),  s = t/t_f,
// cubic alpha ramp alpha0 -> -alpha0/2 with zero end slopes, and beta solving
// the equilibrium quintic for the prescribed d. The quartic coefficient goes
// negative mid-ramp and both mode curvatures can invert transiently; the
// omega_*_sq columns record the signed curvatures.
Waveform reference_ramp(double coulomb, double t_f, double sep_factor,
                        std::size_t n_samples);

} // namespace ionsplit
