#pragma once

namespace ionsplit {

// Multiplier of <q_+^j> in the j-th anharmonic energy correction:
// (-1)^(j+1) * coulomb / d^(j+1) * (2/m)^(j/2).
double perturbation_coefficient(double coulomb, double d, int j, double mass = 1.0);

// <q^p> of a Gaussian with mean x and variance sigma_sq (level n = 0).
double displaced_moment_n0(int p, double sigma_sq, double x);

// <q^p> of oscillator level n scaled by rho, natural frequency omega0,
// centered at x. n = 0 uses the closed form; n >= 1 uses Gauss-Hermite nodes.
double displaced_moment(int n, int p, double rho, double omega0, double x);

// First-order anharmonic energy correction delta E_n^(j) at a protocol point.
double delta_energy(double coulomb, double d, int j, int n, double rho, double omega0,
                    double x, double mass = 1.0);

} // namespace ionsplit
