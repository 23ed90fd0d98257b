#pragma once

#include <array>

#include "ionsplit/ansatz.hpp"

namespace ionsplit {

struct ShootingOptions {
    int ode_steps = 20000; // fixed RK4 steps across [0, t_f]
    int max_iters = 2000;
    double x_tol = 1e-10;
    double f_tol = 1e-12; // trap units; hbar*omega0 = 1
};

struct ShootingResult {
    SeparationDesign design;
    double objective = 0; // residual stretch energy at t_f (+ cubic term at order 12)
    double x_plus_final = 0, x_plus_dot_final = 0;
    int iterations = 0;
    bool converged = false;
};

// COM-frame stretch offset driven by the frame acceleration:
// x'' + omega_plus^2(t) x = -d_ddot/sqrt(2), x(0) = x'(0) = 0.
// Returns {x(t_f), x'(t_f)}; throws DomainError if the design turns invalid.
std::array<double, 2> integrate_x_plus(const SeparationDesign& design, int steps);

// Invariant-based instantaneous mode energies for level n (trap units).
double mode_energy_minus(const SeparationDesign& design, double t, int n);
double mode_energy_plus(const SeparationDesign& design, double t, int n, double x,
                        double x_dot);

// Residual stretch energy at t_f above the adiabatic ground value.
double residual_energy(const SeparationDesign& design, double x_f, double x_dot_f);

ShootingResult shoot(double coulomb, double t_f, double sep_factor, int order,
                     bool perturbative, const ShootingOptions& opt = {},
                     const std::array<double, 3>* warm_start = nullptr);

} // namespace ionsplit
