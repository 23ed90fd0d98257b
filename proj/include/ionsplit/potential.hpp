#pragma once

#include <array>

namespace ionsplit {

// External axial trap: V_ext(q) = alpha q^2 + beta q^4 + lambda q.
// Internal units throughout (see TrapSpec).
struct PotentialParams {
    double alpha = 0;
    double beta = 0;
    double lambda = 0;
};

struct NormalModeFrame {
    double d = 0;            // equilibrium separation
    double omega_minus = 0;  // center-of-mass mode
    double omega_plus = 0;   // stretch mode
    std::array<double, 2> eq_positions{0, 0}; // (d/2, -d/2)
};

struct TrapShape {
    double alpha = 0;
    double beta = 0;
    double d = 0;
};

// Full two-ion potential V = alpha(q1^2+q2^2) + beta(q1^4+q2^4)
// + coulomb/(q1-q2) + lambda(q1+q2). Requires q1 > q2.
double potential_energy(const PotentialParams& p, double coulomb, double q1, double q2);
// (dV/dq1, dV/dq2)
std::array<double, 2> potential_gradient(const PotentialParams& p, double coulomb,
                                         double q1, double q2);
// (d2V/dq1^2, d2V/dq1 dq2, d2V/dq2^2)
std::array<double, 3> potential_hessian(const PotentialParams& p, double coulomb,
                                        double q1, double q2);

// Unique positive root of beta d^5 + 2 alpha d^3 - 2 coulomb = 0.
// Requires (alpha > 0, beta >= 0) or (alpha <= 0, beta > 0).
double equilibrium_distance(double alpha, double beta, double coulomb);

// Mode frequencies at separation d: lam_minus = (2 alpha + 3 beta d^2)/m,
// lam_plus = lam_minus + 4 coulomb/(m d^3). Throws DomainError if lam_minus <= 0.
NormalModeFrame normal_modes(double alpha, double beta, double d, double coulomb,
                             double mass = 1.0);

// Inverse map: alpha = m(3 wp^2 - 5 wm^2)/8, d = cbrt(4 coulomb/(m(wp^2 - wm^2))),
// beta = 2 coulomb/d^5 - 2 alpha/d^2.
TrapShape frame_from_frequencies(double omega_minus, double omega_plus, double coulomb,
                                 double mass = 1.0);

// Stationary point of the two-ion potential near `guess`, by damped Newton on the
// gradient. Used for (possibly tilted) equilibria. Returns (q1, q2), q1 > q2.
std::array<double, 2> two_ion_equilibrium(const PotentialParams& p, double coulomb,
                                          std::array<double, 2> guess);

// The two minima of the single-particle external potential (double well, alpha < 0)
// and their energy difference V(q_right) - V(q_left). Throws DomainError if the
// tilt has destroyed one of the wells.
struct WellPair {
    double q_left = 0;
    double q_right = 0;
    double delta_E = 0; // V_ext(q_right) - V_ext(q_left)
};
WellPair external_wells(const PotentialParams& p);

} // namespace ionsplit
