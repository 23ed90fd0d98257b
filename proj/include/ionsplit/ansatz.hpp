#pragma once

#include <array>
#include <vector>

namespace ionsplit {

// Scaling function rho(s) on s in [0,1] with prescribed endpoint derivatives.
// eval returns {rho, rho', rho'', rho''', rho''''} with respect to s.
// Factory-built curves evaluate in the factored basis
//   1 + (gamma-1) s^5 R(s) + e0 s^5(s-1)^5 + e1 s^5(s-1)^5(s+5)
//     + e2 s^5(s-1)^5(s^2+5s+15)
// whose boundary factors vanish identically, so the ten endpoint conditions
// hold exactly for any parameter size. Expanded coefficients are kept for
// inspection; hand-built coefficient vectors use plain Horner (family = 0).
struct RhoPolynomial {
    std::vector<double> coeffs;
    double gamma = 1.0;
    std::array<double, 3> extras{0, 0, 0};
    int family = 0; // 0 generic, else 9/11/12

    std::array<double, 5> eval(double s) const;

    // Degree 9: unique polynomial with rho(0)=1, rho(1)=gamma and first
    // through fourth derivatives zero at both ends.
    static RhoPolynomial minimal(double gamma);
    // Degree 11: minimal family plus two free coefficients.
    static RhoPolynomial order11(double gamma, double a10, double a11);
    // Degree 12: minimal family plus three free coefficients.
    static RhoPolynomial order12(double gamma, double c10, double c11, double c12);
};

// Scaling-function state at a given lab time, derivatives with respect to t.
struct ModeScaling {
    double value, d1, d2, d3, d4;
};

// One point of a separation protocol in trap units (hbar = m = omega0 = 1).
struct DesignPoint {
    double alpha, beta, d;
    double alpha_dot, beta_dot, d_dot, d_ddot;
    double omega_minus_sq, omega_plus_sq;
};

// A full protocol: both mode scaling functions plus the frame geometry.
// Control curves follow from the two instantaneous mode frequencies alone.
struct SeparationDesign {
    double coulomb = 0;
    double t_f = 0;
    double sep_factor = 10.0;
    int order = 11;                      // 9 (no free params), 11 or 12
    std::array<double, 3> free_params{}; // (a10,a11,-) or (c10,c11,c12)

    double d0 = 0, d_final = 0;
    double omega_minus0 = 1.0;
    double omega_plus0 = 0, omega_plus_final = 0;
    double gamma_plus = 1.0;

    RhoPolynomial rho_m, rho_p;

    ModeScaling rho_minus_at(double t) const;
    ModeScaling rho_plus_at(double t) const;

    // False when the mode gap omega_plus^2 - omega_minus^2 closes (d undefined).
    bool try_at(double t, DesignPoint& out) const;
    DesignPoint at(double t) const; // throws DomainError where try_at fails
};

SeparationDesign make_design(double coulomb, double t_f, double sep_factor, int order,
                             const std::array<double, 3>& free_params);

// Instantaneous squared frequency and its first two time derivatives from a
// scaling function with natural frequency omega0 (Ermakov closure).
std::array<double, 3> frequency_sq_from_scaling(const ModeScaling& m, double omega0);

} // namespace ionsplit
