#include "ionsplit/potential.hpp"

#include <algorithm>
#include <cmath>

#include "ionsplit/errors.hpp"

namespace ionsplit {

namespace {

void require_ordered(double q1, double q2) {
    if (!(q1 > q2)) throw DomainError("ion ordering violated: requires q1 > q2");
}

double quintic_residual(double alpha, double beta, double coulomb, double d) {
    return beta * d * d * d * d * d + 2.0 * alpha * d * d * d - 2.0 * coulomb;
}

} // namespace

double potential_energy(const PotentialParams& p, double coulomb, double q1, double q2) {
    require_ordered(q1, q2);
    const double q1s = q1 * q1, q2s = q2 * q2;
    return p.alpha * (q1s + q2s) + p.beta * (q1s * q1s + q2s * q2s) +
           coulomb / (q1 - q2) + p.lambda * (q1 + q2);
}

std::array<double, 2> potential_gradient(const PotentialParams& p, double coulomb,
                                         double q1, double q2) {
    require_ordered(q1, q2);
    const double inv2 = 1.0 / ((q1 - q2) * (q1 - q2));
    return {2.0 * p.alpha * q1 + 4.0 * p.beta * q1 * q1 * q1 - coulomb * inv2 + p.lambda,
            2.0 * p.alpha * q2 + 4.0 * p.beta * q2 * q2 * q2 + coulomb * inv2 + p.lambda};
}

std::array<double, 3> potential_hessian(const PotentialParams& p, double coulomb,
                                        double q1, double q2) {
    require_ordered(q1, q2);
    const double g = q1 - q2;
    const double inv3 = 2.0 * coulomb / (g * g * g);
    return {2.0 * p.alpha + 12.0 * p.beta * q1 * q1 + inv3, -inv3,
            2.0 * p.alpha + 12.0 * p.beta * q2 * q2 + inv3};
}

double equilibrium_distance(double alpha, double beta, double coulomb) {
    if (!(coulomb > 0)) throw DomainError("equilibrium_distance requires coulomb > 0");
    const bool ok = (alpha > 0 && beta >= 0) || (alpha <= 0 && beta > 0);
    if (!ok) throw DomainError("equilibrium_distance: no positive root for this sign pattern");

    // Upper bracket from whichever term dominates.
    double hi = 0;
    if (alpha > 0) hi = std::max(hi, std::cbrt(coulomb / alpha));
    if (beta > 0) hi = std::max(hi, std::pow(2.0 * coulomb / beta, 0.2));
    hi = 2.0 * std::max(hi, 1e-300);
    for (int i = 0; i < 200 && quintic_residual(alpha, beta, coulomb, hi) < 0; ++i) hi *= 2.0;

    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (quintic_residual(alpha, beta, coulomb, mid) < 0 ? lo : hi) = mid;
    }

    // Newton polish inside the bracket.
    double d = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        const double f = quintic_residual(alpha, beta, coulomb, d);
        const double fp = 5.0 * beta * d * d * d * d + 6.0 * alpha * d * d;
        if (fp != 0) {
            const double step = f / fp;
            const double next = d - step;
            d = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
        }
        const double fr = quintic_residual(alpha, beta, coulomb, d);
        (fr < 0 ? lo : hi) = d;
        if (std::abs(fr) < 1e-14 * coulomb) break;
    }
    return d;
}

NormalModeFrame normal_modes(double alpha, double beta, double d, double coulomb,
                             double mass) {
    if (!(d > 0)) throw DomainError("normal_modes requires d > 0");
    const double lam_minus = (2.0 * alpha + 3.0 * beta * d * d) / mass;
    if (!(lam_minus > 0)) throw DomainError("normal_modes: unstable configuration (lambda- <= 0)");
    const double lam_plus = lam_minus + 4.0 * coulomb / (mass * d * d * d);
    NormalModeFrame f;
    f.d = d;
    f.omega_minus = std::sqrt(lam_minus);
    f.omega_plus = std::sqrt(lam_plus);
    f.eq_positions = {0.5 * d, -0.5 * d};
    return f;
}

TrapShape frame_from_frequencies(double omega_minus, double omega_plus, double coulomb,
                                 double mass) {
    if (!(omega_plus > omega_minus) || !(omega_minus > 0))
        throw DomainError("frame_from_frequencies requires omega_plus > omega_minus > 0");
    const double wm2 = omega_minus * omega_minus;
    const double wp2 = omega_plus * omega_plus;
    TrapShape s;
    s.alpha = mass * (3.0 * wp2 - 5.0 * wm2) / 8.0;
    s.d = std::cbrt(4.0 * coulomb / (mass * (wp2 - wm2)));
    s.beta = 2.0 * coulomb / std::pow(s.d, 5) - 2.0 * s.alpha / (s.d * s.d);
    return s;
}

std::array<double, 2> two_ion_equilibrium(const PotentialParams& p, double coulomb,
                                          std::array<double, 2> guess) {
    double q1 = guess[0], q2 = guess[1];
    if (!(q1 > q2)) throw DomainError("two_ion_equilibrium: guess must have q1 > q2");

    const double scale = std::max(1.0, std::abs(q1 - q2));
    for (int i = 0; i < 200; ++i) {
        const auto g = potential_gradient(p, coulomb, q1, q2);
        const double gnorm = std::hypot(g[0], g[1]);
        if (gnorm < 1e-13 * std::max(1.0, std::abs(p.alpha) * scale)) return {q1, q2};

        const auto h = potential_hessian(p, coulomb, q1, q2);
        const double det = h[0] * h[2] - h[1] * h[1];
        double s1, s2;
        if (std::abs(det) > 1e-300) {
            s1 = -(h[2] * g[0] - h[1] * g[1]) / det;
            s2 = -(h[0] * g[1] - h[1] * g[0]) / det;
        } else {
            s1 = -g[0];
            s2 = -g[1];
        }
        // Damp so the step never collapses the pair.
        double w = 1.0;
        while (w > 1e-6 && (q1 + w * s1) - (q2 + w * s2) < 0.05 * (q1 - q2)) w *= 0.5;
        q1 += w * s1;
        q2 += w * s2;
    }
    throw ConvergenceError("two_ion_equilibrium: Newton did not converge");
}

WellPair external_wells(const PotentialParams& p) {
    if (!(p.alpha < 0) || !(p.beta > 0))
        throw DomainError("external_wells requires a double well (alpha < 0, beta > 0)");
    const double q0 = std::sqrt(-p.alpha / (2.0 * p.beta));

    auto refine = [&](double q) {
        for (int i = 0; i < 100; ++i) {
            const double f = 2.0 * p.alpha * q + 4.0 * p.beta * q * q * q + p.lambda;
            const double fp = 2.0 * p.alpha + 12.0 * p.beta * q * q;
            if (!(fp > 0)) throw DomainError("external_wells: tilt destroyed a well");
            const double next = q - f / fp;
            if (std::abs(next - q) < 1e-15 * std::max(1.0, std::abs(q))) return next;
            q = next;
        }
        throw ConvergenceError("external_wells: Newton did not converge");
    };

    WellPair w;
    w.q_left = refine(-q0);
    w.q_right = refine(q0);
    if (!(w.q_left < 0 && w.q_right > 0))
        throw DomainError("external_wells: tilt destroyed a well");
    auto vext = [&](double q) { return p.alpha * q * q + p.beta * q * q * q * q + p.lambda * q; };
    w.delta_E = vext(w.q_right) - vext(w.q_left);
    return w;
}

} // namespace ionsplit
