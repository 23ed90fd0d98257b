#include "ionsplit/classical.hpp"

#include <cmath>

#include "ionsplit/errors.hpp"

namespace ionsplit {

double energy_classical(const ClassicalState& s, const PotentialParams& params,
                        double coulomb, double mass) {
    return (s.p1 * s.p1 + s.p2 * s.p2) / (2.0 * mass) +
           potential_energy(params, coulomb, s.q1, s.q2);
}

ClassicalState rest_state(const PotentialParams& params, double coulomb, double d_guess) {
    const auto eq = two_ion_equilibrium(params, coulomb, {0.5 * d_guess, -0.5 * d_guess});
    ClassicalState s;
    s.q1 = eq[0];
    s.q2 = eq[1];
    return s;
}

namespace {

struct Deriv {
    double dq1, dq2, dp1, dp2;
};

Deriv rhs(const ClassicalState& s, const PotentialParams& p, double coulomb) {
    const auto g = potential_gradient(p, coulomb, s.q1, s.q2);
    return {s.p1, s.p2, -g[0], -g[1]};
}

void check_state(const ClassicalState& s, double min_gap) {
    if (!(s.q1 - s.q2 > min_gap))
        throw DomainError("ion gap collapsed: step-size failure");
    if (!std::isfinite(s.q1) || !std::isfinite(s.p1) || !std::isfinite(s.q2) ||
        !std::isfinite(s.p2))
        throw DomainError("non-finite state during propagation");
}

} // namespace

Trajectory propagate_classical(const ControlFunction& control, double coulomb, double t_f,
                               const ClassicalState& initial, const ClassicalOptions& opt) {
    if (opt.n_steps < 1) throw ConfigError("propagation needs at least one step");
    const double h = t_f / opt.n_steps;
    const double min_gap = 1e-9 * std::max(1.0, initial.q1 - initial.q2);

    Trajectory traj;
    traj.samples.reserve(opt.store_every > 0 ? opt.n_steps / opt.store_every + 2 : 2);
    ClassicalState s = initial;
    s.t = 0;
    traj.samples.push_back(s);

    for (int i = 0; i < opt.n_steps; ++i) {
        const double t = t_f * static_cast<double>(i) / opt.n_steps;
        const double t_next = t_f * static_cast<double>(i + 1) / opt.n_steps;
        if (opt.use_verlet) {
            const auto g0 = potential_gradient(control(t), coulomb, s.q1, s.q2);
            s.q1 += h * s.p1 - 0.5 * h * h * g0[0];
            s.q2 += h * s.p2 - 0.5 * h * h * g0[1];
            check_state(s, min_gap);
            const auto g1 = potential_gradient(control(t_next), coulomb, s.q1, s.q2);
            s.p1 -= 0.5 * h * (g0[0] + g1[0]);
            s.p2 -= 0.5 * h * (g0[1] + g1[1]);
        } else {
            const PotentialParams pa = control(t);
            const PotentialParams pb = control(t + 0.5 * h);
            const PotentialParams pc = control(t_next);
            const Deriv k1 = rhs(s, pa, coulomb);
            ClassicalState s2{s.q1 + 0.5 * h * k1.dq1, s.q2 + 0.5 * h * k1.dq2,
                              s.p1 + 0.5 * h * k1.dp1, s.p2 + 0.5 * h * k1.dp2, 0};
            const Deriv k2 = rhs(s2, pb, coulomb);
            ClassicalState s3{s.q1 + 0.5 * h * k2.dq1, s.q2 + 0.5 * h * k2.dq2,
                              s.p1 + 0.5 * h * k2.dp1, s.p2 + 0.5 * h * k2.dp2, 0};
            const Deriv k3 = rhs(s3, pb, coulomb);
            ClassicalState s4{s.q1 + h * k3.dq1, s.q2 + h * k3.dq2, s.p1 + h * k3.dp1,
                              s.p2 + h * k3.dp2, 0};
            const Deriv k4 = rhs(s4, pc, coulomb);
            s.q1 += h / 6.0 * (k1.dq1 + 2 * k2.dq1 + 2 * k3.dq1 + k4.dq1);
            s.q2 += h / 6.0 * (k1.dq2 + 2 * k2.dq2 + 2 * k3.dq2 + k4.dq2);
            s.p1 += h / 6.0 * (k1.dp1 + 2 * k2.dp1 + 2 * k3.dp1 + k4.dp1);
            s.p2 += h / 6.0 * (k1.dp2 + 2 * k2.dp2 + 2 * k3.dp2 + k4.dp2);
        }
        s.t = t_next;
        check_state(s, min_gap);
        if (opt.store_every > 0 && (i + 1) % opt.store_every == 0 && i + 1 != opt.n_steps)
            traj.samples.push_back(s);
    }
    traj.samples.push_back(s);
    return traj;
}

ExcitationReport classical_excitation(const ClassicalState& final_state,
                                      const PotentialParams& final_params, double coulomb,
                                      double d_guess, double mass) {
    const auto eq = two_ion_equilibrium(final_params, coulomb,
                                        {0.5 * d_guess, -0.5 * d_guess});
    ExcitationReport rep;
    rep.method = "classical";
    rep.energy_final = energy_classical(final_state, final_params, coulomb, mass);
    rep.energy_reference = potential_energy(final_params, coulomb, eq[0], eq[1]);
    rep.excitation_quanta = rep.energy_final - rep.energy_reference;

    // Exact 2x2 eigenbasis; a tilt breaks the (1,+-1) symmetry of the modes.
    const auto h = potential_hessian(final_params, coulomb, eq[0], eq[1]);
    const double disc = std::hypot(h[0] - h[2], 2.0 * h[1]);
    const double lam_minus = 0.5 * (h[0] + h[2] - disc);
    const double lam_plus = 0.5 * (h[0] + h[2] + disc);
    double v1 = h[1], v2 = lam_minus - h[0];
    const double vn = std::hypot(v1, v2);
    if (vn > 0) { v1 /= vn; v2 /= vn; } else { v1 = 1; v2 = 0; }

    const double dq1 = final_state.q1 - eq[0], dq2 = final_state.q2 - eq[1];
    const double xm = v1 * dq1 + v2 * dq2, xp = -v2 * dq1 + v1 * dq2;
    const double pm = v1 * final_state.p1 + v2 * final_state.p2;
    const double pp = -v2 * final_state.p1 + v1 * final_state.p2;
    const double e_minus = pm * pm / (2.0 * mass) + 0.5 * lam_minus * xm * xm;
    const double e_plus = pp * pp / (2.0 * mass) + 0.5 * lam_plus * xp * xp;
    const double w_minus = lam_minus > 0 ? std::sqrt(lam_minus / mass) : 0;
    const double w_plus = lam_plus > 0 ? std::sqrt(lam_plus / mass) : 0;
    ModeSplit split;
    split.minus_quanta = w_minus > 0 ? e_minus / w_minus : e_minus;
    split.plus_quanta = w_plus > 0 ? e_plus / w_plus : e_plus;
    rep.per_mode = split;
    return rep;
}

} // namespace ionsplit
