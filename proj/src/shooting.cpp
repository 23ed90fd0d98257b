#include "ionsplit/shooting.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "ionsplit/errors.hpp"
#include "ionsplit/nelder_mead.hpp"
#include "ionsplit/perturbation.hpp"

namespace ionsplit {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

struct Drive {
    double omega_plus_sq, d_ddot;
};

bool drive_at(const SeparationDesign& design, double t, Drive& out) {
    DesignPoint p;
    if (!design.try_at(t, p)) return false;
    out.omega_plus_sq = p.omega_plus_sq;
    out.d_ddot = p.d_ddot;
    return true;
}

// RK4 on (x, v) with v' = -omega_plus^2 x - d_ddot/sqrt(2).
// Returns the first failing step (design infeasible) or -1 on success.
int integrate_impl(const SeparationDesign& design, int steps, double& x, double& v) {
    const double h = design.t_f / steps;
    x = 0;
    v = 0;
    Drive a, b, c;
    if (!drive_at(design, 0.0, a)) return 0;
    auto acc = [](const Drive& d, double xx) { return -d.omega_plus_sq * xx - inv_sqrt2 * d.d_ddot; };
    for (int i = 0; i < steps; ++i) {
        const double t = design.t_f * static_cast<double>(i) / steps;
        if (!drive_at(design, t + 0.5 * h, b)) return i;
        if (!drive_at(design, design.t_f * static_cast<double>(i + 1) / steps, c)) return i;
        const double k1x = v, k1v = acc(a, x);
        const double k2x = v + 0.5 * h * k1v, k2v = acc(b, x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v, k3v = acc(b, x + 0.5 * h * k2x);
        const double k4x = v + h * k3v, k4v = acc(c, x + h * k3x);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        a = c;
    }
    return -1;
}

} // namespace

std::array<double, 2> integrate_x_plus(const SeparationDesign& design, int steps) {
    double x, v;
    const int fail = integrate_impl(design, steps, x, v);
    if (fail >= 0) throw DomainError("mode gap closed during stretch integration");
    return {x, v};
}

double mode_energy_minus(const SeparationDesign& design, double t, int n) {
    const ModeScaling m = design.rho_minus_at(t);
    const double w2 = frequency_sq_from_scaling(m, design.omega_minus0)[0];
    const double w0 = design.omega_minus0;
    return (2 * n + 1) / (4.0 * w0) *
           (m.d1 * m.d1 + w2 * m.value * m.value + w0 * w0 / (m.value * m.value));
}

double mode_energy_plus(const SeparationDesign& design, double t, int n, double x,
                        double x_dot) {
    const ModeScaling m = design.rho_plus_at(t);
    const double w2 = frequency_sq_from_scaling(m, design.omega_plus0)[0];
    if (w2 == 0) throw DomainError("driven term undefined where omega_plus^2 = 0");
    const DesignPoint p = design.at(t);
    const double w0 = design.omega_plus0;
    const double invariant = (2 * n + 1) / (4.0 * w0) *
                             (m.d1 * m.d1 + w2 * m.value * m.value +
                              w0 * w0 / (m.value * m.value));
    const double shift = x - inv_sqrt2 * p.d_ddot / w2;
    return invariant + 0.5 * x_dot * x_dot + 0.5 * w2 * shift * shift;
}

double residual_energy(const SeparationDesign& design, double x_f, double x_dot_f) {
    const double w = design.omega_plus_final;
    return 0.5 * x_dot_f * x_dot_f + 0.5 * w * w * x_f * x_f;
}

ShootingResult shoot(double coulomb, double t_f, double sep_factor, int order,
                     bool perturbative, const ShootingOptions& opt,
                     const std::array<double, 3>* warm_start) {
    if (perturbative && order != 12)
        throw ConfigError("the perturbative objective needs the order-12 ansatz");
    const std::size_t n_free = (order == 9) ? 0 : (order == 11 ? 2 : 3);

    auto evaluate = [&](const std::array<double, 3>& fp, ShootingResult* fill) {
        const SeparationDesign design = make_design(coulomb, t_f, sep_factor, order, fp);
        double x, v;
        const int fail = integrate_impl(design, opt.ode_steps, x, v);
        if (fail >= 0) {
            // Infeasible: large penalty, worse the earlier the gap closes.
            return 1e8 * (2.0 - static_cast<double>(fail) / opt.ode_steps);
        }
        double obj = residual_energy(design, x, v);
        if (perturbative)
            obj += delta_energy(coulomb, design.d_final, 3, 0, design.gamma_plus,
                                design.omega_plus0, x);
        if (fill) {
            fill->design = design;
            fill->objective = obj;
            fill->x_plus_final = x;
            fill->x_plus_dot_final = v;
        }
        return obj;
    };

    ShootingResult res;
    if (n_free == 0) {
        evaluate({0, 0, 0}, &res);
        res.converged = true;
        return res;
    }

    std::vector<double> x0(n_free, 0.0);
    if (warm_start)
        for (std::size_t i = 0; i < n_free; ++i) x0[i] = (*warm_start)[i];

    NelderMeadOptions nm;
    nm.max_iters = opt.max_iters;
    nm.x_tol = opt.x_tol;
    nm.f_tol = opt.f_tol;
    const auto sol = nelder_mead(
        [&](const std::vector<double>& p) {
            std::array<double, 3> fp{0, 0, 0};
            for (std::size_t i = 0; i < n_free; ++i) fp[i] = p[i];
            return evaluate(fp, nullptr);
        },
        x0, nm);

    std::array<double, 3> best{0, 0, 0};
    for (std::size_t i = 0; i < n_free; ++i) best[i] = sol.x[i];
    evaluate(best, &res);
    res.iterations = sol.iterations;
    res.converged = sol.converged;
    return res;
}

} // namespace ionsplit
