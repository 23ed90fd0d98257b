#include "ionsplit/reference_ramp.hpp"

#include <cmath>

#include "ionsplit/constants.hpp"
#include "ionsplit/errors.hpp"

namespace ionsplit {

Waveform reference_ramp(double coulomb, double t_f, double sep_factor,
                        std::size_t n_samples) {
    if (!(coulomb > 0) || !(t_f > 0) || !(sep_factor > 1) || n_samples < 2)
        throw ConfigError("reference_ramp: bad coulomb, t_f, sep_factor or sample count");

    const double d0 = std::cbrt(2.0 * coulomb);
    const double dd = (sep_factor - 1.0) * d0;
    const double alpha0 = 0.5; // m*omega0^2/2 in trap units
    const double alpha_f = -0.5 * alpha0;
    constexpr double half_pi = constants::pi / 2.0;

    Waveform wf;
    wf.coulomb = coulomb;
    wf.t_f = t_f;
    const std::size_t n = n_samples;
    for (auto* col : {&wf.t, &wf.alpha, &wf.beta, &wf.d, &wf.d_dot, &wf.d_ddot,
                      &wf.alpha_dot, &wf.beta_dot, &wf.omega_minus_sq, &wf.omega_plus_sq})
        col->resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        const double t = s * t_f;
        const double sn = std::sin(half_pi * s), cs = std::cos(half_pi * s);

        const double d = d0 + dd * s * s * sn;
        const double d_s = dd * (2.0 * s * sn + half_pi * s * s * cs);
        const double d_ss =
            dd * (2.0 * sn + 2.0 * constants::pi * s * cs - half_pi * half_pi * s * s * sn);

        const double u = 3.0 * s * s - 2.0 * s * s * s;
        const double alpha = alpha0 + (alpha_f - alpha0) * u;
        const double alpha_s = (alpha_f - alpha0) * (6.0 * s - 6.0 * s * s);

        const double d2 = d * d, d3 = d2 * d, d5 = d2 * d3;
        const double beta = 2.0 * coulomb / d5 - 2.0 * alpha / d2;
        const double d_dot = d_s / t_f;
        const double alpha_dot = alpha_s / t_f;
        const double beta_dot = -10.0 * coulomb * d_dot / (d5 * d) - 2.0 * alpha_dot / d2 +
                                4.0 * alpha * d_dot / d3;

        wf.t[i] = t;
        wf.alpha[i] = alpha;
        wf.beta[i] = beta;
        wf.d[i] = d;
        wf.d_dot[i] = d_dot;
        wf.d_ddot[i] = d_ss / (t_f * t_f);
        wf.alpha_dot[i] = alpha_dot;
        wf.beta_dot[i] = beta_dot;
        wf.omega_minus_sq[i] = 2.0 * alpha + 3.0 * beta * d2;
        wf.omega_plus_sq[i] = wf.omega_minus_sq[i] + 4.0 * coulomb / d3;
    }
    return wf;
}

} // namespace ionsplit
