#include "ionsplit/ansatz.hpp"

#include <cmath>

#include "ionsplit/errors.hpp"

namespace ionsplit {

namespace {

// value plus four derivatives, combined with binomial-weighted Leibniz rules
using Jet = std::array<double, 5>;

Jet mul(const Jet& a, const Jet& b) {
    return {a[0] * b[0],
            a[1] * b[0] + a[0] * b[1],
            a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2],
            a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3],
            a[4] * b[0] + 4 * a[3] * b[1] + 6 * a[2] * b[2] + 4 * a[1] * b[3] +
                a[0] * b[4]};
}

Jet fifth_power(double x) {
    const double x2 = x * x;
    return {x2 * x2 * x, 5 * x2 * x2, 20 * x2 * x, 60 * x2, 120 * x};
}

// R(s) = 126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4; s^5 R(s) is the unique
// degree-9 curve with value 1 at s=1 and four vanishing end derivatives.
Jet base_shape(double s) {
    return {126 + s * (-420 + s * (540 + s * (-315 + s * 70))),
            -420 + s * (1080 + s * (-945 + s * 280)),
            1080 + s * (-1890 + s * 840),
            -1890 + s * 1680,
            1680};
}

void axpy(double a, const Jet& x, Jet& y) {
    for (int k = 0; k < 5; ++k) y[k] += a * x[k];
}

} // namespace

std::array<double, 5> RhoPolynomial::eval(double s) const {
    if (family == 0) {
        const long double x = s;
        long double v = 0, d1 = 0, d2 = 0, d3 = 0, d4 = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            d4 = d4 * x + d3;
            d3 = d3 * x + d2;
            d2 = d2 * x + d1;
            d1 = d1 * x + v;
            v = v * x + coeffs[i];
        }
        return {static_cast<double>(v), static_cast<double>(d1),
                static_cast<double>(2.0L * d2), static_cast<double>(6.0L * d3),
                static_cast<double>(24.0L * d4)};
    }

    const Jet p5 = fifth_power(s);
    Jet out{0, 0, 0, 0, 0};
    axpy(gamma - 1.0, mul(p5, base_shape(s)), out);
    out[0] += 1.0;
    if (family >= 11) {
        const Jet pq = mul(p5, fifth_power(s - 1.0));
        axpy(extras[0], pq, out);
        axpy(extras[1], mul(pq, Jet{s + 5.0, 1, 0, 0, 0}), out);
        if (family == 12)
            axpy(extras[2], mul(pq, Jet{s * s + 5 * s + 15, 2 * s + 5, 2, 0, 0}), out);
    }
    return out;
}

RhoPolynomial RhoPolynomial::minimal(double gamma) {
    const double g = gamma - 1.0;
    RhoPolynomial p;
    p.coeffs = {1, 0, 0, 0, 0, 126 * g, -420 * g, 540 * g, -315 * g, 70 * g};
    p.gamma = gamma;
    p.family = 9;
    return p;
}

RhoPolynomial RhoPolynomial::order11(double gamma, double a10, double a11) {
    const double g = gamma - 1.0;
    RhoPolynomial p;
    p.coeffs = {1,
                0,
                0,
                0,
                0,
                126 * g - a10 - 5 * a11,
                -420 * g + 5 * a10 + 24 * a11,
                540 * g - 10 * a10 - 45 * a11,
                -315 * g + 10 * a10 + 40 * a11,
                70 * g - 5 * a10 - 15 * a11,
                a10,
                a11};
    p.gamma = gamma;
    p.extras = {a10, a11, 0};
    p.family = 11;
    return p;
}

RhoPolynomial RhoPolynomial::order12(double gamma, double c10, double c11, double c12) {
    const double g = gamma - 1.0;
    RhoPolynomial p;
    p.coeffs = {1,
                0,
                0,
                0,
                0,
                126 * g - (c10 + 5 * c11 + 15 * c12),
                -420 * g + (5 * c10 + 24 * c11 + 70 * c12),
                540 * g - (10 * c10 + 45 * c11 + 126 * c12),
                -315 * g + (10 * c10 + 40 * c11 + 105 * c12),
                70 * g - (5 * c10 + 15 * c11 + 35 * c12),
                c10,
                c11,
                c12};
    p.gamma = gamma;
    p.extras = {c10, c11, c12};
    p.family = 12;
    return p;
}

namespace {

ModeScaling scale_to_time(const std::array<double, 5>& e, double t_f) {
    const double u = 1.0 / t_f;
    return {e[0], e[1] * u, e[2] * u * u, e[3] * u * u * u, e[4] * u * u * u * u};
}

} // namespace

ModeScaling SeparationDesign::rho_minus_at(double t) const {
    return scale_to_time(rho_m.eval(t / t_f), t_f);
}

ModeScaling SeparationDesign::rho_plus_at(double t) const {
    return scale_to_time(rho_p.eval(t / t_f), t_f);
}

std::array<double, 3> frequency_sq_from_scaling(const ModeScaling& m, double omega0) {
    const double w2 = omega0 * omega0;
    const double r = m.value;
    if (!(r > 0)) throw DomainError("scaling function is not positive");
    const double r2 = r * r, r3 = r2 * r, r5 = r2 * r3, r6 = r3 * r3;
    const double f = w2 / (r2 * r2) - m.d2 / r;
    const double fd = -4.0 * w2 * m.d1 / r5 - m.d3 / r + m.d2 * m.d1 / r2;
    const double fdd = -4.0 * w2 * (m.d2 / r5 - 5.0 * m.d1 * m.d1 / r6) - m.d4 / r +
                       2.0 * m.d3 * m.d1 / r2 + m.d2 * m.d2 / r2 -
                       2.0 * m.d2 * m.d1 * m.d1 / r3;
    return {f, fd, fdd};
}

bool SeparationDesign::try_at(double t, DesignPoint& out) const {
    const auto fm = frequency_sq_from_scaling(rho_minus_at(t), omega_minus0);
    const auto fp = frequency_sq_from_scaling(rho_plus_at(t), omega_plus0);

    const double W = fp[0] - fm[0];
    if (!(W > 0)) return false;
    const double Wd = fp[1] - fm[1];
    const double Wdd = fp[2] - fm[2];

    out.omega_minus_sq = fm[0];
    out.omega_plus_sq = fp[0];
    out.d = std::cbrt(4.0 * coulomb / W);
    out.d_dot = -out.d * Wd / (3.0 * W);
    out.d_ddot = out.d * ((4.0 / 9.0) * (Wd / W) * (Wd / W) - Wdd / (3.0 * W));
    out.alpha = (3.0 * fp[0] - 5.0 * fm[0]) / 8.0;
    out.alpha_dot = (3.0 * fp[1] - 5.0 * fm[1]) / 8.0;
    const double d2 = out.d * out.d, d3 = d2 * out.d, d5 = d2 * d3;
    out.beta = 2.0 * coulomb / d5 - 2.0 * out.alpha / d2;
    out.beta_dot = -10.0 * coulomb * out.d_dot / (d5 * out.d) -
                   2.0 * out.alpha_dot / d2 + 4.0 * out.alpha * out.d_dot / d3;
    return true;
}

DesignPoint SeparationDesign::at(double t) const {
    DesignPoint p;
    if (!try_at(t, p)) throw DomainError("mode gap closed: omega_plus^2 <= omega_minus^2");
    return p;
}

SeparationDesign make_design(double coulomb, double t_f, double sep_factor, int order,
                             const std::array<double, 3>& free_params) {
    if (!(coulomb > 0) || !(t_f > 0) || !(sep_factor > 1))
        throw ConfigError("make_design requires coulomb > 0, t_f > 0, sep_factor > 1");
    SeparationDesign d;
    d.coulomb = coulomb;
    d.t_f = t_f;
    d.sep_factor = sep_factor;
    d.order = order;
    d.free_params = free_params;

    d.d0 = std::cbrt(2.0 * coulomb);
    d.d_final = sep_factor * d.d0;
    d.omega_minus0 = 1.0;
    d.omega_plus0 = std::sqrt(3.0);
    const double F3 = sep_factor * sep_factor * sep_factor;
    d.omega_plus_final = std::sqrt(1.0 + 2.0 / F3);
    d.gamma_plus = std::sqrt(d.omega_plus0 / d.omega_plus_final);

    d.rho_m = RhoPolynomial::minimal(1.0);
    switch (order) {
    case 9: d.rho_p = RhoPolynomial::minimal(d.gamma_plus); break;
    case 11: d.rho_p = RhoPolynomial::order11(d.gamma_plus, free_params[0], free_params[1]); break;
    case 12:
        d.rho_p = RhoPolynomial::order12(d.gamma_plus, free_params[0], free_params[1],
                                         free_params[2]);
        break;
    default: throw ConfigError("ansatz order must be 9, 11 or 12");
    }
    return d;
}

} // namespace ionsplit
