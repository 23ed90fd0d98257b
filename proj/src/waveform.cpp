#include "ionsplit/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "ionsplit/ansatz.hpp"
#include "ionsplit/errors.hpp"

namespace ionsplit {

Waveform sample_design(const SeparationDesign& design, std::size_t n_samples) {
    if (n_samples < 2) throw ConfigError("sample_design requires n_samples >= 2");
    Waveform wf;
    wf.coulomb = design.coulomb;
    wf.t_f = design.t_f;
    const std::size_t n = n_samples;
    for (auto* col : {&wf.t, &wf.alpha, &wf.beta, &wf.d, &wf.d_dot, &wf.d_ddot,
                      &wf.alpha_dot, &wf.beta_dot, &wf.omega_minus_sq, &wf.omega_plus_sq})
        col->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = design.t_f * static_cast<double>(i) / static_cast<double>(n - 1);
        const DesignPoint p = design.at(t);
        wf.t[i] = t;
        wf.alpha[i] = p.alpha;
        wf.beta[i] = p.beta;
        wf.d[i] = p.d;
        wf.d_dot[i] = p.d_dot;
        wf.d_ddot[i] = p.d_ddot;
        wf.alpha_dot[i] = p.alpha_dot;
        wf.beta_dot[i] = p.beta_dot;
        wf.omega_minus_sq[i] = p.omega_minus_sq;
        wf.omega_plus_sq[i] = p.omega_plus_sq;
    }
    return wf;
}

WaveformScan scan_waveform(const Waveform& wf) {
    if (wf.size() < 3) throw ConfigError("scan_waveform requires at least 3 samples");
    WaveformScan s;
    std::size_t k_beta = 0;
    s.beta_max = wf.beta[0];
    s.d_min = s.d_max = wf.d[0];
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (wf.beta[i] > s.beta_max) { s.beta_max = wf.beta[i]; k_beta = i; }
        s.d_min = std::min(s.d_min, wf.d[i]);
        s.d_max = std::max(s.d_max, wf.d[i]);
        s.d_dot_absmax = std::max(s.d_dot_absmax, std::abs(wf.d_dot[i]));
        s.omega_sq_absmax = std::max({s.omega_sq_absmax, std::abs(wf.omega_minus_sq[i]),
                                      std::abs(wf.omega_plus_sq[i])});
    }
    s.t_beta_max = wf.t[k_beta];
    // Parabolic refinement of the interior peak; samples bound the curvature.
    if (k_beta > 0 && k_beta + 1 < wf.size()) {
        const double ym = wf.beta[k_beta - 1], y0 = wf.beta[k_beta], yp = wf.beta[k_beta + 1];
        const double den = ym - 2.0 * y0 + yp;
        if (den < 0) {
            const double u = 0.5 * (ym - yp) / den;
            const double h = wf.t[k_beta + 1] - wf.t[k_beta];
            s.beta_max = y0 - 0.25 * (ym - yp) * u;
            s.t_beta_max = wf.t[k_beta] + u * h;
        }
    }
    return s;
}

WaveformInterp::WaveformInterp(const Waveform& wf) : wf_(&wf) {
    if (wf.size() < 2) throw ConfigError("interpolation requires at least 2 samples");
    h_ = wf.t[1] - wf.t[0];
    if (!(h_ > 0)) throw ConfigError("waveform samples must increase in time");
}

namespace {

double hermite(const std::vector<double>& y, const std::vector<double>& yd,
               std::size_t k, double u, double h) {
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y[k] + (u3 - 2 * u2 + u) * h * yd[k] +
           (-2 * u3 + 3 * u2) * y[k + 1] + (u3 - u2) * h * yd[k + 1];
}

} // namespace

PotentialParams WaveformInterp::params_at(double t) const {
    const auto& wf = *wf_;
    const double x = std::clamp(t, 0.0, wf.t_f);
    auto k = static_cast<std::size_t>(x / h_);
    k = std::min(k, wf.size() - 2);
    const double u = (x - wf.t[k]) / h_;
    return {hermite(wf.alpha, wf.alpha_dot, k, u, h_),
            hermite(wf.beta, wf.beta_dot, k, u, h_), 0.0};
}

double WaveformInterp::d_at(double t) const {
    const auto& wf = *wf_;
    const double x = std::clamp(t, 0.0, wf.t_f);
    auto k = static_cast<std::size_t>(x / h_);
    k = std::min(k, wf.size() - 2);
    return hermite(wf.d, wf.d_dot, k, (x - wf.t[k]) / h_, h_);
}

} // namespace ionsplit
