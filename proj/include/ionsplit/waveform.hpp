#pragma once

#include <cstddef>
#include <vector>

#include "ionsplit/potential.hpp"

namespace ionsplit {

struct SeparationDesign;

// Uniformly sampled control waveform in trap units. Columns share the index.
// omega_*_sq columns keep the sign of the squared frequency; exporters emit
// sign(w2)*sqrt(|w2|) so transiently inverted curvatures stay visible.
struct Waveform {
    double coulomb = 0;
    double t_f = 0;
    std::vector<double> t, alpha, beta, d, d_dot, d_ddot, alpha_dot, beta_dot,
        omega_minus_sq, omega_plus_sq;

    std::size_t size() const { return t.size(); }
};

Waveform sample_design(const SeparationDesign& design, std::size_t n_samples);

// Extremes the experiment drivers need for sizing and hardware-bound tables.
struct WaveformScan {
    double beta_max = 0, t_beta_max = 0;
    double d_min = 0, d_max = 0;
    double d_dot_absmax = 0;
    double omega_sq_absmax = 0;
};

WaveformScan scan_waveform(const Waveform& wf);

// Cubic Hermite interpolation of the control columns between samples.
class WaveformInterp {
public:
    explicit WaveformInterp(const Waveform& wf);

    PotentialParams params_at(double t) const; // lambda = 0; callers add bias
    double d_at(double t) const;
    double coulomb() const { return wf_->coulomb; }
    double t_f() const { return wf_->t_f; }

private:
    const Waveform* wf_;
    double h_;
};

} // namespace ionsplit
