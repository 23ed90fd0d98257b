#pragma once

#include <complex>
#include <vector>

#include "ionsplit/classical.hpp"
#include "ionsplit/waveform.hpp"

namespace ionsplit {

// Uniform periodic FFT grid in center-of-mass Q and relative r coordinates.
// Points sit at min + k*step; the max edge is the periodic image (excluded).
// r_min > 0 enforces the q1 > q2 ordering.
struct GridSpec {
    int n_Q = 0, n_r = 0;
    double Q_min = 0, Q_max = 0;
    double r_min = 0, r_max = 0;

    double dQ() const { return (Q_max - Q_min) / n_Q; }
    double dr() const { return (r_max - r_min) / n_r; }
    double Q(int i) const { return Q_min + i * dQ(); }
    double r(int j) const { return r_min + j * dr(); }
    std::size_t points() const { return static_cast<std::size_t>(n_Q) * n_r; }
};

struct GridWavefunction {
    GridSpec grid;
    std::vector<std::complex<double>> amp; // row-major [iQ * n_r + ir]
    double t = 0;

    double norm_sq() const;
    void normalize();
    // max |amp| on the grid edges over max |amp| overall (leakage monitor)
    double boundary_fraction() const;
};

// Grid sized from the waveform's geometry: r window follows the d(t) range,
// dr from the peak packet momentum mu*max|d_dot|, Q window from the COM width
// plus any tilt-induced displacement.
GridSpec suggest_grid(const Waveform& wf, double lambda, int nq_override = 0,
                      int nr_override = 0);
GridSpec refine_grid(const GridSpec& g, int factor); // same windows, denser axes

// Step count from the phase-resolution condition dt * Omega_max <= phase_cap.
int suggest_steps(double duration, double omega_max, double phase_cap = 0.04,
                  int min_steps = 400);

GridWavefunction gaussian_packet(const GridSpec& grid, double Q0, double r0,
                                 double sigma_Q, double sigma_r);

// Strang split-operator engine for H = P_Q^2/(2*2m) + p_r^2/(2*m/2) + V(Q,r).
// Owns FFTW plans and aligned buffers; not copyable.
class SplitOperator {
public:
    explicit SplitOperator(const GridSpec& grid, double coulomb, double mass = 1.0);
    ~SplitOperator();
    SplitOperator(const SplitOperator&) = delete;
    SplitOperator& operator=(const SplitOperator&) = delete;

    struct RunStats {
        double norm_drift = 0;       // max |norm-1| observed
        double boundary_frac = 0;    // max edge amplitude fraction observed
        int steps = 0;
    };

    // Real-time propagation from t0 to t1. Potential evaluated at interval
    // midpoints; adjacent half-steps merged into one exponential per step.
    RunStats propagate(GridWavefunction& psi, const ControlFunction& control, double t0,
                       double t1, int n_steps);

    struct GroundResult {
        double energy = 0;
        int steps = 0;
        bool converged = false;
    };

    // Imaginary-time relaxation with per-step renormalization; stops when the
    // energy decrease per step falls below tol_per_step.
    GroundResult relax_to_ground(GridWavefunction& psi, const PotentialParams& params,
                                 double dtau, double tol_per_step, int max_steps);

    double energy(const GridWavefunction& psi, const PotentialParams& params);

    const GridSpec& grid() const { return grid_; }

private:
    struct Impl;
    Impl* impl_;
    GridSpec grid_;
};

// Ground state relaxed on a small aligned subgrid around (Q0, r0), embedded
// into the full grid, then optionally polished there.
GridWavefunction ground_state_embedded(const GridSpec& grid, const PotentialParams& params,
                                       double coulomb, double Q0, double r0,
                                       double sigma_Q, double sigma_r,
                                       int polish_steps = 0);

// One stretch-mode raising operation applied to a localized state.
GridWavefunction raise_stretch(const GridWavefunction& ground, double r_center,
                               double mode_omega, double mass_reduced = 0.5);

ExcitationReport quantum_excitation(double energy_final, double energy_ground);

struct Marginals {
    std::vector<double> Q, density_Q, r, density_r;
};
Marginals marginals(const GridWavefunction& psi);

} // namespace ionsplit
