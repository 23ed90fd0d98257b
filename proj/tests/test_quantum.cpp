#include <doctest.h>

#include <cmath>
#include <complex>

#include "ionsplit/ansatz.hpp"
#include "ionsplit/experiments.hpp"
#include "ionsplit/potential.hpp"
#include "ionsplit/quantum.hpp"
#include "ionsplit/waveform.hpp"

using namespace ionsplit;

namespace {

constexpr double kCoulomb = 7.3516e6;
const double kD0 = std::cbrt(2 * kCoulomb);

GridSpec small_grid() {
    GridSpec g;
    g.n_Q = 48;
    g.Q_min = -4.5;
    g.Q_max = 4.5;
    g.n_r = 192;
    g.r_min = kD0 - 12.0;
    g.r_max = kD0 + 12.0;
    return g;
}

ControlFunction frozen(const PotentialParams& p) {
    return [p](double) { return p; };
}

std::complex<double> overlap(const GridWavefunction& a, const GridWavefunction& b) {
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc * a.grid.dQ() * a.grid.dr();
}

} // namespace

TEST_CASE("relaxed ground state hits the harmonic two-mode energy") {
    const PotentialParams p{0.5, 0.0, 0.0};
    const GridSpec g = small_grid();
    const GridWavefunction ground =
        ground_state_embedded(g, p, kCoulomb, 0.0, kD0, 0.5, 0.8);

    SplitOperator op(g, kCoulomb);
    const double e = op.energy(ground, p);
    const double v_min = potential_energy(p, kCoulomb, kD0 / 2, -kD0 / 2);
    const double e_harm = v_min + 0.5 + 0.5 * std::sqrt(3.0);
    CHECK(std::abs(e - e_harm) < 5e-3);

    // the COM marginal of the ground state has width 1/(2 M omega_Q) = 1/4
    const Marginals m = marginals(ground);
    double mean = 0, m2 = 0, norm = 0;
    for (std::size_t i = 0; i < m.Q.size(); ++i) {
        norm += m.density_Q[i];
        mean += m.Q[i] * m.density_Q[i];
        m2 += m.Q[i] * m.Q[i] * m.density_Q[i];
    }
    mean /= norm;
    m2 = m2 / norm - mean * mean;
    CHECK(std::abs(mean) < 1e-6);
    CHECK(m2 == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("tilting the trap shifts the ground energy by -lambda^2/(2 alpha)") {
    // beta = 0 keeps the COM axis exactly harmonic, so the tilt shift is exact
    const GridSpec g = small_grid();
    const PotentialParams flat{0.5, 0.0, 0.0};
    const PotentialParams tilted{0.5, 0.0, 2.0};

    const GridWavefunction g0 = ground_state_embedded(g, flat, kCoulomb, 0.0, kD0, 0.5, 0.8);
    const GridWavefunction g1 =
        ground_state_embedded(g, tilted, kCoulomb, -2.0, kD0, 0.5, 0.8);

    SplitOperator op(g, kCoulomb);
    const double shift = op.energy(g1, tilted) - op.energy(g0, flat);
    CHECK(shift == doctest::Approx(-2.0 * 2.0 / (2 * 0.5)).epsilon(2e-3));
}

TEST_CASE("norm is conserved to 1e-10 over 1e4 steps") {
    const GridSpec g = small_grid();
    const PotentialParams p{0.5, 0.0, 0.0};
    GridWavefunction psi = gaussian_packet(g, 0.5, kD0 + 0.8, 0.5, 0.76);

    SplitOperator op(g, kCoulomb);
    const auto stats = op.propagate(psi, frozen(p), 0.0, 50.0, 10000);
    CHECK(stats.steps == 10000);
    CHECK(stats.norm_drift < 1e-10);
    CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-10);
    CHECK(stats.boundary_frac < 1e-6);
}

TEST_CASE("frozen-trap energy is conserved to 1e-8 relative") {
    const GridSpec g = small_grid();
    const PotentialParams p{0.5, 0.0, 0.0};
    GridWavefunction psi = gaussian_packet(g, 1.0, kD0 + 0.8, 0.5, 0.76);

    SplitOperator op(g, kCoulomb);
    const double e0 = op.energy(psi, p);
    op.propagate(psi, frozen(p), 0.0, 5.0, 1000); // dt = 0.005
    const double e1 = op.energy(psi, p);
    op.propagate(psi, frozen(p), 5.0, 10.0, 1000);
    const double e2 = op.energy(psi, p);
    CHECK(std::abs(e1 - e0) < 1e-8 * std::abs(e0));
    CHECK(std::abs(e2 - e0) < 1e-8 * std::abs(e0));
}

TEST_CASE("raising the stretch mode adds one quantum of omega_plus") {
    const GridSpec g = small_grid();
    const PotentialParams p{0.5, 0.0, 0.0};
    const GridWavefunction ground =
        ground_state_embedded(g, p, kCoulomb, 0.0, kD0, 0.5, 0.8);
    const GridWavefunction excited = raise_stretch(ground, kD0, std::sqrt(3.0));

    SplitOperator op(g, kCoulomb);
    const double gap = op.energy(excited, p) - op.energy(ground, p);
    CHECK(gap == doctest::Approx(std::sqrt(3.0)).epsilon(0.02));
    CHECK(std::abs(excited.norm_sq() - 1.0) < 1e-9);
    CHECK(std::abs(overlap(ground, excited)) < 0.02);
}

TEST_CASE("gaussian packet: normalization, centers, widths") {
    const GridSpec g = small_grid();
    const GridWavefunction psi = gaussian_packet(g, 0.7, kD0 - 1.0, 0.4, 0.9);
    CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-12);

    const Marginals m = marginals(psi);
    double meanQ = 0, varQ = 0, meanr = 0, varr = 0;
    for (std::size_t i = 0; i < m.Q.size(); ++i) {
        meanQ += m.Q[i] * m.density_Q[i] * g.dQ();
        varQ += m.Q[i] * m.Q[i] * m.density_Q[i] * g.dQ();
    }
    for (std::size_t j = 0; j < m.r.size(); ++j) {
        meanr += m.r[j] * m.density_r[j] * g.dr();
        varr += m.r[j] * m.r[j] * m.density_r[j] * g.dr();
    }
    varQ -= meanQ * meanQ;
    varr -= meanr * meanr;
    CHECK(meanQ == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(meanr == doctest::Approx(kD0 - 1.0).epsilon(1e-8));
    CHECK(varQ == doctest::Approx(0.4 * 0.4).epsilon(1e-6));
    CHECK(varr == doctest::Approx(0.9 * 0.9).epsilon(1e-6));
}

TEST_CASE("boundary_fraction flags packets near the grid edge") {
    const GridSpec g = small_grid();
    const GridWavefunction centered = gaussian_packet(g, 0.0, kD0, 0.4, 0.8);
    const GridWavefunction edged = gaussian_packet(g, 0.0, g.r_max - 1.0, 0.4, 0.8);
    CHECK(centered.boundary_fraction() < 1e-10);
    CHECK(edged.boundary_fraction() > 1e-2);
}

TEST_CASE("suggested grid and steps cover the waveform") {
    const auto design = make_design(kCoulomb, 40.0, 10.0, 9, {});
    const Waveform wf = sample_design(design, 801);
    const WaveformScan scan = scan_waveform(wf);

    const GridSpec g = suggest_grid(wf, 0.0);
    CHECK(g.r_min > 0);
    CHECK(g.r_min < scan.d_min);
    CHECK(g.r_max > scan.d_max);
    // momentum headroom: the Nyquist momentum exceeds the packet drift momentum
    const double p_drift = 0.5 * scan.d_dot_absmax; // reduced mass 1/2
    CHECK(3.14159265 / g.dr() > p_drift);
    CHECK(g.n_Q >= 16);
    CHECK((g.n_Q & 1) == 0);
    CHECK((g.n_r & 1) == 0);

    const GridSpec fine = refine_grid(g, 2);
    CHECK(fine.n_Q == 2 * g.n_Q);
    CHECK(fine.n_r == 2 * g.n_r);
    CHECK(fine.Q_min == g.Q_min);
    CHECK(fine.r_max == g.r_max);

    const int n = suggest_steps(40.0, std::sqrt(scan.omega_sq_absmax), 0.04);
    CHECK(n >= 400);
    CHECK(40.0 * std::sqrt(scan.omega_sq_absmax) / n <= 0.04 * 1.0001);

    // tilt widens the COM window
    const GridSpec tilted = suggest_grid(wf, 5.0);
    CHECK(tilted.Q_max - tilted.Q_min > g.Q_max - g.Q_min);
}

TEST_CASE("simulated excitation is stable under grid refinement") {
    // cheap protocol: modest separation factor, fast ramp, no optimization
    const double t_f = 12.566; // 1 us at 2 MHz
    const auto design = make_design(kCoulomb, t_f, 1.5, 9, {});
    const Waveform wf = sample_design(design, 1201);

    const QuantumRunResult base = simulate_quantum_waveform(wf, 0.0, {});
    QuantumRunOptions fine;
    fine.nq = 2 * base.grid.n_Q;
    fine.nr = 2 * base.grid.n_r;
    fine.steps = 2 * base.steps;
    const QuantumRunResult refined = simulate_quantum_waveform(wf, 0.0, fine);

    const double e1 = base.report.excitation_quanta;
    const double e2 = refined.report.excitation_quanta;
    CHECK(std::abs(e1 - e2) < 0.02 * std::abs(e2) + 1e-3);
    CHECK(base.stats.norm_drift < 1e-9);
    CHECK(base.stats.boundary_frac < 1e-4);
}
