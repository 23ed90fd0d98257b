#include "ionsplit/quantum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ionsplit/errors.hpp"

namespace ionsplit {

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// FFT-friendly size 2^a * 3^b * 5^c
int next_fast_size(int n) {
    for (int s = std::max(n, 16);; ++s) {
        int m = s;
        for (int f : {2, 3, 5})
            while (m % f == 0) m /= f;
        if (m == 1) return s;
    }
}

} // namespace

double GridWavefunction::norm_sq() const {
    long double acc = 0;
    for (const auto& c : amp) acc += std::norm(c);
    return static_cast<double>(acc) * grid.dQ() * grid.dr();
}

void GridWavefunction::normalize() {
    const double n = norm_sq();
    if (!(n > 0)) throw DomainError("cannot normalize a null state");
    const double s = 1.0 / std::sqrt(n);
    for (auto& c : amp) c *= s;
}

double GridWavefunction::boundary_fraction() const {
    const int nQ = grid.n_Q, nr = grid.n_r;
    double edge = 0, peak = 0;
    for (int i = 0; i < nQ; ++i)
        for (int j = 0; j < nr; ++j) {
            const double a = std::norm(amp[static_cast<std::size_t>(i) * nr + j]);
            peak = std::max(peak, a);
            if (i == 0 || i == nQ - 1 || j == 0 || j == nr - 1) edge = std::max(edge, a);
        }
    return peak > 0 ? std::sqrt(edge / peak) : 0.0;
}

GridSpec suggest_grid(const Waveform& wf, double lambda, int nq_override,
                      int nr_override) {
    const WaveformScan scan = scan_waveform(wf);
    constexpr double mu = 0.5;

    GridSpec g;
    g.r_min = 0.4 * scan.d_min;
    g.r_max = scan.d_max + std::max(40.0, 0.05 * scan.d_max);
    // Peak relative momentum of the moving packet plus width and safety.
    const double p_need = 1.2 * mu * scan.d_dot_absmax + 10.0;
    const double dr_target = M_PI / p_need;
    g.n_r = nr_override > 0
                ? nr_override
                : next_fast_size(static_cast<int>(std::ceil((g.r_max - g.r_min) / dr_target)));

    const double q_half = 6.0 + 2.0 * std::abs(lambda);
    g.Q_min = -q_half;
    g.Q_max = q_half;
    g.n_Q = nq_override > 0
                ? nq_override
                : next_fast_size(static_cast<int>(std::ceil(2.0 * q_half / (M_PI / 10.0))));
    return g;
}

GridSpec refine_grid(const GridSpec& g, int factor) {
    GridSpec r = g;
    r.n_Q *= factor;
    r.n_r *= factor;
    return r;
}

int suggest_steps(double duration, double omega_max, double phase_cap, int min_steps) {
    const int n = static_cast<int>(std::ceil(duration * omega_max / phase_cap));
    return std::max(n, min_steps);
}

GridWavefunction gaussian_packet(const GridSpec& grid, double Q0, double r0,
                                 double sigma_Q, double sigma_r) {
    GridWavefunction psi;
    psi.grid = grid;
    psi.amp.resize(grid.points());
    for (int i = 0; i < grid.n_Q; ++i) {
        const double uq = (grid.Q(i) - Q0) / sigma_Q;
        for (int j = 0; j < grid.n_r; ++j) {
            const double ur = (grid.r(j) - r0) / sigma_r;
            psi.amp[static_cast<std::size_t>(i) * grid.n_r + j] =
                std::exp(-0.25 * (uq * uq + ur * ur));
        }
    }
    psi.normalize();
    return psi;
}

struct SplitOperator::Impl {
    GridSpec g;
    double coulomb, mass;
    std::size_t n = 0;

    fftw_complex* buf = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd{}, inv{};

    std::vector<double> q, q2, q4, r, r2, r4, invr; // axis samples
    std::vector<double> tQ, tr;                     // kinetic energies per axis mode
    std::vector<std::complex<double>> kq_phase, kr_phase;
    double kin_dt = 0;
    std::vector<double> vq_a, vr_a, vq_b, vr_b, crow;

    Impl(const GridSpec& grid, double c, double m) : g(grid), coulomb(c), mass(m) {
        if (g.n_Q < 2 || g.n_r < 2 || !(g.r_min > 0) || !(g.r_max > g.r_min) ||
            !(g.Q_max > g.Q_min))
            throw ConfigError("invalid grid: need n >= 2 per axis and 0 < r_min < r_max");
        n = g.points();
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            buf = fftw_alloc_complex(n);
            spec = fftw_alloc_complex(n);
            fwd = fftw_plan_dft_2d(g.n_Q, g.n_r, buf, spec, FFTW_FORWARD, FFTW_ESTIMATE);
            inv = fftw_plan_dft_2d(g.n_Q, g.n_r, spec, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        const double M = 2.0 * mass, mu = 0.5 * mass;
        q.resize(g.n_Q); q2.resize(g.n_Q); q4.resize(g.n_Q); tQ.resize(g.n_Q);
        r.resize(g.n_r); r2.resize(g.n_r); r4.resize(g.n_r); invr.resize(g.n_r);
        tr.resize(g.n_r);
        const double LQ = g.Q_max - g.Q_min, Lr = g.r_max - g.r_min;
        for (int i = 0; i < g.n_Q; ++i) {
            q[i] = g.Q(i);
            q2[i] = q[i] * q[i];
            q4[i] = q2[i] * q2[i];
            const int f = (i <= g.n_Q / 2) ? i : i - g.n_Q;
            const double k = 2.0 * M_PI * f / LQ;
            tQ[i] = k * k / (2.0 * M);
        }
        for (int j = 0; j < g.n_r; ++j) {
            r[j] = g.r(j);
            r2[j] = r[j] * r[j];
            r4[j] = r2[j] * r2[j];
            invr[j] = 1.0 / r[j];
            const int f = (j <= g.n_r / 2) ? j : j - g.n_r;
            const double k = 2.0 * M_PI * f / Lr;
            tr[j] = k * k / (2.0 * mu);
        }
        kq_phase.resize(g.n_Q);
        kr_phase.resize(g.n_r);
        vq_a.resize(g.n_Q); vq_b.resize(g.n_Q);
        vr_a.resize(g.n_r); vr_b.resize(g.n_r);
        crow.resize(g.n_r);
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(buf);
        fftw_free(spec);
    }

    void load(const GridWavefunction& psi) {
        for (std::size_t k = 0; k < n; ++k) {
            buf[k][0] = psi.amp[k].real();
            buf[k][1] = psi.amp[k].imag();
        }
    }

    void unload(GridWavefunction& psi) const {
        for (std::size_t k = 0; k < n; ++k) psi.amp[k] = {buf[k][0], buf[k][1]};
    }

    // Potential on axes: V = vq(Q) + vr(r) + 3*beta*Q^2 r^2
    void pot_axes(const PotentialParams& p, std::vector<double>& vq,
                  std::vector<double>& vr) const {
        for (int i = 0; i < g.n_Q; ++i)
            vq[i] = 2.0 * p.alpha * q2[i] + 2.0 * p.beta * q4[i] + 2.0 * p.lambda * q[i];
        for (int j = 0; j < g.n_r; ++j)
            vr[j] = 0.5 * p.alpha * r2[j] + 0.125 * p.beta * r4[j] + coulomb * invr[j];
    }

    // Multiply the state by exp(-i * factor * (V_A + V_B)) up to a global phase.
    void apply_potential(const PotentialParams& pa, const PotentialParams& pb,
                         double factor) {
        pot_axes(pa, vq_a, vr_a);
        pot_axes(pb, vq_b, vr_b);
        const double cx = 3.0 * (pa.beta + pb.beta);
        double ref_q = vq_a[0] + vq_b[0], ref_r = vr_a[0] + vr_b[0];
        for (int i = 0; i < g.n_Q; ++i) ref_q = std::min(ref_q, vq_a[i] + vq_b[i]);
        for (int j = 0; j < g.n_r; ++j) ref_r = std::min(ref_r, vr_a[j] + vr_b[j]);
        for (int j = 0; j < g.n_r; ++j) crow[j] = -factor * (vr_a[j] + vr_b[j] - ref_r);
        for (int i = 0; i < g.n_Q; ++i) {
            const double base = -factor * (vq_a[i] + vq_b[i] - ref_q);
            const double cxi = -factor * cx * q2[i];
            fftw_complex* row = buf + static_cast<std::size_t>(i) * g.n_r;
            for (int j = 0; j < g.n_r; ++j) {
                const double w = base + crow[j] + cxi * r2[j];
                const double c = std::cos(w), s = std::sin(w);
                const double re = row[j][0], im = row[j][1];
                row[j][0] = re * c - im * s;
                row[j][1] = re * s + im * c;
            }
        }
    }

    void build_kinetic_phase(double dt) {
        if (dt == kin_dt) return;
        kin_dt = dt;
        const double scale = 1.0 / static_cast<double>(n);
        for (int i = 0; i < g.n_Q; ++i)
            kq_phase[i] = std::polar(1.0, -dt * tQ[i]);
        for (int j = 0; j < g.n_r; ++j)
            kr_phase[j] = std::polar(scale, -dt * tr[j]);
    }

    void apply_kinetic() {
        fftw_execute(fwd);
        for (int i = 0; i < g.n_Q; ++i) {
            const std::complex<double> ci = kq_phase[i];
            fftw_complex* row = spec + static_cast<std::size_t>(i) * g.n_r;
            for (int j = 0; j < g.n_r; ++j) {
                const std::complex<double> f = ci * kr_phase[j];
                const double re = row[j][0], im = row[j][1];
                row[j][0] = re * f.real() - im * f.imag();
                row[j][1] = re * f.imag() + im * f.real();
            }
        }
        fftw_execute(inv);
    }

    double buf_norm_sq() const {
        long double acc = 0;
        for (std::size_t k = 0; k < n; ++k)
            acc += buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1];
        return static_cast<double>(acc) * g.dQ() * g.dr();
    }

    void scale_buf(double s) {
        for (std::size_t k = 0; k < n; ++k) {
            buf[k][0] *= s;
            buf[k][1] *= s;
        }
    }

    double buf_boundary_fraction() const {
        double edge = 0, peak = 0;
        for (int i = 0; i < g.n_Q; ++i)
            for (int j = 0; j < g.n_r; ++j) {
                const std::size_t k = static_cast<std::size_t>(i) * g.n_r + j;
                const double a = buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1];
                peak = std::max(peak, a);
                if (i == 0 || i == g.n_Q - 1 || j == 0 || j == g.n_r - 1)
                    edge = std::max(edge, a);
            }
        return peak > 0 ? std::sqrt(edge / peak) : 0.0;
    }

    // <T> + <V> of the buffer state; leaves the buffer intact.
    double buf_energy(const PotentialParams& p) {
        pot_axes(p, vq_a, vr_a);
        const double cx = 3.0 * p.beta;
        long double vsum = 0, nsum = 0;
        for (int i = 0; i < g.n_Q; ++i) {
            const fftw_complex* row = buf + static_cast<std::size_t>(i) * g.n_r;
            for (int j = 0; j < g.n_r; ++j) {
                const double w = row[j][0] * row[j][0] + row[j][1] * row[j][1];
                vsum += w * (vq_a[i] + vr_a[j] + cx * q2[i] * r2[j]);
                nsum += w;
            }
        }
        fftw_execute(fwd);
        long double tsum = 0, ksum = 0;
        for (int i = 0; i < g.n_Q; ++i) {
            const fftw_complex* row = spec + static_cast<std::size_t>(i) * g.n_r;
            for (int j = 0; j < g.n_r; ++j) {
                const double w = row[j][0] * row[j][0] + row[j][1] * row[j][1];
                tsum += w * (tQ[i] + tr[j]);
                ksum += w;
            }
        }
        if (!(nsum > 0)) throw DomainError("energy of a null state");
        return static_cast<double>(vsum / nsum) + static_cast<double>(tsum / ksum);
    }
};

SplitOperator::SplitOperator(const GridSpec& grid, double coulomb, double mass)
    : impl_(new Impl(grid, coulomb, mass)), grid_(grid) {}

SplitOperator::~SplitOperator() { delete impl_; }

SplitOperator::RunStats SplitOperator::propagate(GridWavefunction& psi,
                                                 const ControlFunction& control, double t0,
                                                 double t1, int n_steps) {
    if (n_steps < 1) throw ConfigError("propagation needs at least one step");
    if (psi.grid.points() != impl_->n) throw ConfigError("state grid does not match engine");
    const double dt = (t1 - t0) / n_steps;
    impl_->load(psi);
    impl_->build_kinetic_phase(dt);

    RunStats stats;
    stats.steps = n_steps;
    const double norm0 = impl_->buf_norm_sq();

    PotentialParams cur = control(t0 + 0.5 * dt);
    impl_->apply_potential(cur, cur, 0.25 * dt);
    for (int k = 0; k < n_steps; ++k) {
        impl_->apply_kinetic();
        if (k + 1 < n_steps) {
            const PotentialParams next = control(t0 + (k + 1.5) * dt);
            impl_->apply_potential(cur, next, 0.5 * dt);
            cur = next;
        } else {
            impl_->apply_potential(cur, cur, 0.25 * dt);
        }
        if ((k & 31) == 31 || k + 1 == n_steps) {
            stats.norm_drift = std::max(
                stats.norm_drift, std::abs(impl_->buf_norm_sq() / norm0 - 1.0));
            stats.boundary_frac =
                std::max(stats.boundary_frac, impl_->buf_boundary_fraction());
        }
    }
    impl_->unload(psi);
    psi.t = t1;
    return stats;
}

SplitOperator::GroundResult SplitOperator::relax_to_ground(GridWavefunction& psi,
                                                           const PotentialParams& params,
                                                           double dtau, double tol_per_step,
                                                           int max_steps) {
    if (psi.grid.points() != impl_->n) throw ConfigError("state grid does not match engine");
    auto& im = *impl_;
    im.load(psi);

    // Static potential: precompute true 2D weights (gauged to the grid minimum).
    im.pot_axes(params, im.vq_a, im.vr_a);
    const double cx = 3.0 * params.beta;
    std::vector<double> v(im.n);
    double vmin = 0;
    bool first = true;
    for (int i = 0; i < im.g.n_Q; ++i)
        for (int j = 0; j < im.g.n_r; ++j) {
            const double val = im.vq_a[i] + im.vr_a[j] + cx * im.q2[i] * im.r2[j];
            v[static_cast<std::size_t>(i) * im.g.n_r + j] = val;
            if (first || val < vmin) { vmin = val; first = false; }
        }
    std::vector<double> whalf(im.n), wfull(im.n);
    for (std::size_t k = 0; k < im.n; ++k) {
        whalf[k] = std::exp(-0.5 * dtau * (v[k] - vmin));
        wfull[k] = whalf[k] * whalf[k];
    }
    std::vector<double> gq(im.g.n_Q), gr(im.g.n_r);
    const double scale = 1.0 / static_cast<double>(im.n);
    for (int i = 0; i < im.g.n_Q; ++i) gq[i] = std::exp(-dtau * im.tQ[i]);
    for (int j = 0; j < im.g.n_r; ++j) gr[j] = scale * std::exp(-dtau * im.tr[j]);

    auto weight = [&](const std::vector<double>& w) {
        for (std::size_t k = 0; k < im.n; ++k) {
            im.buf[k][0] *= w[k];
            im.buf[k][1] *= w[k];
        }
    };
    auto kin = [&] {
        fftw_execute(im.fwd);
        for (int i = 0; i < im.g.n_Q; ++i) {
            fftw_complex* row = im.spec + static_cast<std::size_t>(i) * im.g.n_r;
            for (int j = 0; j < im.g.n_r; ++j) {
                const double f = gq[i] * gr[j];
                row[j][0] *= f;
                row[j][1] *= f;
            }
        }
        fftw_execute(im.inv);
    };
    auto renorm = [&] {
        const double nn = im.buf_norm_sq();
        if (!(nn > 0)) throw ConvergenceError("imaginary-time state vanished");
        im.scale_buf(1.0 / std::sqrt(nn));
    };

    GroundResult res;
    constexpr int check_every = 8;
    double e_prev = im.buf_energy(params);
    weight(whalf);
    int step = 0;
    for (; step < max_steps; ++step) {
        kin();
        if ((step + 1) % check_every == 0) {
            weight(whalf);
            renorm();
            const double e = im.buf_energy(params);
            if (std::abs(e_prev - e) < tol_per_step * check_every) {
                res.converged = true;
                res.energy = e;
                ++step;
                break;
            }
            e_prev = e;
            weight(whalf);
        } else {
            weight(wfull);
            renorm();
        }
    }
    if (!res.converged) {
        weight(whalf);
        renorm();
        res.energy = im.buf_energy(params);
    }
    res.steps = step;
    renorm();
    im.unload(psi);
    return res;
}

double SplitOperator::energy(const GridWavefunction& psi, const PotentialParams& params) {
    if (psi.grid.points() != impl_->n) throw ConfigError("state grid does not match engine");
    impl_->load(psi);
    return impl_->buf_energy(params);
}

GridWavefunction ground_state_embedded(const GridSpec& grid, const PotentialParams& params,
                                       double coulomb, double Q0, double r0,
                                       double sigma_Q, double sigma_r, int polish_steps) {
    const double dr = grid.dr();
    int n_sub = next_fast_size(static_cast<int>(std::ceil(28.0 * sigma_r / dr)));
    n_sub = std::min(n_sub, grid.n_r);
    int j0 = static_cast<int>(std::lround((r0 - grid.r_min) / dr)) - n_sub / 2;
    j0 = std::clamp(j0, 0, grid.n_r - n_sub);

    GridSpec sub = grid;
    sub.n_r = n_sub;
    sub.r_min = grid.r_min + j0 * dr;
    sub.r_max = sub.r_min + n_sub * dr;

    SplitOperator op(sub, coulomb);
    GridWavefunction seed = gaussian_packet(sub, Q0, r0, sigma_Q, sigma_r);
    // Coarse approach, then a fine step to shrink the splitting bias.
    op.relax_to_ground(seed, params, 0.05, 1e-9, 20000);
    const auto ground = op.relax_to_ground(seed, params, 0.01, 1e-11, 20000);
    if (!ground.converged)
        throw ConvergenceError("imaginary-time relaxation did not plateau");

    GridWavefunction out;
    out.grid = grid;
    out.amp.assign(grid.points(), {0.0, 0.0});
    for (int i = 0; i < grid.n_Q; ++i)
        for (int j = 0; j < n_sub; ++j)
            out.amp[static_cast<std::size_t>(i) * grid.n_r + j0 + j] =
                seed.amp[static_cast<std::size_t>(i) * n_sub + j];
    out.normalize();

    if (polish_steps > 0) {
        SplitOperator big(grid, coulomb);
        big.relax_to_ground(out, params, 0.05, 0.0, polish_steps);
        out.normalize();
    }
    return out;
}

GridWavefunction raise_stretch(const GridWavefunction& ground, double r_center,
                               double mode_omega, double mass_reduced) {
    const auto& g = ground.grid;
    const double dr = g.dr();
    const double a = std::sqrt(0.5 * mass_reduced * mode_omega);
    const double b = 1.0 / std::sqrt(2.0 * mass_reduced * mode_omega);

    GridWavefunction out;
    out.grid = g;
    out.t = ground.t;
    out.amp.assign(g.points(), {0.0, 0.0});
    for (int i = 0; i < g.n_Q; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * g.n_r;
        for (int j = 2; j + 2 < g.n_r; ++j) {
            const auto d = (-ground.amp[row + j + 2] + 8.0 * ground.amp[row + j + 1] -
                            8.0 * ground.amp[row + j - 1] + ground.amp[row + j - 2]) /
                           (12.0 * dr);
            out.amp[row + j] = a * (g.r(j) - r_center) * ground.amp[row + j] - b * d;
        }
    }
    out.normalize();
    return out;
}

ExcitationReport quantum_excitation(double energy_final, double energy_ground) {
    ExcitationReport rep;
    rep.method = "quantum";
    rep.energy_final = energy_final;
    rep.energy_reference = energy_ground;
    rep.excitation_quanta = energy_final - energy_ground;
    return rep;
}

Marginals marginals(const GridWavefunction& psi) {
    const auto& g = psi.grid;
    Marginals m;
    m.Q.resize(g.n_Q);
    m.density_Q.assign(g.n_Q, 0.0);
    m.r.resize(g.n_r);
    m.density_r.assign(g.n_r, 0.0);
    for (int i = 0; i < g.n_Q; ++i) m.Q[i] = g.Q(i);
    for (int j = 0; j < g.n_r; ++j) m.r[j] = g.r(j);
    for (int i = 0; i < g.n_Q; ++i)
        for (int j = 0; j < g.n_r; ++j) {
            const double w = std::norm(psi.amp[static_cast<std::size_t>(i) * g.n_r + j]);
            m.density_Q[i] += w * g.dr();
            m.density_r[j] += w * g.dQ();
        }
    return m;
}

} // namespace ionsplit
