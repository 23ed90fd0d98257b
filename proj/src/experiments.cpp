#include "ionsplit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "ionsplit/errors.hpp"
#include "ionsplit/io.hpp"
#include "ionsplit/reference_ramp.hpp"

namespace ionsplit {
namespace {

namespace fs = std::filesystem;

double us_to_internal(const TrapSpec& t, double us) {
    return us * 1e-6 / t.time_scale_s;
}

double internal_to_us(const TrapSpec& t, double ti) {
    return ti * t.time_scale_s * 1e6;
}

double lambda_to_internal(const TrapSpec& t, double lambda_N) {
    return lambda_N / si_factor(t, Unit::force);
}

// Fixed-size worker pool over independent indices; results land in caller-owned
// slots, so the only serialization point is the ordered write after the join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

fs::path ensure_out_dir(const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string emit(const fs::path& dir, const std::string& name, std::string_view content,
                 std::vector<std::string>& files) {
    const std::string path = (dir / name).string();
    io::write_text(path, content);
    files.push_back(path);
    return path;
}

void emit_meta(const fs::path& dir, const std::string& csv_name,
               const ExperimentConfig& cfg, const nlohmann::json& columns,
               std::vector<std::string>& files) {
    nlohmann::json m;
    m["config_hash"] = cfg.config_hash;
    m["species"] = cfg.species;
    m["trap"] = io::trap_json(cfg.trap);
    m["columns"] = columns;
    emit(dir, csv_name + ".meta.json", m.dump(2) + "\n", files);
}

double alpha_zero_us(const Waveform& wf, const TrapSpec& trap) {
    for (std::size_t i = 1; i < wf.size(); ++i) {
        if (wf.alpha[i - 1] > 0 && wf.alpha[i] <= 0) {
            const double frac = wf.alpha[i - 1] / (wf.alpha[i - 1] - wf.alpha[i]);
            return internal_to_us(trap, wf.t[i - 1] + frac * (wf.t[i] - wf.t[i - 1]));
        }
    }
    return -1;
}

SeparationDesign resolve_design(const ExperimentConfig& cfg, TrapSpec& trap,
                                ShootingResult& shooting) {
    trap = cfg.trap;
    if (!cfg.design_path.empty()) {
        const auto j = nlohmann::json::parse(io::read_text(cfg.design_path), nullptr,
                                             true, true);
        SeparationDesign design = io::design_from_json(j, trap);
        const auto bc = integrate_x_plus(design, ShootingOptions{}.ode_steps);
        shooting.design = design;
        shooting.x_plus_final = bc[0];
        shooting.x_plus_dot_final = bc[1];
        shooting.objective = residual_energy(design, bc[0], bc[1]);
        shooting.converged = true;
        return design;
    }
    shooting = shoot(trap.coulomb, us_to_internal(trap, cfg.tf_us), cfg.sep_factor,
                     cfg.order, cfg.objective == "perturbative");
    return shooting.design;
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;
    try {
        if (j.contains("trap")) {
            const auto& t = j.at("trap");
            if (t.contains("mass_kg")) {
                cfg.species = "custom";
                cfg.trap = make_trap_spec(t.at("mass_kg").get<double>(),
                                          t.at("charge_C").get<double>(),
                                          t.at("omega0_hz").get<double>());
            } else {
                cfg.species = t.value("species", std::string("Be9+"));
                cfg.trap = make_trap_spec(cfg.species, t.value("omega0_hz", 2.0e6));
            }
        } else {
            cfg.trap = make_trap_spec(cfg.species, 2.0e6);
        }
        if (j.contains("protocol")) {
            const auto& p = j.at("protocol");
            cfg.tf_us = p.value("t_f_us", cfg.tf_us);
            if (p.contains("t_f_list_us"))
                cfg.tf_list_us = p.at("t_f_list_us").get<std::vector<double>>();
            cfg.order = p.value("order", cfg.order);
            cfg.objective = p.value("objective", cfg.objective);
            cfg.sep_factor = p.value("expansion_factor", cfg.sep_factor);
        }
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            cfg.engine = s.value("engine", cfg.engine);
            cfg.n_samples = s.value("n_samples", cfg.n_samples);
            cfg.classical_steps = s.value("classical_steps", cfg.classical_steps);
            cfg.grid_nq = s.value("grid_nq", 0);
            cfg.grid_nr = s.value("grid_nr", 0);
            cfg.quantum_steps = s.value("steps", 0);
        }
        if (j.contains("bias")) {
            const auto& b = j.at("bias");
            if (b.contains("lambda_N")) {
                if (b.at("lambda_N").is_array())
                    cfg.lambda_list_N = b.at("lambda_N").get<std::vector<double>>();
                else
                    cfg.lambda_N = b.at("lambda_N").get<double>();
            }
            if (b.contains("delta_e_quanta"))
                cfg.delta_e_quanta = b.at("delta_e_quanta").get<std::vector<double>>();
        }
        if (j.contains("sweep") && j.at("sweep").contains("omega0_mhz"))
            cfg.omega0_mhz_list = j.at("sweep").at("omega0_mhz").get<std::vector<double>>();
        if (j.contains("output")) cfg.out_dir = j.at("output").value("dir", cfg.out_dir);
        cfg.design_path = j.value("design_path", cfg.design_path);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }

    if (cfg.order != 9 && cfg.order != 11 && cfg.order != 12)
        throw ConfigError("order must be 9, 11 or 12");
    if (cfg.objective != "plain" && cfg.objective != "perturbative")
        throw ConfigError("objective must be plain or perturbative");
    if (cfg.objective == "perturbative" && cfg.order != 12)
        throw ConfigError("perturbative objective needs the order-12 ansatz");
    if (cfg.engine != "classical" && cfg.engine != "quantum" && cfg.engine != "both")
        throw ConfigError("engine must be classical, quantum or both");
    if (cfg.n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (!(cfg.tf_us > 0)) throw ConfigError("t_f_us must be positive");
    if (!(cfg.sep_factor > 1)) throw ConfigError("expansion_factor must exceed 1");
    if (cfg.classical_steps < 1) throw ConfigError("classical_steps must be positive");

    cfg.config_hash = io::fnv1a_hex(j.dump());
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_text(path), nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
    return config_from_json(j);
}

Waveform design_waveform(const TrapSpec& trap, double tf_us, int order,
                         bool perturbative, double sep_factor, int n_samples,
                         ShootingResult* shooting_out,
                         const std::array<double, 3>* warm_start) {
    const ShootingResult res = shoot(trap.coulomb, us_to_internal(trap, tf_us),
                                     sep_factor, order, perturbative, {}, warm_start);
    if (shooting_out) *shooting_out = res;
    return sample_design(res.design, static_cast<std::size_t>(n_samples));
}

ExcitationReport simulate_classical_waveform(const Waveform& wf, double lambda_internal,
                                             int n_steps) {
    const WaveformInterp interp(wf);
    const ControlFunction control = [&interp, lambda_internal](double t) {
        PotentialParams p = interp.params_at(t);
        p.lambda = lambda_internal;
        return p;
    };
    const ClassicalState init = rest_state(control(0.0), wf.coulomb, wf.d.front());
    ClassicalOptions opt;
    opt.n_steps = n_steps;
    const Trajectory traj = propagate_classical(control, wf.coulomb, wf.t_f, init, opt);
    return classical_excitation(traj.final_state(), control(wf.t_f), wf.coulomb,
                                wf.d.back());
}

QuantumRunResult simulate_quantum_waveform(const Waveform& wf, double lambda_internal,
                                           const QuantumRunOptions& opt) {
    QuantumRunResult out;
    const WaveformScan scan = scan_waveform(wf);
    out.grid = suggest_grid(wf, lambda_internal, opt.nq, opt.nr);
    out.steps = opt.steps > 0
                    ? opt.steps
                    : suggest_steps(wf.t_f, std::sqrt(scan.omega_sq_absmax),
                                    opt.phase_cap);

    const WaveformInterp interp(wf);
    const ControlFunction control = [&interp, lambda_internal](double t) {
        PotentialParams p = interp.params_at(t);
        p.lambda = lambda_internal;
        return p;
    };
    const PotentialParams p0 = control(0.0), pf = control(wf.t_f);
    const double wm0 = wf.omega_minus_sq.front(), wp0 = wf.omega_plus_sq.front();
    const double wmf = wf.omega_minus_sq.back(), wpf = wf.omega_plus_sq.back();
    if (!(wm0 > 0) || !(wp0 > 0) || !(wmf > 0) || !(wpf > 0))
        throw DomainError("waveform endpoints are not confining");

    const ClassicalState eq0 = rest_state(p0, wf.coulomb, wf.d.front());
    const ClassicalState eqf = rest_state(pf, wf.coulomb, wf.d.back());

    SplitOperator op(out.grid, wf.coulomb);
    GridWavefunction psi = ground_state_embedded(
        out.grid, p0, wf.coulomb, 0.5 * (eq0.q1 + eq0.q2), eq0.q1 - eq0.q2,
        0.5 / std::pow(wm0, 0.25), 1.0 / std::pow(wp0, 0.25));
    out.energy_initial = op.energy(psi, p0);
    out.stats = op.propagate(psi, control, 0.0, wf.t_f, out.steps);
    const double e_final = op.energy(psi, pf);

    const GridWavefunction gs_final = ground_state_embedded(
        out.grid, pf, wf.coulomb, 0.5 * (eqf.q1 + eqf.q2), eqf.q1 - eqf.q2,
        0.5 / std::pow(wmf, 0.25), 1.0 / std::pow(wpf, 0.25));
    out.energy_ground_final = op.energy(gs_final, pf);

    out.report = quantum_excitation(e_final, out.energy_ground_final);
    out.final_state = std::move(psi);
    return out;
}

DesignResult run_design(const ExperimentConfig& cfg) {
    DesignResult out;
    TrapSpec trap;
    SeparationDesign design = resolve_design(cfg, trap, out.shooting);
    out.waveform = sample_design(design, static_cast<std::size_t>(cfg.n_samples));
    out.scan = scan_waveform(out.waveform);
    out.beta_max_si = out.scan.beta_max * si_factor(trap, Unit::beta);
    out.t_alpha_zero_us = alpha_zero_us(out.waveform, trap);
    out.min_omega_minus_sq = *std::min_element(out.waveform.omega_minus_sq.begin(),
                                               out.waveform.omega_minus_sq.end());
    out.min_omega_plus_sq = *std::min_element(out.waveform.omega_plus_sq.begin(),
                                              out.waveform.omega_plus_sq.end());

    const fs::path dir = ensure_out_dir(cfg);
    emit(dir, "waveform.csv", io::waveform_csv(out.waveform, trap), out.files);
    emit(dir, "design.json", io::design_json(design, trap).dump(2) + "\n", out.files);
    emit(dir, "shooting.json", io::shooting_json(out.shooting, trap).dump(2) + "\n",
         out.files);
    return out;
}

SimulateResult run_simulate(const ExperimentConfig& cfg) {
    SimulateResult out;
    TrapSpec trap;
    ShootingResult shooting;
    const SeparationDesign design = resolve_design(cfg, trap, shooting);
    const Waveform wf = sample_design(design, static_cast<std::size_t>(cfg.n_samples));
    const double lam = lambda_to_internal(trap, cfg.lambda_N);

    const fs::path dir = ensure_out_dir(cfg);
    nlohmann::json rep;
    rep["config_hash"] = cfg.config_hash;
    rep["lambda_N"] = cfg.lambda_N;
    rep["lambda_internal"] = lam;
    rep["design"] = io::design_json(design, trap);

    if (cfg.engine == "classical" || cfg.engine == "both") {
        const WaveformInterp interp(wf);
        const ControlFunction control = [&interp, lam](double t) {
            PotentialParams p = interp.params_at(t);
            p.lambda = lam;
            return p;
        };
        const ClassicalState init = rest_state(control(0.0), wf.coulomb, wf.d.front());
        ClassicalOptions opt;
        opt.n_steps = cfg.classical_steps;
        opt.store_every = std::max(1, cfg.classical_steps / 2000);
        const Trajectory traj =
            propagate_classical(control, wf.coulomb, wf.t_f, init, opt);
        const ExcitationReport r = classical_excitation(
            traj.final_state(), control(wf.t_f), wf.coulomb, wf.d.back());
        out.classical_report = r;
        rep["classical"] = io::report_json(r, trap);
        emit(dir, "trajectory.csv", io::trajectory_csv(traj, control, wf.coulomb, trap),
             out.files);
    }
    if (cfg.engine == "quantum" || cfg.engine == "both") {
        QuantumRunOptions qopt;
        qopt.nq = cfg.grid_nq;
        qopt.nr = cfg.grid_nr;
        qopt.steps = cfg.quantum_steps;
        const QuantumRunResult qr = simulate_quantum_waveform(wf, lam, qopt);
        out.quantum_report = qr.report;
        out.quantum_stats = qr.stats;
        rep["quantum"] = io::report_json(qr.report, trap);
        rep["quantum"]["norm_drift"] = qr.stats.norm_drift;
        rep["quantum"]["boundary_fraction"] = qr.stats.boundary_frac;
        rep["quantum"]["steps"] = qr.steps;
        rep["quantum"]["grid"] = {{"n_Q", qr.grid.n_Q},
                                  {"n_r", qr.grid.n_r},
                                  {"Q_min", qr.grid.Q_min},
                                  {"Q_max", qr.grid.Q_max},
                                  {"r_min", qr.grid.r_min},
                                  {"r_max", qr.grid.r_max}};
        emit(dir, "marginals.csv", io::marginals_csv(marginals(qr.final_state)),
             out.files);
        const std::string wfn = (dir / "final_state.wfn").string();
        io::write_wavefunction(wfn, qr.final_state);
        out.files.push_back(wfn);
    }
    emit(dir, "report.json", rep.dump(2) + "\n", out.files);
    return out;
}

CurveResult run_excitation_curve(const ExperimentConfig& cfg) {
    std::vector<double> tfs = cfg.tf_list_us;
    if (tfs.empty())
        for (double tf = 2.6; tf <= 8.01; tf += 0.2) tfs.push_back(tf);
    std::sort(tfs.begin(), tfs.end(), std::greater<>()); // adiabatic end first

    CurveResult out;
    out.points.resize(tfs.size());
    const TrapSpec& trap = cfg.trap;

    // Continuation march: each point warm-starts from its longer-time neighbor;
    // the order-12 search also tries the order-11 solution lifted to (c10,c11,0).
    std::array<double, 3> prev11{0, 0, 0}, prev12{0, 0, 0};
    bool have11 = false, have12 = false;
    for (std::size_t i = 0; i < tfs.size(); ++i) {
        CurvePoint& pt = out.points[i];
        pt.tf_us = tfs[i];
        const double tf_int = us_to_internal(trap, tfs[i]);

        ShootingResult r11 = shoot(trap.coulomb, tf_int, cfg.sep_factor, 11, false, {},
                                   have11 ? &prev11 : nullptr);
        pt.ok11 = r11.converged;
        pt.obj11 = r11.objective;
        pt.a10 = r11.design.free_params[0];
        pt.a11 = r11.design.free_params[1];
        if (r11.converged) {
            prev11 = r11.design.free_params;
            have11 = true;
        }

        const std::array<double, 3> lifted{pt.a10, pt.a11, 0.0};
        ShootingResult r12 =
            shoot(trap.coulomb, tf_int, cfg.sep_factor, 12, true, {}, &lifted);
        if (have12) {
            const ShootingResult alt =
                shoot(trap.coulomb, tf_int, cfg.sep_factor, 12, true, {}, &prev12);
            if (alt.converged && (!r12.converged || alt.objective < r12.objective))
                r12 = alt;
        }
        pt.ok12 = r12.converged;
        pt.obj12 = r12.objective;
        pt.c10 = r12.design.free_params[0];
        pt.c11 = r12.design.free_params[1];
        pt.c12 = r12.design.free_params[2];
        if (r12.converged) {
            prev12 = r12.design.free_params;
            have12 = true;
        }

        const Waveform wf11 =
            sample_design(r11.design, static_cast<std::size_t>(cfg.n_samples));
        const Waveform wf12 =
            sample_design(r12.design, static_cast<std::size_t>(cfg.n_samples));
        pt.e11 = simulate_classical_waveform(wf11, 0, cfg.classical_steps)
                     .excitation_quanta;
        pt.e12 = simulate_classical_waveform(wf12, 0, cfg.classical_steps)
                     .excitation_quanta;
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.tf_us < b.tf_us; });

    std::string csv = "t_f_us,e_ex_order11,e_ex_order12,a10,a11,c10,c11,c12\n";
    for (const auto& p : out.points) {
        csv += io::format_full(p.tf_us);
        for (const double v : {p.e11, p.e12, p.a10, p.a11, p.c10, p.c11, p.c12}) {
            csv += ',';
            csv += io::format_full(v);
        }
        csv += '\n';
    }
    const fs::path dir = ensure_out_dir(cfg);
    emit(dir, "excitation_curve.csv", csv, out.files);
    emit_meta(dir, "excitation_curve.csv", cfg,
              {{"t_f_us", "protocol duration, microseconds"},
               {"e_ex_order11", "classical excitation, hbar*omega0 quanta"},
               {"e_ex_order12", "classical excitation, hbar*omega0 quanta"},
               {"a10", "order-11 free coefficient (dimensionless)"},
               {"a11", "order-11 free coefficient (dimensionless)"},
               {"c10", "order-12 free coefficient (dimensionless)"},
               {"c11", "order-12 free coefficient (dimensionless)"},
               {"c12", "order-12 free coefficient (dimensionless)"}},
              out.files);
    return out;
}

TcritResult run_tcrit_table(const ExperimentConfig& cfg) {
    TcritResult out;
    out.rows.resize(cfg.omega0_mhz_list.size());

    parallel_for(out.rows.size(), [&](std::size_t i) {
        TcritRow& row = out.rows[i];
        row.omega0_mhz = cfg.omega0_mhz_list[i];
        const TrapSpec trap = make_trap_spec(cfg.trap.mass_kg, cfg.trap.charge_C,
                                             row.omega0_mhz * 1e6);

        std::array<double, 3> warm{0, 0, 0};
        bool have_warm = false;
        auto excitation_at = [&](double tf_us) {
            ShootingResult sres;
            const Waveform wf =
                design_waveform(trap, tf_us, cfg.order == 9 ? 9 : 11, false,
                                cfg.sep_factor, cfg.n_samples, &sres,
                                have_warm ? &warm : nullptr);
            if (sres.converged) {
                warm = sres.design.free_params;
                have_warm = true;
            }
            return simulate_classical_waveform(wf, 0, cfg.classical_steps)
                .excitation_quanta;
        };

        // Bracket around the t*omega0 ~ 55 rad trend, then bisect to 0.1 us.
        double guess = 8.75 / row.omega0_mhz;
        double lo = 0, hi = 0;
        if (excitation_at(guess) < 0.1) {
            hi = guess;
            for (int k = 0; k < 24 && !(lo > 0); ++k) {
                guess *= 0.78;
                if (excitation_at(guess) >= 0.1)
                    lo = guess;
                else
                    hi = guess;
            }
        } else {
            lo = guess;
            for (int k = 0; k < 24 && !(hi > 0); ++k) {
                guess *= 1.28;
                if (excitation_at(guess) < 0.1)
                    hi = guess;
                else
                    lo = guess;
            }
        }
        if (!(lo > 0) || !(hi > 0)) return; // row stays unbracketed

        while (hi - lo > 0.1) {
            const double mid = 0.5 * (lo + hi);
            if (excitation_at(mid) < 0.1)
                hi = mid;
            else
                lo = mid;
        }
        row.tcrit_us = hi;
        row.bracketed = true;

        ShootingResult sres;
        const Waveform wf = design_waveform(trap, hi, cfg.order == 9 ? 9 : 11, false,
                                            cfg.sep_factor, cfg.n_samples, &sres,
                                            have_warm ? &warm : nullptr);
        row.beta_max_si = scan_waveform(wf).beta_max * si_factor(trap, Unit::beta);
    });

    std::string csv = "omega0_mhz,tcrit_us,tcrit_internal,beta_max_si,beta_max_internal\n";
    for (const auto& row : out.rows) {
        const TrapSpec trap =
            make_trap_spec(cfg.trap.mass_kg, cfg.trap.charge_C, row.omega0_mhz * 1e6);
        csv += io::format_full(row.omega0_mhz);
        csv += ',';
        csv += io::format_full(row.bracketed
                                   ? row.tcrit_us
                                   : std::numeric_limits<double>::quiet_NaN());
        csv += ',';
        csv += io::format_full(
            row.bracketed ? us_to_internal(trap, row.tcrit_us)
                          : std::numeric_limits<double>::quiet_NaN());
        csv += ',';
        csv += io::format_full(row.beta_max_si);
        csv += ',';
        csv += io::format_full(row.beta_max_si / si_factor(trap, Unit::beta));
        csv += '\n';
    }
    const fs::path dir = ensure_out_dir(cfg);
    emit(dir, "tcrit_table.csv", csv, out.files);
    emit_meta(dir, "tcrit_table.csv", cfg,
              {{"omega0_mhz", "trap frequency omega0/2pi, MHz"},
               {"tcrit_us", "smallest duration with excitation < 0.1 quanta, microseconds"},
               {"tcrit_internal", "same, trap units"},
               {"beta_max_si", "peak quartic coefficient at t_crit, N/m^3"},
               {"beta_max_internal", "same, trap units"}},
              out.files);
    return out;
}

BiasResult run_bias_sweep(const ExperimentConfig& cfg) {
    BiasResult out;
    const TrapSpec& trap = cfg.trap;

    ShootingResult sres;
    const Waveform wf =
        design_waveform(trap, cfg.tf_us, cfg.order, cfg.objective == "perturbative",
                        cfg.sep_factor, cfg.n_samples, &sres);
    if (!sres.converged) throw ConvergenceError("bias sweep: base design did not converge");
    const double d_final = wf.d.back();

    std::vector<double> lam_internal;
    if (!cfg.lambda_list_N.empty()) {
        for (const double lN : cfg.lambda_list_N)
            lam_internal.push_back(lambda_to_internal(trap, lN));
    } else {
        std::vector<double> targets = cfg.delta_e_quanta;
        if (targets.empty())
            targets = {0, 125, 250, 500, 750, 1000, 1500, 2000};
        for (const double q : targets) lam_internal.push_back(q / d_final);
    }

    out.points.resize(lam_internal.size());
    parallel_for(out.points.size(), [&](std::size_t i) {
        BiasPoint& pt = out.points[i];
        pt.lambda_internal = lam_internal[i];
        pt.lambda_N = pt.lambda_internal * si_factor(trap, Unit::force);
        pt.excitation_quanta =
            simulate_classical_waveform(wf, pt.lambda_internal, cfg.classical_steps)
                .excitation_quanta;
        if (pt.lambda_internal == 0) {
            pt.delta_e_quanta = 0;
            return;
        }
        PotentialParams pf;
        pf.alpha = wf.alpha.back();
        pf.beta = wf.beta.back();
        pf.lambda = pt.lambda_internal;
        try {
            pt.delta_e_quanta = external_wells(pf).delta_E;
        } catch (const DomainError&) {
            pt.delta_e_quanta = std::numeric_limits<double>::quiet_NaN();
        }
    });

    std::string csv = "lambda_N,lambda_internal,delta_e_quanta,excitation_quanta\n";
    for (const auto& pt : out.points) {
        csv += io::format_full(pt.lambda_N);
        csv += ',';
        csv += io::format_full(pt.lambda_internal);
        csv += ',';
        csv += io::format_full(pt.delta_e_quanta);
        csv += ',';
        csv += io::format_full(pt.excitation_quanta);
        csv += '\n';
    }
    const fs::path dir = ensure_out_dir(cfg);
    emit(dir, "bias_sweep.csv", csv, out.files);
    emit_meta(dir, "bias_sweep.csv", cfg,
              {{"lambda_N", "tilt slope, newtons"},
               {"lambda_internal", "tilt slope, trap units"},
               {"delta_e_quanta", "final well asymmetry, hbar*omega0 quanta"},
               {"excitation_quanta", "classical excitation, hbar*omega0 quanta"}},
              out.files);
    return out;
}

CompareResult run_reference_compare(const ExperimentConfig& cfg) {
    std::vector<double> tfs = cfg.tf_list_us;
    if (tfs.empty())
        tfs = {3, 4, 5.2, 6, 8, 10, 14, 20, 28, 40, 60, 80, 100, 140, 200};
    std::sort(tfs.begin(), tfs.end());

    CompareResult out;
    out.rows.resize(tfs.size());
    const TrapSpec& trap = cfg.trap;

    parallel_for(out.rows.size(), [&](std::size_t i) {
        CompareRow& row = out.rows[i];
        row.tf_us = tfs[i];
        const Waveform sta = design_waveform(trap, tfs[i], cfg.order, false,
                                             cfg.sep_factor, cfg.n_samples);
        row.sta_quanta =
            simulate_classical_waveform(sta, 0, cfg.classical_steps).excitation_quanta;
        try {
            const Waveform ref = reference_ramp(
                trap.coulomb, us_to_internal(trap, tfs[i]), cfg.sep_factor,
                static_cast<std::size_t>(cfg.n_samples));
            row.ref_quanta =
                simulate_classical_waveform(ref, 0, cfg.classical_steps)
                    .excitation_quanta;
        } catch (const DomainError&) {
            row.ref_quanta = std::numeric_limits<double>::infinity();
        } catch (const ConvergenceError&) {
            row.ref_quanta = std::numeric_limits<double>::infinity();
        }
    });

    for (const auto& row : out.rows) {
        if (out.sta_threshold_us < 0 && row.sta_quanta < 1) out.sta_threshold_us = row.tf_us;
        if (out.ref_threshold_us < 0 && row.ref_quanta < 1) out.ref_threshold_us = row.tf_us;
    }

    std::string csv = "t_f_us,sta_quanta,reference_quanta\n";
    for (const auto& row : out.rows) {
        csv += io::format_full(row.tf_us);
        csv += ',';
        csv += io::format_full(row.sta_quanta);
        csv += ',';
        csv += io::format_full(row.ref_quanta);
        csv += '\n';
    }
    const fs::path dir = ensure_out_dir(cfg);
    emit(dir, "reference_compare.csv", csv, out.files);
    nlohmann::json summary = {
        {"config_hash", cfg.config_hash},
        {"sta_threshold_us", out.sta_threshold_us},
        {"reference_threshold_us", out.ref_threshold_us},
        {"alpha_ramp", "cubic smoothstep, zero slope at both ends"},
    };
    emit(dir, "reference_compare.json", summary.dump(2) + "\n", out.files);
    emit_meta(dir, "reference_compare.csv", cfg,
              {{"t_f_us", "protocol duration, microseconds"},
               {"sta_quanta", "invariant-designed protocol excitation, quanta"},
               {"reference_quanta", "polynomial reference ramp excitation, quanta"}},
              out.files);
    return out;
}

} // namespace ionsplit
