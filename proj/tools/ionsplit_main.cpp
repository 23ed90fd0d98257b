#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionsplit/errors.hpp"
#include "ionsplit/experiments.hpp"
#include "ionsplit/io.hpp"

using namespace ionsplit;

namespace {

struct Flags {
    std::string config_path;
    std::string species;
    double omega0_mhz = 0;
    double tf_us = 0;
    std::vector<double> tf_list_us;
    int order = 0;
    std::string objective;
    double sep_factor = 0;
    std::string engine;
    int n_samples = 0;
    int classical_steps = 0;
    int grid_nq = 0, grid_nr = 0, steps = 0;
    double lambda_zn = 0;
    std::vector<double> lambda_zn_list;
    std::vector<double> delta_e_quanta;
    std::vector<double> omega0_mhz_list;
    std::string design_path;
    std::string out_dir;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "experiment config JSON file");
    cmd->add_option("--species", f.species, "ion species (Be9+ or Ca40+)");
    cmd->add_option("--omega0-mhz", f.omega0_mhz, "trap frequency omega0/2pi in MHz");
    cmd->add_option("--tf-us", f.tf_us, "protocol duration in microseconds");
    cmd->add_option("--tf-list-us", f.tf_list_us, "sweep durations in microseconds")
        ->delimiter(',');
    cmd->add_option("--order", f.order, "scaling ansatz order: 9, 11 or 12");
    cmd->add_option("--objective", f.objective, "shooting objective: plain or perturbative");
    cmd->add_option("--sep-factor", f.sep_factor, "final/initial separation ratio");
    cmd->add_option("--engine", f.engine, "simulation engine: classical, quantum or both");
    cmd->add_option("--n-samples", f.n_samples, "waveform samples");
    cmd->add_option("--classical-steps", f.classical_steps, "classical integrator steps");
    cmd->add_option("--grid-nq", f.grid_nq, "quantum grid points along Q (0 = auto)");
    cmd->add_option("--grid-nr", f.grid_nr, "quantum grid points along r (0 = auto)");
    cmd->add_option("--steps", f.steps, "quantum propagation steps (0 = auto)");
    cmd->add_option("--lambda-zn", f.lambda_zn, "tilt slope in zeptonewtons");
    cmd->add_option("--lambda-zn-list", f.lambda_zn_list, "tilt sweep in zeptonewtons")
        ->delimiter(',');
    cmd->add_option("--delta-e", f.delta_e_quanta, "tilt sweep as well gaps in quanta")
        ->delimiter(',');
    cmd->add_option("--omega0-mhz-list", f.omega0_mhz_list, "trap frequency sweep in MHz")
        ->delimiter(',');
    cmd->add_option("--design", f.design_path, "replay an emitted design JSON");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
}

nlohmann::json build_config_json(const CLI::App* cmd, const Flags& f) {
    nlohmann::json j = nlohmann::json::object();
    if (!f.config_path.empty()) {
        try {
            j = nlohmann::json::parse(io::read_text(f.config_path), nullptr, true, true);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("cannot parse config: ") + e.what());
        }
    }
    if (cmd->count("--species")) j["trap"]["species"] = f.species;
    if (cmd->count("--omega0-mhz")) j["trap"]["omega0_hz"] = f.omega0_mhz * 1e6;
    if (cmd->count("--tf-us")) j["protocol"]["t_f_us"] = f.tf_us;
    if (cmd->count("--tf-list-us")) j["protocol"]["t_f_list_us"] = f.tf_list_us;
    if (cmd->count("--order")) j["protocol"]["order"] = f.order;
    if (cmd->count("--objective")) j["protocol"]["objective"] = f.objective;
    if (cmd->count("--sep-factor")) j["protocol"]["expansion_factor"] = f.sep_factor;
    if (cmd->count("--engine")) j["simulation"]["engine"] = f.engine;
    if (cmd->count("--n-samples")) j["simulation"]["n_samples"] = f.n_samples;
    if (cmd->count("--classical-steps"))
        j["simulation"]["classical_steps"] = f.classical_steps;
    if (cmd->count("--grid-nq")) j["simulation"]["grid_nq"] = f.grid_nq;
    if (cmd->count("--grid-nr")) j["simulation"]["grid_nr"] = f.grid_nr;
    if (cmd->count("--steps")) j["simulation"]["steps"] = f.steps;
    if (cmd->count("--lambda-zn")) j["bias"]["lambda_N"] = f.lambda_zn * 1e-21;
    if (cmd->count("--lambda-zn-list")) {
        auto arr = nlohmann::json::array();
        for (const double zn : f.lambda_zn_list) arr.push_back(zn * 1e-21);
        j["bias"]["lambda_N"] = arr;
    }
    if (cmd->count("--delta-e")) j["bias"]["delta_e_quanta"] = f.delta_e_quanta;
    if (cmd->count("--omega0-mhz-list")) j["sweep"]["omega0_mhz"] = f.omega0_mhz_list;
    if (cmd->count("--design")) j["design_path"] = f.design_path;
    if (cmd->count("--out-dir")) j["output"]["dir"] = f.out_dir;
    return j;
}

void print_report(const char* label, const ExcitationReport& r) {
    std::printf("%s: excitation %.6g quanta (E_final %.10g, E_ref %.10g)\n", label,
                r.excitation_quanta, r.energy_final, r.energy_reference);
    if (r.per_mode)
        std::printf("  per mode: com %.6g quanta, stretch %.6g quanta\n",
                    r.per_mode->minus_quanta, r.per_mode->plus_quanta);
}

int cmd_design(const ExperimentConfig& cfg) {
    const DesignResult res = run_design(cfg);
    std::printf("design: t_f %.4g us, order %d, objective %.6g quanta, %s\n", cfg.tf_us,
                cfg.order, res.shooting.objective,
                res.shooting.converged ? "converged" : "NOT CONVERGED");
    std::printf("  beta_max %.6g N/m^3 at t = %.4g us of alpha zero crossing\n",
                res.beta_max_si, res.t_alpha_zero_us);
    std::printf("  min Omega_minus^2 %.6g, min Omega_plus^2 %.6g (trap units)\n",
                res.min_omega_minus_sq, res.min_omega_plus_sq);
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    if (!res.shooting.converged) {
        std::fprintf(stderr, "warning: shooting did not converge; outputs are flagged\n");
        return 2;
    }
    return 0;
}

int cmd_simulate(const ExperimentConfig& cfg) {
    const SimulateResult res = run_simulate(cfg);
    if (res.classical_report) print_report("classical", *res.classical_report);
    if (res.quantum_report) {
        print_report("quantum", *res.quantum_report);
        std::printf("  norm drift %.3g, boundary fraction %.3g\n",
                    res.quantum_stats.norm_drift, res.quantum_stats.boundary_frac);
    }
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    return 0;
}

int cmd_curve(const ExperimentConfig& cfg) {
    const CurveResult res = run_excitation_curve(cfg);
    bool all_ok = true;
    for (const auto& p : res.points) {
        std::printf("t_f %6.3f us: order-11 %.4g quanta, order-12 %.4g quanta\n",
                    p.tf_us, p.e11, p.e12);
        all_ok = all_ok && p.ok11 && p.ok12;
    }
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    if (!all_ok) {
        std::fprintf(stderr, "warning: some shooting runs did not converge\n");
        return 2;
    }
    return 0;
}

int cmd_tcrit(const ExperimentConfig& cfg) {
    const TcritResult res = run_tcrit_table(cfg);
    bool all_ok = true;
    for (const auto& row : res.rows) {
        if (row.bracketed)
            std::printf("omega0 %.3g MHz: t_crit %.2f us, beta_max %.4g N/m^3\n",
                        row.omega0_mhz, row.tcrit_us, row.beta_max_si);
        else
            std::printf("omega0 %.3g MHz: bracket failure\n", row.omega0_mhz);
        all_ok = all_ok && row.bracketed;
    }
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    return all_ok ? 0 : 2;
}

int cmd_bias(const ExperimentConfig& cfg) {
    const BiasResult res = run_bias_sweep(cfg);
    for (const auto& pt : res.points)
        std::printf("lambda %9.4g zN (dE %8.6g quanta): excitation %.6g quanta\n",
                    pt.lambda_N * 1e21, pt.delta_e_quanta, pt.excitation_quanta);
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    return 0;
}

int cmd_compare(const ExperimentConfig& cfg) {
    const CompareResult res = run_reference_compare(cfg);
    for (const auto& row : res.rows)
        std::printf("t_f %7.3f us: designed %.4g quanta, reference %.4g quanta\n",
                    row.tf_us, row.sta_quanta, row.ref_quanta);
    std::printf("sub-quantum threshold: designed %.4g us, reference %.4g us\n",
                res.sta_threshold_us, res.ref_threshold_us);
    for (const auto& p : res.files) std::printf("  wrote %s\n", p.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-ion separation: invariant-based waveform design and verification"};
    app.require_subcommand(1);

    Flags f;
    CLI::App* design = app.add_subcommand("design", "Inverse-engineer a waveform");
    CLI::App* simulate = app.add_subcommand("simulate", "Propagate a design");
    CLI::App* curve =
        app.add_subcommand("excitation-curve", "Excitation vs duration, both ansatz orders");
    CLI::App* tcrit = app.add_subcommand("tcrit-table", "Critical times per trap frequency");
    CLI::App* bias = app.add_subcommand("bias-sweep", "Excitation vs uncontrolled tilt");
    CLI::App* compare =
        app.add_subcommand("reference-compare", "Designed vs polynomial reference ramp");
    for (CLI::App* cmd : {design, simulate, curve, tcrit, bias, compare})
        add_common(cmd, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        const CLI::App* active = app.get_subcommands().front();
        const ExperimentConfig cfg = config_from_json(build_config_json(active, f));
        if (active == design) return cmd_design(cfg);
        if (active == simulate) return cmd_simulate(cfg);
        if (active == curve) return cmd_curve(cfg);
        if (active == tcrit) return cmd_tcrit(cfg);
        if (active == bias) return cmd_bias(cfg);
        return cmd_compare(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "convergence error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
