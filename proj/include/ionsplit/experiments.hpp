#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionsplit/classical.hpp"
#include "ionsplit/quantum.hpp"
#include "ionsplit/shooting.hpp"
#include "ionsplit/trap_spec.hpp"
#include "ionsplit/waveform.hpp"

namespace ionsplit {

// Parsed experiment description. The JSON file carries SI values only;
// conversion to trap units happens behind this struct.
struct ExperimentConfig {
    TrapSpec trap;
    std::string species = "Be9+";

    double tf_us = 5.2;
    std::vector<double> tf_list_us;
    int order = 11;
    std::string objective = "plain"; // plain | perturbative
    double sep_factor = 10.0;

    std::string engine = "classical"; // classical | quantum | both
    int n_samples = 2001;
    int classical_steps = 200000;
    int grid_nq = 0, grid_nr = 0, quantum_steps = 0; // 0 = auto
    double lambda_N = 0;                             // single-run bias

    std::vector<double> lambda_list_N;
    std::vector<double> delta_e_quanta;
    std::vector<double> omega0_mhz_list{3.0, 2.0, 1.2, 0.8};

    std::string design_path; // replay an emitted design instead of shooting
    std::string out_dir = ".";
    std::string config_hash;
    nlohmann::json raw;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);

// Reusable primitives under the experiment drivers.

Waveform design_waveform(const TrapSpec& trap, double tf_us, int order,
                         bool perturbative, double sep_factor, int n_samples,
                         ShootingResult* shooting_out = nullptr,
                         const std::array<double, 3>* warm_start = nullptr);

ExcitationReport simulate_classical_waveform(const Waveform& wf, double lambda_internal,
                                             int n_steps);

struct QuantumRunOptions {
    int nq = 0, nr = 0, steps = 0; // 0 = auto
    double phase_cap = 0.04;
};

struct QuantumRunResult {
    ExcitationReport report;
    SplitOperator::RunStats stats;
    GridSpec grid;
    int steps = 0;
    double energy_initial = 0, energy_ground_final = 0;
    GridWavefunction final_state;
};

QuantumRunResult simulate_quantum_waveform(const Waveform& wf, double lambda_internal,
                                           const QuantumRunOptions& opt = {});

// Experiment drivers. Each writes its outputs under cfg.out_dir and returns
// the same data for in-process callers.

struct DesignResult {
    ShootingResult shooting;
    Waveform waveform;
    WaveformScan scan;
    double beta_max_si = 0;
    double t_alpha_zero_us = -1; // -1 when alpha keeps its sign
    double min_omega_minus_sq = 0, min_omega_plus_sq = 0;
    std::vector<std::string> files;
};
DesignResult run_design(const ExperimentConfig& cfg);

struct SimulateResult {
    std::optional<ExcitationReport> classical_report;
    std::optional<ExcitationReport> quantum_report;
    SplitOperator::RunStats quantum_stats;
    std::vector<std::string> files;
};
SimulateResult run_simulate(const ExperimentConfig& cfg);

struct CurvePoint {
    double tf_us = 0;
    double e11 = 0, e12 = 0;
    double a10 = 0, a11 = 0;
    double c10 = 0, c11 = 0, c12 = 0;
    double obj11 = 0, obj12 = 0; // shooting objectives, not serialized
    bool ok11 = false, ok12 = false;
};
struct CurveResult {
    std::vector<CurvePoint> points;
    std::vector<std::string> files;
};
CurveResult run_excitation_curve(const ExperimentConfig& cfg);

struct TcritRow {
    double omega0_mhz = 0;
    double tcrit_us = 0;
    double beta_max_si = 0;
    bool bracketed = false;
};
struct TcritResult {
    std::vector<TcritRow> rows;
    std::vector<std::string> files;
};
TcritResult run_tcrit_table(const ExperimentConfig& cfg);

struct BiasPoint {
    double lambda_N = 0, lambda_internal = 0;
    double delta_e_quanta = 0; // exact gap between final external wells
    double excitation_quanta = 0;
};
struct BiasResult {
    std::vector<BiasPoint> points;
    std::vector<std::string> files;
};
BiasResult run_bias_sweep(const ExperimentConfig& cfg);

struct CompareRow {
    double tf_us = 0;
    double sta_quanta = 0;
    double ref_quanta = 0; // +inf when the reference run left the grid/blew up
};
struct CompareResult {
    std::vector<CompareRow> rows;
    // first list entry whose excitation drops below one quantum; -1 if none
    double sta_threshold_us = -1, ref_threshold_us = -1;
    std::vector<std::string> files;
};
CompareResult run_reference_compare(const ExperimentConfig& cfg);

} // namespace ionsplit
