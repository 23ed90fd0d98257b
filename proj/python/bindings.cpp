#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>

#include "ionsplit/errors.hpp"
#include "ionsplit/experiments.hpp"
#include "ionsplit/io.hpp"
#include "ionsplit/reference_ramp.hpp"

namespace py = pybind11;
using namespace ionsplit;

namespace {

ShootingResult shoot_py(double coulomb, double t_f, double sep_factor, int order,
                        bool perturbative, std::optional<std::array<double, 3>> warm) {
    return shoot(coulomb, t_f, sep_factor, order, perturbative, {},
                 warm ? &*warm : nullptr);
}

std::string run_experiment(const std::string& kind, const std::string& config_json) {
    const ExperimentConfig cfg =
        config_from_json(nlohmann::json::parse(config_json, nullptr, true, true));
    nlohmann::json out;
    if (kind == "design") {
        const DesignResult r = run_design(cfg);
        out = {{"converged", r.shooting.converged},
               {"objective_quanta", r.shooting.objective},
               {"beta_max_si", r.beta_max_si},
               {"t_alpha_zero_us", r.t_alpha_zero_us},
               {"files", r.files}};
    } else if (kind == "simulate") {
        const SimulateResult r = run_simulate(cfg);
        if (r.classical_report)
            out["classical_quanta"] = r.classical_report->excitation_quanta;
        if (r.quantum_report)
            out["quantum_quanta"] = r.quantum_report->excitation_quanta;
        out["files"] = r.files;
    } else if (kind == "excitation-curve") {
        const CurveResult r = run_excitation_curve(cfg);
        auto pts = nlohmann::json::array();
        for (const auto& p : r.points)
            pts.push_back({{"tf_us", p.tf_us}, {"e11", p.e11}, {"e12", p.e12}});
        out = {{"points", pts}, {"files", r.files}};
    } else if (kind == "tcrit-table") {
        const TcritResult r = run_tcrit_table(cfg);
        auto rows = nlohmann::json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"omega0_mhz", row.omega0_mhz},
                            {"tcrit_us", row.tcrit_us},
                            {"beta_max_si", row.beta_max_si},
                            {"bracketed", row.bracketed}});
        out = {{"rows", rows}, {"files", r.files}};
    } else if (kind == "bias-sweep") {
        const BiasResult r = run_bias_sweep(cfg);
        auto pts = nlohmann::json::array();
        for (const auto& p : r.points)
            pts.push_back({{"lambda_N", p.lambda_N},
                           {"delta_e_quanta", p.delta_e_quanta},
                           {"excitation_quanta", p.excitation_quanta}});
        out = {{"points", pts}, {"files", r.files}};
    } else if (kind == "reference-compare") {
        const CompareResult r = run_reference_compare(cfg);
        out = {{"sta_threshold_us", r.sta_threshold_us},
               {"reference_threshold_us", r.ref_threshold_us},
               {"files", r.files}};
    } else {
        throw ConfigError("unknown experiment kind: " + kind);
    }
    return out.dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-ion separation waveform design and verification core";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ConvergenceError>(m, "ConvergenceError");
    py::register_exception<DomainError>(m, "DomainError");

    py::class_<TrapSpec>(m, "TrapSpec")
        .def_readonly("mass_kg", &TrapSpec::mass_kg)
        .def_readonly("charge_C", &TrapSpec::charge_C)
        .def_readonly("omega0_rad_s", &TrapSpec::omega0_rad_s)
        .def_readonly("length_scale_m", &TrapSpec::length_scale_m)
        .def_readonly("time_scale_s", &TrapSpec::time_scale_s)
        .def_readonly("energy_quantum_J", &TrapSpec::energy_quantum_J)
        .def_readonly("coulomb", &TrapSpec::coulomb)
        .def_readonly("d0", &TrapSpec::d0)
        .def_readonly("d0_m", &TrapSpec::d0_m);

    m.def("make_trap_spec",
          py::overload_cast<std::string_view, double>(&make_trap_spec),
          py::arg("species"), py::arg("omega0_hz"));
    m.def("make_trap_spec",
          py::overload_cast<double, double, double>(&make_trap_spec),
          py::arg("mass_kg"), py::arg("charge_C"), py::arg("omega0_hz"));

    py::class_<SeparationDesign>(m, "SeparationDesign")
        .def_readonly("coulomb", &SeparationDesign::coulomb)
        .def_readonly("t_f", &SeparationDesign::t_f)
        .def_readonly("sep_factor", &SeparationDesign::sep_factor)
        .def_readonly("order", &SeparationDesign::order)
        .def_readonly("free_params", &SeparationDesign::free_params)
        .def_readonly("d0", &SeparationDesign::d0)
        .def_readonly("d_final", &SeparationDesign::d_final)
        .def_readonly("gamma_plus", &SeparationDesign::gamma_plus);

    py::class_<ShootingResult>(m, "ShootingResult")
        .def_readonly("design", &ShootingResult::design)
        .def_readonly("objective", &ShootingResult::objective)
        .def_readonly("x_plus_final", &ShootingResult::x_plus_final)
        .def_readonly("x_plus_dot_final", &ShootingResult::x_plus_dot_final)
        .def_readonly("iterations", &ShootingResult::iterations)
        .def_readonly("converged", &ShootingResult::converged);

    py::class_<Waveform>(m, "Waveform")
        .def_readonly("coulomb", &Waveform::coulomb)
        .def_readonly("t_f", &Waveform::t_f)
        .def_readonly("t", &Waveform::t)
        .def_readonly("alpha", &Waveform::alpha)
        .def_readonly("beta", &Waveform::beta)
        .def_readonly("d", &Waveform::d)
        .def_readonly("d_dot", &Waveform::d_dot)
        .def_readonly("omega_minus_sq", &Waveform::omega_minus_sq)
        .def_readonly("omega_plus_sq", &Waveform::omega_plus_sq)
        .def("__len__", &Waveform::size);

    py::class_<ModeSplit>(m, "ModeSplit")
        .def_readonly("minus_quanta", &ModeSplit::minus_quanta)
        .def_readonly("plus_quanta", &ModeSplit::plus_quanta);

    py::class_<ExcitationReport>(m, "ExcitationReport")
        .def_readonly("energy_final", &ExcitationReport::energy_final)
        .def_readonly("energy_reference", &ExcitationReport::energy_reference)
        .def_readonly("excitation_quanta", &ExcitationReport::excitation_quanta)
        .def_readonly("per_mode", &ExcitationReport::per_mode)
        .def_readonly("method", &ExcitationReport::method);

    m.def("shoot", &shoot_py, py::arg("coulomb"), py::arg("t_f"),
          py::arg("sep_factor") = 10.0, py::arg("order") = 11,
          py::arg("perturbative") = false, py::arg("warm_start") = py::none());
    m.def("sample_design", &sample_design, py::arg("design"), py::arg("n_samples"));
    m.def("design_waveform",
          [](const TrapSpec& trap, double tf_us, int order, bool perturbative,
             double sep_factor, int n_samples) {
              return design_waveform(trap, tf_us, order, perturbative, sep_factor,
                                     n_samples);
          },
          py::arg("trap"), py::arg("tf_us"), py::arg("order") = 11,
          py::arg("perturbative") = false, py::arg("sep_factor") = 10.0,
          py::arg("n_samples") = 2001);
    m.def("reference_ramp", &reference_ramp, py::arg("coulomb"), py::arg("t_f"),
          py::arg("sep_factor") = 10.0, py::arg("n_samples") = 2001);
    m.def("simulate_classical_waveform", &simulate_classical_waveform, py::arg("waveform"),
          py::arg("lambda_internal") = 0.0, py::arg("n_steps") = 200000,
          py::call_guard<py::gil_scoped_release>());
    m.def("simulate_quantum_waveform",
          [](const Waveform& wf, double lambda_internal, int nq, int nr, int steps) {
              QuantumRunOptions opt;
              opt.nq = nq;
              opt.nr = nr;
              opt.steps = steps;
              return simulate_quantum_waveform(wf, lambda_internal, opt).report;
          },
          py::arg("waveform"), py::arg("lambda_internal") = 0.0, py::arg("nq") = 0,
          py::arg("nr") = 0, py::arg("steps") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("run_experiment", &run_experiment, py::arg("kind"), py::arg("config_json"),
          py::call_guard<py::gil_scoped_release>());
    m.def("waveform_csv", &io::waveform_csv, py::arg("waveform"), py::arg("trap"));
}
