#include "ionsplit/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ionsplit/constants.hpp"
#include "ionsplit/errors.hpp"

namespace ionsplit::io {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

std::string format_full(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(data)));
    return buf;
}

void write_text(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

double signed_sqrt(double w2) {
    return std::copysign(std::sqrt(std::abs(w2)), w2);
}

void append_row(std::string& out, std::initializer_list<double> vals) {
    bool first = true;
    for (const double v : vals) {
        if (!first) out += ',';
        out += format_full(v);
        first = false;
    }
    out += '\n';
}

} // namespace

std::string waveform_csv(const Waveform& wf, const TrapSpec& trap) {
    std::string out = "t_s,alpha_si,beta_si,d_si,omega_minus,omega_plus\n";
    const double f_t = si_factor(trap, Unit::time);
    const double f_a = si_factor(trap, Unit::alpha);
    const double f_b = si_factor(trap, Unit::beta);
    const double f_d = si_factor(trap, Unit::length);
    const double f_w = trap.omega0_rad_s;
    for (std::size_t i = 0; i < wf.size(); ++i)
        append_row(out, {wf.t[i] * f_t, wf.alpha[i] * f_a, wf.beta[i] * f_b,
                         wf.d[i] * f_d, signed_sqrt(wf.omega_minus_sq[i]) * f_w,
                         signed_sqrt(wf.omega_plus_sq[i]) * f_w});
    return out;
}

std::string trajectory_csv(const Trajectory& traj, const ControlFunction& control,
                           double coulomb, const TrapSpec& trap, double mass) {
    std::string out = "t,q1,q2,p1,p2,E\n";
    const double f_t = si_factor(trap, Unit::time);
    const double f_x = si_factor(trap, Unit::length);
    const double f_p = trap.mass_kg * trap.omega0_rad_s * trap.length_scale_m;
    const double f_e = si_factor(trap, Unit::energy);
    for (const auto& s : traj.samples) {
        const double e = energy_classical(s, control(s.t), coulomb, mass);
        append_row(out, {s.t * f_t, s.q1 * f_x, s.q2 * f_x, s.p1 * f_p, s.p2 * f_p,
                         e * f_e});
    }
    return out;
}

std::string marginals_csv(const Marginals& m) {
    std::string out = "axis,coordinate,density\n";
    for (std::size_t i = 0; i < m.Q.size(); ++i) {
        out += "Q,";
        out += format_full(m.Q[i]);
        out += ',';
        out += format_full(m.density_Q[i]);
        out += '\n';
    }
    for (std::size_t j = 0; j < m.r.size(); ++j) {
        out += "r,";
        out += format_full(m.r[j]);
        out += ',';
        out += format_full(m.density_r[j]);
        out += '\n';
    }
    return out;
}

nlohmann::json trap_json(const TrapSpec& trap) {
    return {
        {"mass_kg", trap.mass_kg},
        {"charge_C", trap.charge_C},
        {"omega0_rad_s", trap.omega0_rad_s},
        {"omega0_hz", trap.omega0_rad_s / (2.0 * constants::pi)},
        {"coulomb_Jm", trap.coulomb_Jm},
        {"length_scale_m", trap.length_scale_m},
        {"time_scale_s", trap.time_scale_s},
        {"energy_quantum_J", trap.energy_quantum_J},
        {"coulomb_internal", trap.coulomb},
        {"d0_m", trap.d0_m},
    };
}

TrapSpec trap_from_json(const nlohmann::json& j) {
    try {
        return make_trap_spec(j.at("mass_kg").get<double>(),
                              j.at("charge_C").get<double>(),
                              j.at("omega0_rad_s").get<double>() /
                                  (2.0 * constants::pi));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad trap block: ") + e.what());
    }
}

nlohmann::json design_json(const SeparationDesign& design, const TrapSpec& trap) {
    nlohmann::json j;
    j["format"] = "ionsplit-design-v1";
    j["trap"] = trap_json(trap);
    j["protocol"] = {
        {"t_f", design.t_f},
        {"t_f_s", design.t_f * si_factor(trap, Unit::time)},
        {"sep_factor", design.sep_factor},
        {"order", design.order},
        {"free_params",
         {design.free_params[0], design.free_params[1], design.free_params[2]}},
    };
    j["derived"] = {
        {"d0", design.d0},
        {"d0_m", design.d0 * si_factor(trap, Unit::length)},
        {"d_final", design.d_final},
        {"gamma_plus", design.gamma_plus},
        {"omega_plus0", design.omega_plus0},
        {"omega_plus_final", design.omega_plus_final},
    };
    j["config_hash"] = fnv1a_hex(j["trap"].dump() + j["protocol"].dump());
    return j;
}

SeparationDesign design_from_json(const nlohmann::json& j, TrapSpec& trap_out) {
    if (j.value("format", std::string{}) != "ionsplit-design-v1")
        throw ConfigError("not an ionsplit design descriptor");
    try {
        trap_out = trap_from_json(j.at("trap"));
        // replay from the stored internal value: the hz <-> rad/s round trip
        // can move the last ulp, the protocol curves must not
        const double coulomb =
            j.at("trap").value("coulomb_internal", trap_out.coulomb);
        const auto& p = j.at("protocol");
        const auto fp = p.at("free_params");
        if (!fp.is_array() || fp.size() != 3)
            throw ConfigError("free_params must hold three numbers");
        return make_design(coulomb, p.at("t_f").get<double>(),
                           p.at("sep_factor").get<double>(), p.at("order").get<int>(),
                           {fp[0].get<double>(), fp[1].get<double>(),
                            fp[2].get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad design descriptor: ") + e.what());
    }
}

SeparationDesign design_from_json(const nlohmann::json& j) {
    TrapSpec trap;
    return design_from_json(j, trap);
}

nlohmann::json shooting_json(const ShootingResult& result, const TrapSpec& trap) {
    nlohmann::json j;
    j["free_params"] = {result.design.free_params[0], result.design.free_params[1],
                        result.design.free_params[2]};
    j["objective_quanta"] = result.objective;
    j["residual_x_plus"] = result.x_plus_final;
    j["residual_x_plus_dot"] = result.x_plus_dot_final;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["design"] = design_json(result.design, trap);
    return j;
}

nlohmann::json report_json(const ExcitationReport& report, const TrapSpec& trap) {
    nlohmann::json j;
    j["method"] = report.method;
    j["energy_final"] = report.energy_final;
    j["energy_final_J"] = report.energy_final * si_factor(trap, Unit::energy);
    j["energy_reference"] = report.energy_reference;
    j["energy_reference_J"] = report.energy_reference * si_factor(trap, Unit::energy);
    j["excitation_quanta"] = report.excitation_quanta;
    if (report.per_mode) {
        j["per_mode"] = {{"minus_quanta", report.per_mode->minus_quanta},
                         {"plus_quanta", report.per_mode->plus_quanta}};
    }
    return j;
}

namespace {
constexpr char kWfMagic[8] = {'I', 'O', 'N', 'W', 'F', 'N', '0', '1'};
}

void write_wavefunction(const std::string& path, const GridWavefunction& psi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.write(kWfMagic, sizeof kWfMagic);
    const std::int64_t dims[2] = {psi.grid.n_Q, psi.grid.n_r};
    out.write(reinterpret_cast<const char*>(dims), sizeof dims);
    const double axes[5] = {psi.grid.Q_min, psi.grid.Q_max, psi.grid.r_min,
                            psi.grid.r_max, psi.t};
    out.write(reinterpret_cast<const char*>(axes), sizeof axes);
    out.write(reinterpret_cast<const char*>(psi.amp.data()),
              static_cast<std::streamsize>(psi.amp.size() * sizeof(psi.amp[0])));
    if (!out) throw ConfigError("write failed: " + path);
}

GridWavefunction read_wavefunction(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kWfMagic, sizeof kWfMagic) != 0)
        throw ConfigError("not a wavefunction snapshot: " + path);
    std::int64_t dims[2];
    double axes[5];
    in.read(reinterpret_cast<char*>(dims), sizeof dims);
    in.read(reinterpret_cast<char*>(axes), sizeof axes);
    if (!in || dims[0] < 2 || dims[1] < 2 || dims[0] * dims[1] > (1ll << 28))
        throw ConfigError("corrupt snapshot header: " + path);
    GridWavefunction psi;
    psi.grid.n_Q = static_cast<int>(dims[0]);
    psi.grid.n_r = static_cast<int>(dims[1]);
    psi.grid.Q_min = axes[0];
    psi.grid.Q_max = axes[1];
    psi.grid.r_min = axes[2];
    psi.grid.r_max = axes[3];
    psi.t = axes[4];
    psi.amp.resize(psi.grid.points());
    in.read(reinterpret_cast<char*>(psi.amp.data()),
            static_cast<std::streamsize>(psi.amp.size() * sizeof(psi.amp[0])));
    if (!in) throw ConfigError("truncated snapshot: " + path);
    return psi;
}

} // namespace ionsplit::io
