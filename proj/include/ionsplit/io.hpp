#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ionsplit/ansatz.hpp"
#include "ionsplit/classical.hpp"
#include "ionsplit/quantum.hpp"
#include "ionsplit/shooting.hpp"
#include "ionsplit/trap_spec.hpp"
#include "ionsplit/waveform.hpp"

namespace ionsplit::io {

// Shortest decimal that round-trips the double bit-exactly.
std::string format_full(double v);

std::uint64_t fnv1a(std::string_view data);
std::string fnv1a_hex(std::string_view data);

void write_text(const std::string& path, std::string_view content);
std::string read_text(const std::string& path);

// Columns: t_s,alpha_si,beta_si,d_si,omega_minus,omega_plus (SI; omega columns
// carry sign(Omega^2)*sqrt|Omega^2| so curvature inversions stay visible).
std::string waveform_csv(const Waveform& wf, const TrapSpec& trap);

// Columns: t,q1,q2,p1,p2,E (SI).
std::string trajectory_csv(const Trajectory& traj, const ControlFunction& control,
                           double coulomb, const TrapSpec& trap, double mass = 1.0);

// Columns: axis,coordinate,density (axis Q or r, internal units).
std::string marginals_csv(const Marginals& m);

nlohmann::json trap_json(const TrapSpec& trap);
TrapSpec trap_from_json(const nlohmann::json& j);

// Replay descriptor: trap + protocol blocks reconstruct the design exactly.
nlohmann::json design_json(const SeparationDesign& design, const TrapSpec& trap);
SeparationDesign design_from_json(const nlohmann::json& j);
SeparationDesign design_from_json(const nlohmann::json& j, TrapSpec& trap_out);

nlohmann::json shooting_json(const ShootingResult& result, const TrapSpec& trap);
nlohmann::json report_json(const ExcitationReport& report, const TrapSpec& trap);

// Little-endian binary snapshot: magic, axis specs, interleaved re/im doubles.
void write_wavefunction(const std::string& path, const GridWavefunction& psi);
GridWavefunction read_wavefunction(const std::string& path);

} // namespace ionsplit::io
