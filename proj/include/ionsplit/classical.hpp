#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ionsplit/potential.hpp"

namespace ionsplit {

struct ClassicalState {
    double q1 = 0, q2 = 0, p1 = 0, p2 = 0, t = 0;
};

// Control curves at simulation time; bias folds into the returned lambda.
using ControlFunction = std::function<PotentialParams(double)>;

struct ClassicalOptions {
    int n_steps = 200000;
    bool use_verlet = false; // symmetric-split alternative to RK4
    int store_every = 0;     // 0 stores endpoints only
};

struct Trajectory {
    std::vector<ClassicalState> samples;
    const ClassicalState& final_state() const { return samples.back(); }
};

// Harmonic occupation per normal mode: E_mode / omega_mode at the final trap.
struct ModeSplit {
    double minus_quanta = 0, plus_quanta = 0;
};

struct ExcitationReport {
    double energy_final = 0;
    double energy_reference = 0;
    double excitation_quanta = 0; // (E - E_ref) in hbar*omega0 units
    std::optional<ModeSplit> per_mode;
    std::string method;
};

double energy_classical(const ClassicalState& s, const PotentialParams& params,
                        double coulomb, double mass = 1.0);

// Rest at the two-ion equilibrium of the given (possibly tilted) potential.
ClassicalState rest_state(const PotentialParams& params, double coulomb, double d_guess);

Trajectory propagate_classical(const ControlFunction& control, double coulomb, double t_f,
                               const ClassicalState& initial,
                               const ClassicalOptions& opt = {});

// Reference energy = V at the global two-ion minimum of the final potential.
ExcitationReport classical_excitation(const ClassicalState& final_state,
                                      const PotentialParams& final_params, double coulomb,
                                      double d_guess, double mass = 1.0);

} // namespace ionsplit
