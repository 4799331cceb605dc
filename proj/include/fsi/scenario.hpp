#pragma once

#include "fsi/coupler.hpp"

#include <string>
#include <vector>

namespace fsi {

/// A runnable configuration: initial-data generator tag, domain/physics
/// parameters and output controls. Parsed from a plain "key = value" file
/// ('#' comments); see presets/ for the shipped examples.
struct Scenario {
    enum class Kind { Equilibrium, Perturbed, Flat, Custom };

    std::string name = "unnamed";
    Kind kind = Kind::Equilibrium;
    DomainConfig cfg;

    // perturbed-equilibrium(mode, amplitude)
    int mode_k1 = 1, mode_k2 = 0;
    double amplitude = 1e-3;
    double profile_power = 2.0; ///< vertical shape (x3/h_e)^p of the perturbation
    int random_modes = 0;       ///< extra random band-limited modes
    unsigned seed = 0;

    // flat-interface(alpha0, alpha1): standing mode about the equilibrium
    int flat_mode = 1;
    double flat_amplitude = 1e-3;

    // custom-file
    std::string custom_v, custom_eta, custom_q;

    // outputs
    std::string output_dir = "out";
    double snapshot_every = 0;    ///< 0 disables binary snapshots
    int diag_every = 1;           ///< steps between diagnostics rows
    double memory_snapshot_every = 0.5; ///< in-memory trajectory cadence
    std::vector<double> checkpoints;    ///< alpha^n checkpoint times
};

Scenario parseScenarioFile(const std::string& path);
void writeScenarioFile(const Scenario& s, const std::string& path);

/// Built-in presets: "equilibrium", "perturbed", "flat_wave",
/// "hshift_equilibrium", "hshift_perturbed".
Scenario makePreset(const std::string& name);
std::vector<std::string> presetNames();

/// Admissible initial data for a scenario: zero Gamma_B trace, solid volume
/// matched to the reference (interface-mean adjustment where needed), fluid
/// velocity consistent with the interface velocity, q from a consistency
/// solve.
State initial_data(const Scenario& sc, const CoupledStepper& stepper,
                   const HorizontalTransform& tr);

} // namespace fsi
