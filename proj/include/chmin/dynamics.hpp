// dynamics.hpp
// Forward-Euler integration of the Allen-Cahn flow u_t = kappa*Lap(u) - W'(u)
// with homogeneous Dirichlet boundary, from seeded random initial data to a
// numerical equilibrium.

#ifndef CHMIN_DYNAMICS_HPP
#define CHMIN_DYNAMICS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chmin/diagnostics.hpp"
#include "chmin/field.hpp"
#include "chmin/potential.hpp"

namespace chmin {

enum class PotentialMode {
    exact_guarded, // exact W', error if any node reaches 1 - kGuardMargin
    modified,      // modified potential, defined on all of R
};

struct SolverConfig {
    double kappa = 0.02;
    double theta = 0.7;
    double dt = 1e-4;
    GridGeometry grid = build_grid(kDefaultLength, 128);
    std::uint64_t seed = 1;
    double init_amplitude = 0.1; // a0, interior values i.i.d. uniform on (0, a0)
    int init_sign = +1;
    double residual_tol = 1e-7;
    // Checkpoint period doubles as the minimum integration time: the run
    // stops at the first t >= checkpoint_period with residual below tol.
    double checkpoint_period = 50.0;
    double t_max = 5000.0;
    PotentialMode potential_mode = PotentialMode::exact_guarded;
    double modified_c = 10.0;    // threshold C when potential_mode == modified
    std::string checkpoint_dir;  // empty: no field dumps

    void validate() const; // throws std::invalid_argument
};

struct RunResult {
    ScalarField final_field;
    double max_u;
    double min_u;
    long steps;
    double t_final;
    double t_final_checkpoint; // t_final rounded up to a checkpoint multiple
    double energy;
    double nehari_residual;
    double residual_inf;
    Classification classification;
    bool converged;                         // false when stopped by t_max
    std::vector<double> checkpoint_energies; // t = 0, cp, 2cp, ..., t_final
    std::vector<std::string> flags;
};

// Deterministic, platform-independent initial data: each interior node gets
// init_sign * a0 * u01 where u01 in (0,1) comes from a SplitMix64-style
// mix of (seed, i, j).
ScalarField init_random(const SolverConfig& cfg);

// One forward-Euler step; returns the updated field and ||r||_inf of
// r = kappa*Lap(u) - W'(u) evaluated at the input state.
std::pair<ScalarField, double> step(const ScalarField& u,
                                    const SolverConfig& cfg);

// Explicit-Euler stability bound h^2/(4 kappa); run_to_equilibrium refuses
// configurations with dt above it.
double stability_bound(const SolverConfig& cfg);

RunResult run_to_equilibrium(const SolverConfig& cfg);

} // namespace chmin

#endif
