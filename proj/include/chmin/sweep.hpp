// sweep.hpp
// Parameter-sweep harness over (theta, kappa, seed), the symmetry experiment,
// and the bisection probe for the bifurcation threshold.

#ifndef CHMIN_SWEEP_HPP
#define CHMIN_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "chmin/dynamics.hpp"

namespace chmin {

inline constexpr const char* kVersion = "0.1.0";

// Numerical settings shared by all cases of a sweep.
struct SweepNumerics {
    double length = kDefaultLength;
    int n = 128;
    double dt = 1e-4;
    double init_amplitude = 0.1;
    double residual_tol = 1e-7;
    double checkpoint_period = 50.0;
    double t_max = 5000.0;
    PotentialMode potential_mode = PotentialMode::exact_guarded;
    double modified_c = 10.0;
};

// Reference grid: N=128, dt=1e-4.
SweepNumerics reference_numerics();

// Coarse suite: N=64, dt=4e-4; same physics, minutes become seconds.
SweepNumerics fast_numerics();

struct SweepRecord {
    double theta = 0.0;
    double kappa = 0.0;
    double kappa_c = 0.0; // (1-theta)/lambda1, continuum lambda1
    std::uint64_t seed = 0;
    double u_theta = 0.0;
    double max_u = 0.0;
    double energy = 0.0;
    double nehari_residual = 0.0;
    double t_final = 0.0;
    Classification classification = Classification::trivial;
    std::vector<std::string> flags;
};

// One (theta, kappa, seed) case. Near-threshold cases (|kappa - kappa_c|
// < 0.01) run with t_max extended x4. Failures come back as flagged records.
SweepRecord run_case(double theta, double kappa, std::uint64_t seed,
                     const SweepNumerics& numerics);

// Cartesian product of the lists, executed on a small worker pool
// (jobs = 0 picks the hardware concurrency). Output order is
// theta-major, then kappa, then seed, independent of scheduling.
std::vector<SweepRecord> sweep_grid(const std::vector<double>& thetas,
                                    const std::vector<double>& kappas,
                                    const std::vector<std::uint64_t>& seeds,
                                    const SweepNumerics& numerics,
                                    int jobs = 0);

struct SymmetryResult {
    SweepRecord positive;
    SweepRecord negative;
    double mismatch; // ||u_minus + u_plus||_inf at equilibrium
};

// Runs init_sign = +-1 with the same seed.
SymmetryResult symmetry_experiment(double theta, double kappa,
                                   std::uint64_t seed,
                                   const SweepNumerics& numerics);

struct ThresholdResult {
    double kappa_lo = 0.0;  // nontrivial side
    double kappa_hi = 0.0;  // trivial side
    double kappa_estimate = 0.0;
    double kappa_c_continuum = 0.0;
    double kappa_c_discrete = 0.0;
    int runs = 0;
    std::vector<std::string> flags;
};

// Bisection on kappa with "equilibrium is nontrivial" as the predicate.
// The bracket must straddle the threshold. Multiple seeds vote; a
// disagreement is flagged.
ThresholdResult threshold_probe(double theta, double kappa_lo, double kappa_hi,
                                const std::vector<std::uint64_t>& seeds,
                                const SweepNumerics& numerics,
                                double resolution = 5e-3);

// Fixed-header CSV, one row per record, byte-stable across reruns.
void write_records_csv(const std::vector<SweepRecord>& records,
                       const std::string& path);

std::vector<SweepRecord> read_records_csv(const std::string& path);

// JSON manifest for a sweep: numerics, code version, wall time. Everything
// except the "timing" object is byte-stable for identical inputs.
void write_manifest_json(const std::string& path, const SweepNumerics& numerics,
                         const std::string& records_file, double wall_seconds);

} // namespace chmin

#endif
