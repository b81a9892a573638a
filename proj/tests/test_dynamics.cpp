#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chmin/dynamics.hpp"

using namespace chmin;

namespace {

SolverConfig small_config(double theta, double kappa, int n, double dt) {
    SolverConfig cfg;
    cfg.theta = theta;
    cfg.kappa = kappa;
    cfg.grid = build_grid(kDefaultLength, n);
    cfg.dt = dt;
    cfg.checkpoint_period = 10.0;
    return cfg;
}

const double kPi2 = std::numbers::pi * std::numbers::pi;

} // namespace

TEST_CASE("init_random: determinism, range, negation, boundary") {
    SolverConfig cfg = small_config(0.7, 0.1, 16, 0.01);
    cfg.init_amplitude = 0.1;

    const ScalarField a = init_random(cfg);
    const ScalarField b = init_random(cfg);
    for (std::size_t i = 0; i < a.values().size(); ++i)
        CHECK(a.values()[i] == b.values()[i]);

    for (int i = 1; i < 16; ++i)
        for (int j = 1; j < 16; ++j) {
            CHECK(a(i, j) > 0.0);
            CHECK(a(i, j) < 0.1);
        }
    for (int i = 0; i <= 16; ++i) {
        CHECK(a(i, 0) == 0.0);
        CHECK(a(0, i) == 0.0);
        CHECK(a(i, 16) == 0.0);
        CHECK(a(16, i) == 0.0);
    }

    cfg.init_sign = -1;
    const ScalarField neg = init_random(cfg);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j) CHECK(neg(i, j) == -a(i, j));

    SolverConfig other = cfg;
    other.seed = 2;
    const ScalarField c = init_random(other);
    bool differs = false;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        if (c.values()[i] != neg.values()[i]) differs = true;
    CHECK(differs);
}

TEST_CASE("step: fixed point at zero, odd symmetry, energy descent") {
    const SolverConfig cfg = small_config(0.7, 0.02, 16, 0.01);
    const ScalarField zero(cfg.grid);
    const auto [unchanged, residual] = step(zero, cfg);
    CHECK(residual == 0.0);
    CHECK(inf_norm(unchanged) == 0.0);

    const ScalarField u = init_random(cfg);
    ScalarField v(cfg.grid);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j) v(i, j) = -u(i, j);
    const auto [up, ru] = step(u, cfg);
    const auto [vp, rv] = step(v, cfg);
    CHECK(ru == rv);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j)
            CHECK(std::abs(vp(i, j) + up(i, j)) <= 1e-13);

    // one stable step from u_theta * phi1 lowers the discrete energy
    const PotentialParams p(0.7);
    const double u_theta = find_u_theta(p).value;
    ScalarField ray = eigenfunction(cfg.grid);
    for (auto& x : ray.values()) x *= u_theta;
    const double before = energy(ray, cfg.kappa, p).total;
    const auto [after_field, r2] = step(ray, cfg);
    CHECK(energy(after_field, cfg.kappa, p).total < before);
}

TEST_CASE("stability bound") {
    SolverConfig cfg;
    cfg.kappa = 0.02;
    CHECK(stability_bound(cfg) == doctest::Approx(0.015059821168654417).epsilon(1e-12));
    cfg.kappa = 0.299;
    CHECK(stability_bound(cfg) == doctest::Approx(0.0010073458975688573).epsilon(1e-12));
    CHECK(stability_bound(cfg) > 1e-4); // the reference time step is admissible
    SolverConfig doubled = cfg;
    doubled.kappa *= 2.0;
    CHECK(stability_bound(doubled) == doctest::Approx(0.5 * stability_bound(cfg)));

    SolverConfig bad = small_config(0.7, 0.02, 16, 0.01);
    bad.dt = 10.0;
    CHECK_THROWS_WITH_AS(run_to_equilibrium(bad),
                         doctest::Contains("stability bound"),
                         std::invalid_argument);
}

TEST_CASE("config validation") {
    SolverConfig cfg = small_config(0.7, 0.1, 16, 0.01);
    cfg.kappa = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(0.7, 0.1, 16, 0.01);
    cfg.init_amplitude = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(0.7, 0.1, 16, 0.01);
    cfg.init_sign = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(1.2, 0.1, 16, 0.01);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("supercritical run decays to the trivial state") {
    SolverConfig cfg = small_config(0.7, 0.35, 16, 0.05);
    const RunResult run = run_to_equilibrium(cfg);
    REQUIRE(run.converged);
    CHECK(run.classification == Classification::trivial);
    CHECK(std::max(std::abs(run.max_u), std::abs(run.min_u)) < 1e-3);
    CHECK(run.energy == doctest::Approx(kPi2).epsilon(1e-3));
    CHECK(run.residual_inf < cfg.residual_tol);
    CHECK(run.t_final >= cfg.checkpoint_period);
    CHECK(run.flags.empty());
}

TEST_CASE("subcritical run: maximum principle and energy drop") {
    SolverConfig cfg = small_config(0.7, 0.1, 32, 2e-3);
    const RunResult run = run_to_equilibrium(cfg);
    REQUIRE(run.converged);
    CHECK(run.classification == Classification::nontrivial_positive);

    const double u_theta = find_u_theta(PotentialParams(0.7)).value;
    CHECK(run.min_u >= -1e-12);
    CHECK(run.max_u <= u_theta + 1e-4);
    CHECK(run.max_u > 0.5);
    CHECK(run.energy < kPi2);
    CHECK(std::abs(run.nehari_residual) < 1e-4);

    // checkpoint energies never increase (relative slack 1e-10)
    REQUIRE(run.checkpoint_energies.size() >= 3);
    for (std::size_t i = 0; i + 1 < run.checkpoint_energies.size(); ++i)
        CHECK(run.checkpoint_energies[i + 1] <=
              run.checkpoint_energies[i] * (1.0 + 1e-10) + 1e-300);

    CHECK(run.t_final_checkpoint >=
          run.t_final - 0.25 * cfg.dt);
    CHECK(std::fmod(run.t_final_checkpoint, cfg.checkpoint_period) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bit-for-bit determinism of a full run") {
    const SolverConfig cfg = small_config(0.7, 0.15, 16, 0.02);
    const RunResult a = run_to_equilibrium(cfg);
    const RunResult b = run_to_equilibrium(cfg);
    CHECK(a.steps == b.steps);
    CHECK(a.t_final == b.t_final);
    CHECK(a.energy == b.energy);
    CHECK(a.max_u == b.max_u);
    CHECK(a.nehari_residual == b.nehari_residual);
    for (std::size_t i = 0; i < a.final_field.values().size(); ++i)
        CHECK(a.final_field.values()[i] == b.final_field.values()[i]);
}

TEST_CASE("odd symmetry of the flow at t = 50") {
    SolverConfig pos = small_config(0.7, 0.1, 16, 0.05);
    pos.checkpoint_period = 50.0;
    pos.t_max = 50.0;
    pos.residual_tol = 1e-30; // force the full 50 time units
    SolverConfig neg = pos;
    neg.init_sign = -1;
    const RunResult a = run_to_equilibrium(pos);
    const RunResult b = run_to_equilibrium(neg);
    CHECK(a.t_final == b.t_final);
    double mismatch = 0.0;
    for (std::size_t i = 0; i < a.final_field.values().size(); ++i)
        mismatch = std::max(mismatch, std::abs(a.final_field.values()[i] +
                                               b.final_field.values()[i]));
    CHECK(mismatch < 1e-9);
}

TEST_CASE("t_max cap flags the run instead of dropping it") {
    SolverConfig cfg = small_config(0.7, 0.1, 16, 0.01);
    cfg.t_max = 1.0;
    const RunResult run = run_to_equilibrium(cfg);
    CHECK(!run.converged);
    REQUIRE(!run.flags.empty());
    CHECK(run.flags[0] == "timeout:t_max");
    CHECK(run.t_final == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("strict guard trips when the state approaches the singularity") {
    // theta this small puts u_theta within 1e-12 of 1, so the growing
    // plateau must cross the guard
    SolverConfig cfg = small_config(0.06, 0.01, 8, 0.05);
    cfg.t_max = 500.0;
    CHECK_THROWS_WITH_AS(run_to_equilibrium(cfg), doctest::Contains("guard"),
                         std::runtime_error);
}

TEST_CASE("modified mode reproduces the guarded equilibrium") {
    SolverConfig exact = small_config(0.7, 0.1, 32, 2e-3);
    SolverConfig modified = exact;
    modified.potential_mode = PotentialMode::modified;
    modified.modified_c = 10.0;
    const RunResult a = run_to_equilibrium(exact);
    const RunResult b = run_to_equilibrium(modified);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.classification == b.classification);
    CHECK(std::abs(a.max_u - b.max_u) < 1e-9);
    CHECK(std::abs(a.energy - b.energy) < 1e-9);
}
