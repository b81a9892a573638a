// dynamics.cpp

#include "chmin/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "step_kernel.hpp"

namespace chmin {

namespace {

// SplitMix64 finalizer; the (seed, i, j) -> node value map is fixed so
// initial fields are identical across platforms and run orders.
std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

double node_uniform01(std::uint64_t seed, int i, int j) {
    std::uint64_t h = mix64(seed ^ (0x9e3779b97f4a7c15ull * std::uint64_t(i + 1)));
    h = mix64(h ^ (0xc2b2ae3d27d4eb4full * std::uint64_t(j + 1)));
    // (k + 1/2) / 2^53 lies strictly inside (0,1)
    return (double(h >> 11) + 0.5) * 0x1.0p-53;
}

double modified_prime(double u, const ModifiedPotential& mp) {
    const double a = std::abs(u);
    double wp_abs;
    if (a <= mp.u_hat)
        wp_abs = 0.5 * mp.theta * (std::log1p(a) - std::log1p(-a)) - a;
    else
        wp_abs = truncated_wp1(a, mp.theta, mp.k) - a;
    return u < 0.0 ? -wp_abs : wp_abs;
}

detail::StepStats step_modified(const double* u, double* out, int n,
                                double inv_h2, double kappa, double dt,
                                const ModifiedPotential& mp) {
    const int m = n + 1;
    double rmax = 0.0, umax = 0.0;
    for (int i = 1; i < n; ++i) {
        const double* row = u + i * m;
        const double* north = u + (i + 1) * m;
        const double* south = u + (i - 1) * m;
        double* dst = out + i * m;
        for (int j = 1; j < n; ++j) {
            const double uc = row[j];
            const double lap =
                (north[j] + south[j] + row[j + 1] + row[j - 1] - 4.0 * uc) * inv_h2;
            const double r = kappa * lap - modified_prime(uc, mp);
            dst[j] = uc + dt * r;
            rmax = std::max(rmax, std::abs(r));
            umax = std::max(umax, std::abs(uc));
        }
    }
    return {rmax, umax};
}

[[noreturn]] void throw_at_offending_node(const ScalarField& u, double limit,
                                          const char* what) {
    const int n = u.n();
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            if (!(std::abs(u(i, j)) < limit) || !std::isfinite(u(i, j))) {
                std::ostringstream msg;
                msg << what << " at node (" << i << ", " << j
                    << "): u = " << u(i, j);
                throw std::runtime_error(msg.str());
            }
    std::ostringstream msg;
    msg << what << " (node not identified)";
    throw std::runtime_error(msg.str());
}

std::string checkpoint_path(const std::string& dir, double t) {
    char name[64];
    std::snprintf(name, sizeof name, "field_t%012.4f.csv", t);
    return dir + "/" + name;
}

} // namespace

void SolverConfig::validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("SolverConfig: kappa must be positive");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("SolverConfig: theta must lie in (0,1)");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(init_amplitude > 0.0 && init_amplitude < 1.0))
        throw std::invalid_argument("SolverConfig: init amplitude must lie in (0,1)");
    if (init_sign != 1 && init_sign != -1)
        throw std::invalid_argument("SolverConfig: init_sign must be +1 or -1");
    if (!(residual_tol > 0.0))
        throw std::invalid_argument("SolverConfig: residual_tol must be positive");
    if (!(checkpoint_period > 0.0))
        throw std::invalid_argument("SolverConfig: checkpoint_period must be positive");
    if (!(t_max > 0.0))
        throw std::invalid_argument("SolverConfig: t_max must be positive");
    if (potential_mode == PotentialMode::modified && !(modified_c > 1.0))
        throw std::invalid_argument("SolverConfig: modified_c must be > 1");
}

ScalarField init_random(const SolverConfig& cfg) {
    cfg.validate();
    ScalarField u(cfg.grid);
    const int n = cfg.grid.n;
    const double scale = cfg.init_sign * cfg.init_amplitude;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            u(i, j) = scale * node_uniform01(cfg.seed, i, j);
    return u;
}

double stability_bound(const SolverConfig& cfg) {
    const double h = cfg.grid.spacing;
    return h * h / (4.0 * cfg.kappa);
}

std::pair<ScalarField, double> step(const ScalarField& u, const SolverConfig& cfg) {
    cfg.validate();
    const GridGeometry& g = u.geometry();
    ScalarField out(g);
    const double ih2 = 1.0 / (g.spacing * g.spacing);
    detail::StepStats st;
    if (cfg.potential_mode == PotentialMode::exact_guarded) {
        const std::vector<double> mask = detail::interior_mask(g.n);
        st = detail::step_exact(u.values().data(), out.values().data(),
                                mask.data(), g.n, ih2, cfg.kappa, cfg.theta,
                                cfg.dt);
        if (!(st.state_absmax < 1.0 - kGuardMargin))
            throw_at_offending_node(u, 1.0 - kGuardMargin,
                                    "step: guard violation, |u| too close to 1");
    } else {
        const ModifiedPotential mp =
            build_modified_potential(PotentialParams(cfg.theta), cfg.modified_c);
        st = step_modified(u.values().data(), out.values().data(), g.n, ih2,
                           cfg.kappa, cfg.dt, mp);
    }
    if (!std::isfinite(st.residual_inf))
        throw_at_offending_node(out, std::numeric_limits<double>::infinity(),
                                "step: non-finite value produced");
    return {std::move(out), st.residual_inf};
}

RunResult run_to_equilibrium(const SolverConfig& cfg) {
    cfg.validate();
    const double dt_max = stability_bound(cfg);
    if (cfg.dt > dt_max) {
        std::ostringstream msg;
        msg << "run_to_equilibrium: dt = " << cfg.dt
            << " violates the stability bound h^2/(4 kappa) = " << dt_max;
        throw std::invalid_argument(msg.str());
    }

    const PotentialParams params(cfg.theta);
    const bool exact = cfg.potential_mode == PotentialMode::exact_guarded;
    ModifiedPotential mp{};
    if (!exact) mp = build_modified_potential(params, cfg.modified_c);

    const GridGeometry& g = cfg.grid;
    const int n = g.n;
    const double ih2 = 1.0 / (g.spacing * g.spacing);
    const bool dump = !cfg.checkpoint_dir.empty();
    if (dump) std::filesystem::create_directories(cfg.checkpoint_dir);

    ScalarField u = init_random(cfg);
    ScalarField next(g);
    const std::vector<double> mask = detail::interior_mask(n);

    RunResult res{ScalarField(g)};
    const ModifiedPotential* mp_for_energy = exact ? nullptr : &mp;
    const auto checkpoint_energy = [&](const ScalarField& f) {
        const EnergyReport rep = energy(f, cfg.kappa, params, mp_for_energy);
        // the modified flow dissipates the modified energy
        return exact ? rep.total : *rep.modified_total;
    };
    res.checkpoint_energies.push_back(checkpoint_energy(u));
    if (dump) write_field_csv(u, checkpoint_path(cfg.checkpoint_dir, 0.0));

    const double cp = cfg.checkpoint_period;
    double next_cp = cp;
    double last_recorded_t = 0.0;
    long k = 0;
    double t = 0.0;
    double residual = 0.0;
    bool converged = false;
    while (true) {
        t = double(k) * cfg.dt;
        detail::StepStats st;
        if (exact) {
            st = detail::step_exact(u.values().data(), next.values().data(),
                                    mask.data(), n, ih2, cfg.kappa, cfg.theta,
                                    cfg.dt);
            if (!(st.state_absmax < 1.0 - kGuardMargin))
                throw_at_offending_node(
                    u, 1.0 - kGuardMargin,
                    "run_to_equilibrium: guard violation, |u| too close to 1");
        } else {
            st = step_modified(u.values().data(), next.values().data(), n, ih2,
                               cfg.kappa, cfg.dt, mp);
            if (st.state_absmax > 1.0)
                throw_at_offending_node(u, 1.0,
                                        "run_to_equilibrium: instability, |u| > 1");
        }
        if (!std::isfinite(st.residual_inf))
            throw_at_offending_node(next, std::numeric_limits<double>::infinity(),
                                    "run_to_equilibrium: non-finite value produced");
        residual = st.residual_inf;

        // Stop at the first t >= checkpoint_period with the residual below
        // tolerance, whichever comes later; t_max is the hard cap.
        if (t >= cp - 0.25 * cfg.dt && residual < cfg.residual_tol) {
            converged = true;
            break;
        }
        if (t >= cfg.t_max) break;

        std::swap(u, next);
        ++k;
        const double t_new = double(k) * cfg.dt;
        if (t_new >= next_cp - 0.25 * cfg.dt) {
            res.checkpoint_energies.push_back(checkpoint_energy(u));
            if (dump) write_field_csv(u, checkpoint_path(cfg.checkpoint_dir, t_new));
            last_recorded_t = t_new;
            next_cp += cp;
        }
    }

    if (t > last_recorded_t + 0.25 * cfg.dt)
        res.checkpoint_energies.push_back(checkpoint_energy(u));

    res.final_field = std::move(u);
    res.steps = k;
    res.t_final = t;
    res.t_final_checkpoint = std::ceil(t / cp - 1e-9) * cp;
    res.residual_inf = residual;
    res.converged = converged;
    if (!converged) res.flags.push_back("timeout:t_max");

    double mx = res.final_field(1, 1), mn = mx;
    for (double v : res.final_field.values()) {
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    res.max_u = mx;
    res.min_u = mn;

    const double absmax = inf_norm(res.final_field);
    if (!exact && absmax > 1.0) {
        res.energy = *energy(res.final_field, cfg.kappa, params, &mp).modified_total;
        res.flags.push_back("energy:modified-only");
        res.nehari_residual =
            nehari_residual(res.final_field, cfg.kappa, params, GuardMode::clamped);
        res.flags.push_back("nehari:clamped");
    } else {
        res.energy = energy(res.final_field, cfg.kappa, params, mp_for_energy).total;
        res.nehari_residual = nehari_residual(res.final_field, cfg.kappa, params,
                                              absmax < 1.0 - kGuardMargin
                                                  ? GuardMode::strict
                                                  : GuardMode::clamped);
    }
    res.classification = classify(res.max_u, res.min_u);

    if (dump && converged)
        write_field_csv(res.final_field, checkpoint_path(cfg.checkpoint_dir, t));
    return res;
}

} // namespace chmin
