// chmin.cpp — command-line driver: single runs, sweeps, u_theta tables,
// potential dumps, fiber-map scans, and the threshold probe.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure or
// anomaly. All outputs are byte-identical across reruns with the same flags,
// except the "timing" object of the sweep manifest.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chmin/diagnostics.hpp"
#include "chmin/dynamics.hpp"
#include "chmin/field.hpp"
#include "chmin/potential.hpp"
#include "chmin/sweep.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

// --config FILE: JSON with the same keys as the long flags; explicit flags
// win. Applied by seeding the option variables before the parse.
json load_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        std::string path;
        if (a == "--config" && i + 1 < argc)
            path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0)
            path = a.substr(9);
        else
            continue;
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        json j;
        in >> j;
        return j;
    }
    return json::object();
}

// The key space is shared by all subcommands ("theta" is a list for utheta
// and sweep, a scalar for solve); a key only applies where its type fits.
template <typename T>
void from_config(const json& cfg, const char* key, T& var) {
    if (!cfg.contains(key)) return;
    try {
        var = cfg.at(key).template get<T>();
    } catch (const json::exception&) {
    }
}

struct NumericsFlags {
    int n = 128;
    double length = chmin::kDefaultLength;
    double dt = 1e-4;
    double a0 = 0.1;
    double residual_tol = 1e-7;
    double checkpoint_period = 50.0;
    double t_max = 5000.0;
    std::string mode = "exact";
    double modified_c = 10.0;
    bool fast = false;
    bool n_set = false;
    bool dt_set = false;

    void add_to(CLI::App* cmd, const json& cfg) {
        n_set = cfg.contains("n");
        dt_set = cfg.contains("dt");
        from_config(cfg, "n", n);
        from_config(cfg, "length", length);
        from_config(cfg, "dt", dt);
        from_config(cfg, "a0", a0);
        from_config(cfg, "residual-tol", residual_tol);
        from_config(cfg, "checkpoint-period", checkpoint_period);
        from_config(cfg, "t-max", t_max);
        from_config(cfg, "mode", mode);
        from_config(cfg, "modified-c", modified_c);
        cmd->add_option("--n", n, "cells per side");
        cmd->add_option("--length", length, "domain side length L");
        cmd->add_option("--dt", dt, "time step");
        cmd->add_option("--a0", a0, "initial amplitude");
        cmd->add_option("--residual-tol", residual_tol, "equilibrium residual tol");
        cmd->add_option("--checkpoint-period", checkpoint_period,
                        "checkpoint period (also the minimum run time)");
        cmd->add_option("--t-max", t_max, "time cap");
        cmd->add_option("--mode", mode, "potential mode: exact or modified")
            ->check(CLI::IsMember({"exact", "modified"}));
        cmd->add_option("--modified-c", modified_c,
                        "threshold constant C for the modified potential");
        cmd->add_flag("--fast", fast, "coarse-suite numerics (N=64, dt=4e-4)");
    }

    // --fast switches the n/dt defaults; an explicit --n/--dt or a config
    // value still wins.
    chmin::SweepNumerics numerics(const CLI::App* cmd) const {
        chmin::SweepNumerics nm =
            fast ? chmin::fast_numerics() : chmin::reference_numerics();
        if (!fast || n_set || cmd->count("--n")) nm.n = n;
        if (!fast || dt_set || cmd->count("--dt")) nm.dt = dt;
        nm.length = length;
        nm.init_amplitude = a0;
        nm.residual_tol = residual_tol;
        nm.checkpoint_period = checkpoint_period;
        nm.t_max = t_max;
        nm.potential_mode = mode == "modified" ? chmin::PotentialMode::modified
                                               : chmin::PotentialMode::exact_guarded;
        nm.modified_c = modified_c;
        return nm;
    }
};

int cmd_utheta(const std::vector<double>& thetas, double tol,
               const std::string& out_file, const std::string& format) {
    std::string table = "theta\tu_theta\titerations\tresidual\n";
    json rows = json::array();
    for (double th : thetas) {
        const chmin::RootResult r = chmin::find_u_theta(chmin::PotentialParams(th), tol);
        table += fmt(th) + "\t" + fmt6(r.value) + "\t" + std::to_string(r.iterations) +
                 "\t" + fmt(r.residual) + "\n";
        rows.push_back({{"theta", th},
                        {"u_theta", r.value},
                        {"iterations", r.iterations},
                        {"residual", r.residual}});
    }
    std::cout << table;
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot open " + out_file);
        if (format == "json")
            out << rows.dump(2) << "\n";
        else {
            out << "theta,u_theta,iterations,residual\n";
            for (const auto& r : rows)
                out << fmt(r["theta"].get<double>()) << ','
                    << fmt(r["u_theta"].get<double>()) << ','
                    << r["iterations"].get<int>() << ','
                    << fmt(r["residual"].get<double>()) << "\n";
        }
    }
    return 0;
}

int cmd_potential_table(double theta, double c, double umin, double umax,
                        int samples, const std::string& path) {
    const chmin::PotentialParams p(theta);
    const chmin::ModifiedPotential m = chmin::build_modified_potential(p, c);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# theta=" << fmt(theta) << " u_theta=" << fmt(m.u_theta)
        << " u_hat=" << fmt(m.u_hat) << " k=" << m.k << " C=" << fmt(c)
        << " wp_jump=" << fmt(m.wp_jump) << "\n";
    out << "u,W,Wp,Wpp,Wt,Wtp\n";
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double u = umin + (umax - umin) * i / double(samples - 1);
        double w, wp, wpp;
        if (std::abs(u) > 1.0) {
            w = inf;
            wp = std::copysign(inf, u);
            wpp = inf;
        } else {
            w = chmin::w_value(u, p);
            if (std::abs(u) >= 1.0) {
                wp = std::copysign(inf, u);
                wpp = inf;
            } else {
                wp = chmin::w_prime(u, p, chmin::GuardMode::clamped);
                wpp = chmin::w_second(u, p, chmin::GuardMode::clamped);
            }
        }
        const chmin::ModifiedValues mv = chmin::modified_values(u, m);
        out << fmt(u) << ',' << fmt(w) << ',' << fmt(wp) << ',' << fmt(wpp) << ','
            << fmt(mv.w) << ',' << fmt(mv.wp) << "\n";
    }
    std::cout << "wrote " << path << " (u_hat=" << fmt(m.u_hat) << ", k=" << m.k
              << ")\n";
    return 0;
}

json run_summary_json(const chmin::SolverConfig& cfg, const chmin::RunResult& run) {
    json j;
    j["config"]["theta"] = cfg.theta;
    j["config"]["kappa"] = cfg.kappa;
    j["config"]["n"] = cfg.grid.n;
    j["config"]["length"] = cfg.grid.length;
    j["config"]["dt"] = cfg.dt;
    j["config"]["seed"] = cfg.seed;
    j["config"]["init_amplitude"] = cfg.init_amplitude;
    j["config"]["init_sign"] = cfg.init_sign;
    j["config"]["residual_tol"] = cfg.residual_tol;
    j["config"]["checkpoint_period"] = cfg.checkpoint_period;
    j["config"]["t_max"] = cfg.t_max;
    j["config"]["mode"] = cfg.potential_mode == chmin::PotentialMode::modified
                              ? "modified"
                              : "exact";
    j["result"]["max_u"] = run.max_u;
    j["result"]["min_u"] = run.min_u;
    j["result"]["steps"] = run.steps;
    j["result"]["t_final"] = run.t_final;
    j["result"]["t_final_checkpoint"] = run.t_final_checkpoint;
    j["result"]["energy"] = run.energy;
    j["result"]["nehari_residual"] = run.nehari_residual;
    j["result"]["residual_inf"] = run.residual_inf;
    j["result"]["classification"] = chmin::to_string(run.classification);
    j["result"]["converged"] = run.converged;
    j["result"]["checkpoint_energies"] = run.checkpoint_energies;
    j["result"]["flags"] = run.flags;
    j["derived"]["kappa_c"] =
        chmin::kappa_c(cfg.theta, chmin::continuum_lambda1(cfg.grid));
    j["derived"]["lambda1_discrete"] = chmin::discrete_lambda1(cfg.grid);
    j["derived"]["stability_bound"] = chmin::stability_bound(cfg);
    j["derived"]["u_theta"] =
        chmin::find_u_theta(chmin::PotentialParams(cfg.theta)).value;
    return j;
}

int cmd_solve(const chmin::SolverConfig& cfg, const std::string& dir, bool image) {
    const chmin::RunResult run = chmin::run_to_equilibrium(cfg);

    json j = run_summary_json(cfg, run);
    j["result"]["energy_breakdown"] = json::parse(chmin::energy_report_json(
        chmin::energy(run.final_field, cfg.kappa, chmin::PotentialParams(cfg.theta))));
    std::ofstream summary(out_path(dir, "summary.json"));
    summary << j.dump(2) << "\n";
    chmin::write_field_csv(run.final_field, out_path(dir, "field.csv"));
    if (image) {
        chmin::write_field_pgm16(run.final_field, out_path(dir, "field.pgm"));
        chmin::write_field_sidecar(out_path(dir, "field.json"), cfg.grid, cfg.theta,
                                   cfg.kappa, run.t_final);
    }

    std::cout << "max_u\tenergy\tclassification\tt_final\tresidual_inf\n"
              << fmt(run.max_u) << '\t' << fmt(run.energy) << '\t'
              << chmin::to_string(run.classification) << '\t' << fmt(run.t_final)
              << '\t' << fmt(run.residual_inf) << "\n";
    if (!run.converged)
        std::cerr << "warning: t_max reached before the residual tolerance\n";
    return 0;
}

int cmd_sweep(std::vector<double> thetas, std::vector<double> kappas,
              std::vector<std::uint64_t> seeds, const std::string& preset,
              const chmin::SweepNumerics& nm, int jobs, const std::string& dir) {
    if (preset == "table1") {
        thetas = {0.3, 0.5, 0.7, 0.9, 0.95};
        kappas = {0.02};
        seeds = {1};
    } else if (preset == "table2") {
        thetas = {0.7};
        kappas = {0.02, 0.05, 0.10, 0.15, 0.20, 0.25, 0.28, 0.299};
        seeds = {1};
    } else if (!preset.empty()) {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    if (thetas.empty() || kappas.empty())
        throw std::invalid_argument("sweep: theta and kappa lists must be nonempty");
    if (seeds.empty()) seeds = {1};

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<chmin::SweepRecord> records =
        chmin::sweep_grid(thetas, kappas, seeds, nm, jobs);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string csv = out_path(dir, "records.csv");
    chmin::write_records_csv(records, csv);
    chmin::write_manifest_json(out_path(dir, "manifest.json"), nm, "records.csv",
                               wall);

    std::cout << "theta\tkappa\tseed\tu_theta\tmax_u\tenergy\tclassification\tflags\n";
    bool anomaly = false;
    for (const auto& r : records) {
        std::string flags;
        for (const auto& f : r.flags) {
            if (!flags.empty()) flags += ';';
            flags += f;
            if (f.rfind("anomaly:", 0) == 0 || f.rfind("error:", 0) == 0)
                anomaly = true;
        }
        std::cout << fmt(r.theta) << '\t' << fmt(r.kappa) << '\t' << r.seed << '\t'
                  << fmt6(r.u_theta) << '\t' << fmt6(r.max_u) << '\t'
                  << fmt6(r.energy) << '\t' << chmin::to_string(r.classification)
                  << '\t' << flags << "\n";
    }

    // strict decay of max_u in kappa, per (theta, seed) group, in list order
    bool monotone = true;
    for (double th : thetas)
        for (std::uint64_t s : seeds) {
            double prev = std::numeric_limits<double>::infinity();
            for (const auto& r : records)
                if (r.theta == th && r.seed == s) {
                    if (!(r.max_u < prev)) monotone = false;
                    prev = r.max_u;
                }
        }
    if (kappas.size() > 1)
        std::cout << "monotonicity (max_u strictly decreasing in kappa): "
                  << (monotone ? "ok" : "violated") << "\n";
    std::cout << "wrote " << csv << "\n";
    return anomaly ? 3 : 0;
}

int cmd_phi_scan(bool use_eigenfunction, const std::string& field_file,
                 double theta, double kappa, double c, double length, int n,
                 double smax, int samples, const std::string& dir,
                 const std::string& format) {
    const chmin::PotentialParams p(theta);
    const chmin::ModifiedPotential m = chmin::build_modified_potential(p, c);
    chmin::ScalarField u = use_eigenfunction
                               ? chmin::eigenfunction(chmin::build_grid(length, n))
                               : chmin::read_field_csv(field_file, length);

    std::vector<double> s_grid(samples);
    for (int i = 0; i < samples; ++i) s_grid[i] = smax * i / double(samples - 1);
    const chmin::PhiScan scan = chmin::phi_scan(u, kappa, p, m, s_grid);

    const std::string csv = out_path(dir, "phi_scan.csv");
    chmin::write_phi_scan_csv(scan, csv);
    if (format == "json") {
        std::ofstream out(out_path(dir, "phi_scan.json"));
        out << chmin::phi_scan_json(scan) << "\n";
    }

    const double kc = chmin::kappa_c(theta, chmin::continuum_lambda1(u.geometry()));
    if (kappa < kc)
        std::cout << "s_phi_bound\t"
                  << fmt(chmin::s_phi_bound(theta, kappa, u.geometry())) << "\n";
    if (scan.sign_change)
        std::cout << "sign_change\t[" << fmt(scan.sign_change->first) << ", "
                  << fmt(scan.sign_change->second) << "]\n";
    else
        std::cout << "sign_change\tnone\n";
    std::cout << "wrote " << csv << "\n";
    return 0;
}

int cmd_threshold(double theta, double lo, double hi, double resolution,
                  const std::vector<std::uint64_t>& seeds,
                  const chmin::SweepNumerics& nm, const std::string& dir) {
    const chmin::ThresholdResult r = chmin::threshold_probe(
        theta, lo, hi, seeds.empty() ? std::vector<std::uint64_t>{1} : seeds, nm,
        resolution);
    std::cout << "kappa_bracket\t[" << fmt(r.kappa_lo) << ", " << fmt(r.kappa_hi)
              << "]\n"
              << "kappa_estimate\t" << fmt(r.kappa_estimate) << "\n"
              << "kappa_c_continuum\t" << fmt(r.kappa_c_continuum) << "\n"
              << "kappa_c_discrete\t" << fmt(r.kappa_c_discrete) << "\n"
              << "runs\t" << r.runs << "\n";
    json j;
    j["theta"] = theta;
    j["kappa_lo"] = r.kappa_lo;
    j["kappa_hi"] = r.kappa_hi;
    j["kappa_estimate"] = r.kappa_estimate;
    j["kappa_c_continuum"] = r.kappa_c_continuum;
    j["kappa_c_discrete"] = r.kappa_c_discrete;
    j["runs"] = r.runs;
    j["flags"] = r.flags;
    std::ofstream out(out_path(dir, "threshold.json"));
    out << j.dump(2) << "\n";
    for (const auto& f : r.flags)
        if (f.rfind("anomaly:", 0) == 0) return 3;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimizers of the Cahn-Hilliard energy with the logarithmic "
                 "potential under zero Dirichlet data, via Allen-Cahn flow"};
    app.set_version_flag("--version", std::string("chmin ") + chmin::kVersion);
    app.require_subcommand(1);

    json cfg_file;
    try {
        cfg_file = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::string output_dir = ".";
    std::string format = "csv";
    std::string config_path;
    from_config(cfg_file, "output-dir", output_dir);
    from_config(cfg_file, "format", format);
    app.add_option("--output-dir", output_dir, "directory for output files")
        ->envname("CHMIN_OUTPUT_DIR");
    app.add_option("--format", format, "file format for tables")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", config_path, "JSON config file (flags override)");

    // ---- utheta ----
    auto* utheta = app.add_subcommand("utheta", "positive minimizer of W");
    utheta->fallthrough();
    std::vector<double> ut_thetas;
    double ut_tol = 1e-14;
    std::string ut_out;
    from_config(cfg_file, "theta", ut_thetas);
    from_config(cfg_file, "tol", ut_tol);
    utheta->add_option("--theta", ut_thetas, "temperatures in (0,1)")->delimiter(',');
    utheta->add_option("--tol", ut_tol, "Newton tolerance");
    utheta->add_option("--out", ut_out, "optional output file");

    // ---- potential-table ----
    auto* ptable = app.add_subcommand("potential-table",
                                      "dump W, W', W'' and the modified potential");
    double pt_theta = 0.7, pt_c = 10.0, pt_umin = -1.5, pt_umax = 1.5;
    int pt_samples = 601;
    std::string pt_out;
    from_config(cfg_file, "theta", pt_theta);
    from_config(cfg_file, "c", pt_c);
    ptable->fallthrough();
    ptable->add_option("--theta", pt_theta, "temperature");
    ptable->add_option("--c", pt_c, "threshold constant C");
    ptable->add_option("--umin", pt_umin, "table start");
    ptable->add_option("--umax", pt_umax, "table end");
    ptable->add_option("--samples", pt_samples, "number of rows")
        ->check(CLI::Range(2, 10000000));
    ptable->add_option("--out", pt_out, "output CSV (default potential_table.csv)");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "run one flow to equilibrium");
    double sv_theta = 0.7, sv_kappa = 0.02;
    std::uint64_t sv_seed = 1;
    int sv_sign = 1;
    bool sv_image = false;
    std::string sv_checkpoints;
    NumericsFlags sv_nm;
    from_config(cfg_file, "theta", sv_theta);
    from_config(cfg_file, "kappa", sv_kappa);
    from_config(cfg_file, "seed", sv_seed);
    solve->fallthrough();
    solve->add_option("--theta", sv_theta, "temperature");
    solve->add_option("--kappa", sv_kappa, "transition layer parameter");
    solve->add_option("--seed", sv_seed, "PRNG seed");
    solve->add_option("--sign", sv_sign, "initial data sign (+1 or -1)");
    sv_nm.add_to(solve, cfg_file);
    solve->add_flag("--image", sv_image, "also write a 16-bit grayscale PGM");
    solve->add_option("--checkpoints", sv_checkpoints,
                      "directory for trajectory checkpoints");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "grid of (theta, kappa, seed) runs");
    std::vector<double> sw_thetas, sw_kappas;
    std::vector<std::uint64_t> sw_seeds;
    std::string sw_preset;
    int sw_jobs = 0;
    NumericsFlags sw_nm;
    from_config(cfg_file, "theta", sw_thetas);
    from_config(cfg_file, "kappa", sw_kappas);
    from_config(cfg_file, "seeds", sw_seeds);
    from_config(cfg_file, "preset", sw_preset);
    sweep->fallthrough();
    sweep->add_option("--theta", sw_thetas, "temperatures")->delimiter(',');
    sweep->add_option("--kappa", sw_kappas, "kappa values")->delimiter(',');
    sweep->add_option("--seeds", sw_seeds, "seeds (default 1)")->delimiter(',');
    sweep->add_option("--preset", sw_preset, "table1 or table2");
    sweep->add_option("--jobs", sw_jobs, "worker pool size (default: cores)");
    sw_nm.add_to(sweep, cfg_file);

    // ---- phi-scan ----
    auto* pscan = app.add_subcommand("phi-scan", "fiber map s -> E~(s u)");
    bool ps_eigen = false;
    std::string ps_field;
    double ps_theta = 0.7, ps_kappa = 0.02, ps_c = 10.0,
           ps_length = chmin::kDefaultLength, ps_smax = 3.0;
    int ps_n = 128, ps_samples = 121;
    from_config(cfg_file, "theta", ps_theta);
    from_config(cfg_file, "kappa", ps_kappa);
    pscan->add_flag("--eigenfunction", ps_eigen, "scan the first eigenfunction");
    pscan->add_option("--field", ps_field, "scan a saved field CSV");
    pscan->fallthrough();
    pscan->add_option("--theta", ps_theta, "temperature");
    pscan->add_option("--kappa", ps_kappa, "transition layer parameter");
    pscan->add_option("--c", ps_c, "threshold constant C");
    pscan->add_option("--length", ps_length, "domain side length L");
    pscan->add_option("--n", ps_n, "cells per side (eigenfunction source)");
    pscan->add_option("--smax", ps_smax, "scan upper end");
    pscan->add_option("--samples", ps_samples, "scan points")->check(CLI::Range(2, 1000000));

    // ---- threshold ----
    auto* thr = app.add_subcommand("threshold", "bisect the bifurcation threshold");
    double th_theta = 0.7, th_lo = 0.0, th_hi = 0.0, th_res = 5e-3;
    std::vector<std::uint64_t> th_seeds;
    NumericsFlags th_nm;
    th_nm.t_max = 4000.0; // classification probe; runs far from threshold stop early
    from_config(cfg_file, "theta", th_theta);
    thr->fallthrough();
    thr->add_option("--theta", th_theta, "temperature");
    thr->add_option("--lo", th_lo, "bracket start (nontrivial side)");
    thr->add_option("--hi", th_hi, "bracket end (trivial side)");
    thr->add_option("--resolution", th_res, "target bracket width");
    thr->add_option("--seeds", th_seeds, "seeds")->delimiter(',');
    th_nm.add_to(thr, cfg_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*utheta) {
            if (ut_thetas.empty())
                throw std::invalid_argument("utheta: need --theta (flag or config)");
            return cmd_utheta(ut_thetas, ut_tol, ut_out, format);
        }
        if (*ptable) {
            const std::string path =
                pt_out.empty() ? out_path(output_dir, "potential_table.csv") : pt_out;
            return cmd_potential_table(pt_theta, pt_c, pt_umin, pt_umax, pt_samples,
                                       path);
        }
        if (*solve) {
            chmin::SolverConfig cfg;
            cfg.theta = sv_theta;
            cfg.kappa = sv_kappa;
            cfg.seed = sv_seed;
            cfg.init_sign = sv_sign;
            const chmin::SweepNumerics nm = sv_nm.numerics(solve);
            cfg.grid = chmin::build_grid(nm.length, nm.n);
            cfg.dt = nm.dt;
            cfg.init_amplitude = nm.init_amplitude;
            cfg.residual_tol = nm.residual_tol;
            cfg.checkpoint_period = nm.checkpoint_period;
            cfg.t_max = nm.t_max;
            cfg.potential_mode = nm.potential_mode;
            cfg.modified_c = nm.modified_c;
            cfg.checkpoint_dir = sv_checkpoints;
            return cmd_solve(cfg, output_dir, sv_image);
        }
        if (*sweep)
            return cmd_sweep(sw_thetas, sw_kappas, sw_seeds, sw_preset,
                             sw_nm.numerics(sweep), sw_jobs, output_dir);
        if (*pscan) {
            if (!ps_eigen && ps_field.empty())
                throw std::invalid_argument(
                    "phi-scan: need --eigenfunction or --field FILE");
            return cmd_phi_scan(ps_eigen, ps_field, ps_theta, ps_kappa, ps_c,
                                ps_length, ps_n, ps_smax, ps_samples, output_dir,
                                format);
        }
        if (*thr) {
            const chmin::SweepNumerics nm = th_nm.numerics(thr);
            const chmin::GridGeometry g = chmin::build_grid(nm.length, nm.n);
            const double kc = chmin::kappa_c(th_theta, chmin::continuum_lambda1(g));
            if (!thr->count("--lo")) th_lo = std::max(0.5 * kc, kc - 0.05);
            if (!thr->count("--hi")) th_hi = kc + 0.05;
            return cmd_threshold(th_theta, th_lo, th_hi, th_res, th_seeds, nm,
                                 output_dir);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
