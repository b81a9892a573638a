// sweep.cpp

#include "chmin/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace chmin {

namespace {

SolverConfig make_config(double theta, double kappa, std::uint64_t seed,
                         int init_sign, const SweepNumerics& nm) {
    SolverConfig cfg;
    cfg.kappa = kappa;
    cfg.theta = theta;
    cfg.dt = nm.dt;
    cfg.grid = build_grid(nm.length, nm.n);
    cfg.seed = seed;
    cfg.init_amplitude = nm.init_amplitude;
    cfg.init_sign = init_sign;
    cfg.residual_tol = nm.residual_tol;
    cfg.checkpoint_period = nm.checkpoint_period;
    cfg.t_max = nm.t_max;
    cfg.potential_mode = nm.potential_mode;
    cfg.modified_c = nm.modified_c;
    return cfg;
}

SweepRecord record_from_run(double theta, double kappa, std::uint64_t seed,
                            const SweepNumerics& nm, const RunResult& run) {
    SweepRecord rec;
    rec.theta = theta;
    rec.kappa = kappa;
    rec.kappa_c = kappa_c(theta, continuum_lambda1(build_grid(nm.length, nm.n)));
    rec.seed = seed;
    rec.u_theta = find_u_theta(PotentialParams(theta)).value;
    rec.max_u = run.max_u;
    rec.energy = run.energy;
    rec.nehari_residual = run.nehari_residual;
    rec.t_final = run.t_final;
    rec.classification = run.classification;
    rec.flags = run.flags;
    if (kappa >= rec.kappa_c && run.classification != Classification::trivial)
        rec.flags.push_back("anomaly:supercritical-nontrivial");
    if (kappa <= rec.kappa_c - 5e-3 && run.converged &&
        run.classification == Classification::trivial)
        rec.flags.push_back("anomaly:subcritical-trivial");
    return rec;
}

Classification parse_classification(const std::string& s) {
    if (s == "trivial") return Classification::trivial;
    if (s == "nontrivial-positive") return Classification::nontrivial_positive;
    if (s == "nontrivial-negative") return Classification::nontrivial_negative;
    if (s == "mixed-sign") return Classification::mixed_sign;
    throw std::runtime_error("unknown classification: " + s);
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) s += ';';
        s += flags[i];
    }
    return s;
}

} // namespace

SweepNumerics reference_numerics() { return {}; }

SweepNumerics fast_numerics() {
    SweepNumerics nm;
    nm.n = 64;
    nm.dt = 4e-4;
    return nm;
}

SweepRecord run_case(double theta, double kappa, std::uint64_t seed,
                     const SweepNumerics& numerics) {
    SolverConfig cfg = make_config(theta, kappa, seed, +1, numerics);
    // convergence slows down near the threshold; give those runs more room
    const double kc =
        kappa_c(theta, continuum_lambda1(build_grid(numerics.length, numerics.n)));
    if (std::abs(kappa - kc) < 0.01) cfg.t_max *= 4.0;
    const RunResult run = run_to_equilibrium(cfg);
    return record_from_run(theta, kappa, seed, numerics, run);
}

std::vector<SweepRecord> sweep_grid(const std::vector<double>& thetas,
                                    const std::vector<double>& kappas,
                                    const std::vector<std::uint64_t>& seeds,
                                    const SweepNumerics& numerics, int jobs) {
    if (thetas.empty() || kappas.empty() || seeds.empty())
        throw std::invalid_argument("sweep_grid: parameter lists must be nonempty");

    struct Case {
        double theta, kappa;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    for (double th : thetas)
        for (double k : kappas)
            for (std::uint64_t s : seeds) cases.push_back({th, k, s});

    std::vector<SweepRecord> records(cases.size());
    if (jobs <= 0) jobs = int(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, int(cases.size())));

    // independent cases on a small pool; record slots keep the output in
    // (theta, kappa, seed) order no matter which worker finishes first
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= cases.size()) return;
            const Case& c = cases[idx];
            try {
                records[idx] = run_case(c.theta, c.kappa, c.seed, numerics);
            } catch (const std::exception& e) {
                SweepRecord rec;
                rec.theta = c.theta;
                rec.kappa = c.kappa;
                rec.seed = c.seed;
                rec.flags.push_back(std::string("error:") + e.what());
                records[idx] = rec;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return records;
}

SymmetryResult symmetry_experiment(double theta, double kappa,
                                   std::uint64_t seed,
                                   const SweepNumerics& numerics) {
    SolverConfig cfg_pos = make_config(theta, kappa, seed, +1, numerics);
    SolverConfig cfg_neg = make_config(theta, kappa, seed, -1, numerics);
    const RunResult pos = run_to_equilibrium(cfg_pos);
    const RunResult neg = run_to_equilibrium(cfg_neg);

    double mismatch = 0.0;
    const auto pv = pos.final_field.values();
    const auto nv = neg.final_field.values();
    for (std::size_t i = 0; i < pv.size(); ++i)
        mismatch = std::max(mismatch, std::abs(pv[i] + nv[i]));

    return {record_from_run(theta, kappa, seed, numerics, pos),
            record_from_run(theta, kappa, seed, numerics, neg), mismatch};
}

ThresholdResult threshold_probe(double theta, double kappa_lo, double kappa_hi,
                                const std::vector<std::uint64_t>& seeds,
                                const SweepNumerics& numerics,
                                double resolution) {
    if (seeds.empty())
        throw std::invalid_argument("threshold_probe: need at least one seed");
    if (!(kappa_lo > 0.0 && kappa_lo < kappa_hi))
        throw std::invalid_argument("threshold_probe: need 0 < kappa_lo < kappa_hi");
    if (!(resolution > 0.0))
        throw std::invalid_argument("threshold_probe: resolution must be positive");

    ThresholdResult result;
    const GridGeometry g = build_grid(numerics.length, numerics.n);
    result.kappa_c_continuum = kappa_c(theta, continuum_lambda1(g));
    result.kappa_c_discrete = kappa_c(theta, discrete_lambda1(g));

    // majority vote over seeds; the classification of an unconverged run is
    // taken at t_max (near-threshold states move slowly, the label is stable),
    // so the probe skips run_case's near-threshold t_max extension
    const auto nontrivial = [&](double kappa) {
        int yes = 0, no = 0;
        for (std::uint64_t s : seeds) {
            const SolverConfig cfg = make_config(theta, kappa, s, +1, numerics);
            const SweepRecord rec =
                record_from_run(theta, kappa, s, numerics, run_to_equilibrium(cfg));
            ++result.runs;
            (rec.classification != Classification::trivial ? yes : no)++;
        }
        if (yes != 0 && no != 0) {
            std::ostringstream f;
            f << "anomaly:seed-disagreement@kappa=" << kappa;
            result.flags.push_back(f.str());
        }
        return yes > no;
    };

    if (!nontrivial(kappa_lo)) {
        std::ostringstream msg;
        msg << "threshold_probe: bracket does not straddle the threshold "
               "(kappa_lo = "
            << kappa_lo << " is already trivial)";
        throw std::runtime_error(msg.str());
    }
    if (nontrivial(kappa_hi)) {
        std::ostringstream msg;
        msg << "threshold_probe: bracket does not straddle the threshold "
               "(kappa_hi = "
            << kappa_hi << " is still nontrivial)";
        throw std::runtime_error(msg.str());
    }

    double lo = kappa_lo, hi = kappa_hi;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (nontrivial(mid))
            lo = mid;
        else
            hi = mid;
    }
    result.kappa_lo = lo;
    result.kappa_hi = hi;
    result.kappa_estimate = 0.5 * (lo + hi);
    return result;
}

void write_records_csv(const std::vector<SweepRecord>& records,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << "theta,kappa,kappa_c,seed,u_theta,max_u,energy,nehari_residual,"
           "t_final,classification,flags\n";
    char buf[512];
    for (const SweepRecord& r : records) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,",
                      r.theta, r.kappa, r.kappa_c,
                      static_cast<unsigned long long>(r.seed), r.u_theta,
                      r.max_u, r.energy, r.nehari_residual, r.t_final);
        out << buf << to_string(r.classification) << ',' << join_flags(r.flags)
            << '\n';
    }
    if (!out) throw std::runtime_error("write_records_csv: write failed for " + path);
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_records_csv: empty file " + path);
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 10)
            throw std::runtime_error("read_records_csv: short row in " + path);
        SweepRecord r;
        r.theta = std::stod(cells[0]);
        r.kappa = std::stod(cells[1]);
        r.kappa_c = std::stod(cells[2]);
        r.seed = std::stoull(cells[3]);
        r.u_theta = std::stod(cells[4]);
        r.max_u = std::stod(cells[5]);
        r.energy = std::stod(cells[6]);
        r.nehari_residual = std::stod(cells[7]);
        r.t_final = std::stod(cells[8]);
        r.classification = parse_classification(cells[9]);
        if (cells.size() > 10 && !cells[10].empty()) {
            std::stringstream fs(cells[10]);
            std::string flag;
            while (std::getline(fs, flag, ';')) r.flags.push_back(flag);
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_manifest_json(const std::string& path, const SweepNumerics& nm,
                         const std::string& records_file, double wall_seconds) {
    nlohmann::json j;
    j["generator"] = std::string("chmin ") + kVersion;
    j["records_file"] = records_file;
    j["numerics"]["length"] = nm.length;
    j["numerics"]["n"] = nm.n;
    j["numerics"]["dt"] = nm.dt;
    j["numerics"]["init_amplitude"] = nm.init_amplitude;
    j["numerics"]["residual_tol"] = nm.residual_tol;
    j["numerics"]["checkpoint_period"] = nm.checkpoint_period;
    j["numerics"]["t_max"] = nm.t_max;
    j["numerics"]["potential_mode"] =
        nm.potential_mode == PotentialMode::exact_guarded ? "exact-with-guard"
                                                          : "modified";
    // everything above is byte-stable for identical inputs; timing is the
    // one documented exception
    j["timing"]["wall_seconds"] = wall_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

} // namespace chmin
