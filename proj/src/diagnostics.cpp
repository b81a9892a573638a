// diagnostics.cpp

#include "chmin/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace chmin {

namespace {

// Trapezoidal node weight: 1 interior, 1/2 edge, 1/4 corner.
double node_weight(int i, int j, int n) {
    double w = 1.0;
    if (i == 0 || i == n) w *= 0.5;
    if (j == 0 || j == n) w *= 0.5;
    return w;
}

// sum over all x- and y-edges of (difference)^2; the h^2 quadrature weight
// cancels against the 1/h^2 of the squared difference quotient.
double edge_gradient_sum(const ScalarField& u) {
    const int n = u.n();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double d = u(i + 1, j) - u(i, j);
            s += d * d;
        }
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = u(i, j + 1) - u(i, j);
            s += d * d;
        }
    return s;
}

} // namespace

EnergyReport energy(const ScalarField& u, double kappa,
                    const PotentialParams& p, const ModifiedPotential* m) {
    const int n = u.n();
    const double h2 = u.geometry().spacing * u.geometry().spacing;

    EnergyReport rep{};
    rep.gradient_part = 0.5 * kappa * edge_gradient_sum(u);

    double pot = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            pot += w_value(u(i, j), p) * node_weight(i, j, n);
    rep.potential_part = pot * h2;
    rep.total = rep.gradient_part + rep.potential_part;

    if (m != nullptr) {
        double mpot = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                mpot += modified_values(u(i, j), *m).w * node_weight(i, j, n);
        rep.modified_total = rep.gradient_part + mpot * h2;
    }
    return rep;
}

double nehari_residual(const ScalarField& u, double kappa,
                       const PotentialParams& p, GuardMode mode) {
    const int n = u.n();
    const double h2 = u.geometry().spacing * u.geometry().spacing;
    double pairing = 0.0;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            const double v = u(i, j);
            pairing += w_prime(v, p, mode) * v;
        }
    return kappa * edge_gradient_sum(u) + pairing * h2;
}

PhiScan phi_scan(const ScalarField& u, double kappa, const PotentialParams& p,
                 const ModifiedPotential& m, const std::vector<double>& s_grid) {
    const int n = u.n();
    const double h2 = u.geometry().spacing * u.geometry().spacing;
    const double grad = edge_gradient_sum(u);

    PhiScan scan;
    scan.s_values = s_grid;
    scan.phi.reserve(s_grid.size());
    scan.dphi.reserve(s_grid.size());
    for (double s : s_grid) {
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("phi_scan: s grid must be finite and >= 0");
        double pot = 0.0;
        double pairing = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double v = u(i, j);
                const ModifiedValues mv = modified_values(s * v, m);
                const double w = node_weight(i, j, n);
                pot += mv.w * w;
                pairing += mv.wp * v * w;
            }
        scan.phi.push_back(0.5 * kappa * s * s * grad + pot * h2);
        scan.dphi.push_back(kappa * s * grad + pairing * h2);
    }
    for (std::size_t i = 0; i + 1 < scan.dphi.size(); ++i) {
        if (scan.dphi[i] == 0.0) continue; // s = 0 is always a critical point
        if (scan.dphi[i] * scan.dphi[i + 1] <= 0.0) {
            scan.sign_change = {scan.s_values[i], scan.s_values[i + 1]};
            break;
        }
    }
    return scan;
}

double kappa_c(double theta, double lambda1) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("kappa_c: theta must lie in (0,1)");
    if (!(lambda1 > 0.0))
        throw std::invalid_argument("kappa_c: lambda1 must be positive");
    return (1.0 - theta) / lambda1;
}

double s_phi_bound(double theta, double kappa, const GridGeometry& g) {
    const double lam = continuum_lambda1(g);
    const double margin = 1.0 - theta - kappa * lam;
    if (!(margin > 0.0))
        throw std::invalid_argument(
            "s_phi_bound: requires kappa < (1-theta)/lambda1");
    // closed-form integrals on the square: int phi1^2 = L^2/4, int phi1^4 = 9L^2/64
    return 4.0 * std::sqrt(margin / (3.0 * theta));
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::trivial: return "trivial";
        case Classification::nontrivial_positive: return "nontrivial-positive";
        case Classification::nontrivial_negative: return "nontrivial-negative";
        case Classification::mixed_sign: return "mixed-sign";
    }
    return "unknown";
}

Classification classify(double max_u, double min_u, double tol_trivial) {
    const double amp = std::max(std::abs(max_u), std::abs(min_u));
    if (amp < tol_trivial) return Classification::trivial;
    if (min_u > -tol_trivial) return Classification::nontrivial_positive;
    if (max_u < tol_trivial) return Classification::nontrivial_negative;
    return Classification::mixed_sign;
}

std::string energy_report_json(const EnergyReport& r) {
    nlohmann::json j;
    j["gradient_part"] = r.gradient_part;
    j["potential_part"] = r.potential_part;
    j["total"] = r.total;
    if (r.modified_total) j["modified_total"] = *r.modified_total;
    return j.dump(2);
}

std::string phi_scan_json(const PhiScan& s) {
    nlohmann::json j;
    j["s"] = s.s_values;
    j["phi"] = s.phi;
    j["dphi"] = s.dphi;
    if (s.sign_change) j["sign_change"] = {s.sign_change->first, s.sign_change->second};
    return j.dump(2);
}

void write_phi_scan_csv(const PhiScan& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_phi_scan_csv: cannot open " + path);
    out << "s,phi,dphi\n";
    char buf[128];
    for (std::size_t i = 0; i < s.s_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.s_values[i],
                      s.phi[i], s.dphi[i]);
        out << buf;
    }
}

} // namespace chmin
