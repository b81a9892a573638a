// diagnostics.hpp
// Discrete energy, Nehari residual, fiber maps Phi_u(s) = E(s u),
// the bifurcation threshold, and equilibrium classification.

#ifndef CHMIN_DIAGNOSTICS_HPP
#define CHMIN_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chmin/field.hpp"
#include "chmin/potential.hpp"

namespace chmin {

struct EnergyReport {
    double gradient_part;   // (kappa/2) * edge-gradient sum
    double potential_part;  // trapezoidal quadrature of W
    double total;           // gradient_part + potential_part
    std::optional<double> modified_total; // same with the modified potential
};

// Trapezoidal node weights (1 interior, 1/2 edge, 1/4 corner) for the
// potential term, all lattice edges for the gradient term.  Requires
// |u| <= 1 everywhere for the exact part.  modified_total is filled
// when m is supplied.
EnergyReport energy(const ScalarField& u, double kappa,
                    const PotentialParams& p,
                    const ModifiedPotential* m = nullptr);

// <dE(u), u> = kappa * sum_edges (du)^2 + sum_nodes W'(u) u w h^2.
// Vanishes at critical points of the energy.
double nehari_residual(const ScalarField& u, double kappa,
                       const PotentialParams& p,
                       GuardMode mode = GuardMode::strict);

struct PhiScan {
    std::vector<double> s_values;
    std::vector<double> phi;   // E~(s u)
    std::vector<double> dphi;  // d/ds E~(s u)
    std::optional<std::pair<double, double>> sign_change; // first bracket of dphi
};

// Scans the fiber map along the ray s -> s*u using the modified energy, so
// every s is admissible even when s*max|u| crosses 1.
PhiScan phi_scan(const ScalarField& u, double kappa, const PotentialParams& p,
                 const ModifiedPotential& m, const std::vector<double>& s_grid);

// Threshold kappa_c = (1-theta)/lambda1.
double kappa_c(double theta, double lambda1);

// Upper bound for the last sign change of d/ds E~(s phi1):
// 4 sqrt((1-theta-kappa*lambda1)/(3 theta)) with lambda1 = 2 pi^2/L^2,
// from the closed-form integrals of phi1^2 and phi1^4 on the square.
double s_phi_bound(double theta, double kappa, const GridGeometry& g);

enum class Classification {
    trivial,
    nontrivial_positive,
    nontrivial_negative,
    mixed_sign,
};

std::string to_string(Classification c);

Classification classify(double max_u, double min_u, double tol_trivial = 1e-3);

// Serialization
std::string energy_report_json(const EnergyReport& r);
std::string phi_scan_json(const PhiScan& s);
void write_phi_scan_csv(const PhiScan& s, const std::string& path);

} // namespace chmin

#endif
