// potential.hpp
// Flory-Huggins (logarithmic) double-well potential, its minimizer u_theta,
// and the globally defined polynomial regularization used beyond |u| = u_hat.

#ifndef CHMIN_POTENTIAL_HPP
#define CHMIN_POTENTIAL_HPP

#include <cstdint>

namespace chmin {

// W'(u) has a logarithmic singularity at |u| = 1; "strict" refuses to
// evaluate within kGuardMargin of it, "clamped" evaluates at the margin.
inline constexpr double kGuardMargin = 1e-12;

enum class GuardMode { strict, clamped };

struct PotentialParams {
    double theta;

    explicit PotentialParams(double theta_in);
};

struct PotentialValues {
    double w;
    double wp;
    double wpp;
};

// W(u)  = (theta/2)((1-u)ln(1-u) + (1+u)ln(1+u)) + (1-u^2)/2,  |u| <= 1,
// with 0*ln 0 := 0 so W(+-1) = theta ln 2.
double w_value(double u, const PotentialParams& p);

// W'(u) = (theta/2) ln((1+u)/(1-u)) - u, |u| < 1 (guarded near the ends).
double w_prime(double u, const PotentialParams& p,
               GuardMode mode = GuardMode::strict);

// W''(u) = theta/(1-u^2) - 1.
double w_second(double u, const PotentialParams& p,
                GuardMode mode = GuardMode::strict);

PotentialValues potential_values(double u, const PotentialParams& p,
                                 GuardMode mode = GuardMode::strict);

struct RootResult {
    double value;
    int iterations;
    double residual;   // |W'(value)|
};

// Positive root of W' in (0,1): Newton from the spinodal point sqrt(1-theta)
// with bisection safeguarding on the bracket (sqrt(1-theta), 1).
RootResult find_u_theta(const PotentialParams& p, double tol = 1e-14);

// Data for the modified potential: W is kept exactly on [-u_hat, u_hat] and
// continued by the degree-(2k+2) polynomial primitive of the truncated
// odd series of W1' outside, minus W2(u) = (u^2-1)/2.  The construction
// keeps W strictly increasing on [u_hat, inf) so the only minimizers of the
// modified potential are +-u_theta.
struct ModifiedPotential {
    double theta;
    double u_theta;
    double u_hat;          // anchor, u_theta < u_hat < 1
    int k;                 // truncation order of the odd series
    double threshold_c;    // convexity threshold C used for the selection
    double w1_at_uhat;     // W1(u_hat)
    double series_at_uhat; // primitive of the truncated series at u_hat
    double wp_jump;        // W~'(u_hat+) - W'(u_hat-), the derivative jump (< 0)
};

// Selects u_hat as the smallest representable point where W1' > C and
// W1'' > C hold, then the minimal truncation order k <= 10^4 with
//   theta(1 + u_hat^2 + ... + u_hat^{2k}) > C        (convexity margin)
//   theta(u_hat + u_hat^3/3 + ... + u_hat^{2k+1}/(2k+1)) > 1  (monotonicity)
// Throws if C > 1 fails, if u_hat is not representable strictly below 1
// (e.g. C = 100 at any theta in (0,1)), or if no admissible k exists.
ModifiedPotential build_modified_potential(const PotentialParams& p,
                                           double c = 10.0);

struct ModifiedValues {
    double w;
    double wp;
};

// Piecewise evaluation of the modified potential on all of R.
ModifiedValues modified_values(double u, const ModifiedPotential& m);

// Truncated series theta * sum_{m=0..k} u^{2m+1}/(2m+1)  (W~1' beyond u_hat).
double truncated_wp1(double u, double theta, int k);

// Truncated series theta * sum_{m=0..k} u^{2m}  (W~1'' beyond u_hat).
double truncated_wpp1(double u, double theta, int k);

} // namespace chmin

#endif
