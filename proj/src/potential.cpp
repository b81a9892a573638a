// potential.cpp
// Flory-Huggins potential, Newton/bisection search for u_theta, and the
// polynomial continuation beyond u_hat.

#include "chmin/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chmin {

namespace {

constexpr int kMaxNewtonIterations = 200;
constexpr int kMaxTruncationOrder = 10000;

double guard_or_throw(double u, GuardMode mode, const char* who) {
    const double limit = 1.0 - kGuardMargin;
    if (std::abs(u) < limit) return u;
    if (mode == GuardMode::clamped) return std::copysign(limit, u);
    std::ostringstream msg;
    msg << who << ": |u| = " << std::abs(u) << " is within " << kGuardMargin
        << " of the logarithmic singularity at 1";
    throw std::domain_error(msg.str());
}

// W1(u) = (theta/2)((1-u)ln(1-u) + (1+u)ln(1+u)); even, so evaluated at |u|.
double w1_value(double u, double theta) {
    const double a = std::abs(u);
    if (a > 1.0) throw std::domain_error("w1_value: |u| > 1");
    if (a == 1.0) return theta * std::log(2.0); // 0*ln 0 := 0
    return 0.5 * theta * ((1.0 - a) * std::log1p(-a) + (1.0 + a) * std::log1p(a));
}

// Exact W1'(u) = (theta/2) ln((1+u)/(1-u)) for |u| < 1.
double w1_prime(double u, double theta) {
    return 0.5 * theta * (std::log1p(u) - std::log1p(-u));
}

// Primitive of the truncated odd series with value 0 at 0:
// theta * sum_{m=0..k} u^{2m+2} / ((2m+1)(2m+2)); even in u.
double truncated_primitive(double u, double theta, int k) {
    const double u2 = u * u;
    double pw = u2;
    double s = 0.0;
    for (int m = 0; m <= k; ++m) {
        s += pw / double((2 * m + 1) * (2 * m + 2));
        pw *= u2;
    }
    return theta * s;
}

} // namespace

PotentialParams::PotentialParams(double theta_in) : theta(theta_in) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("PotentialParams: theta must lie in (0,1)");
}

double w_value(double u, const PotentialParams& p) {
    if (std::abs(u) > 1.0)
        throw std::domain_error("w_value: |u| > 1 is outside the potential domain");
    return w1_value(u, p.theta) + 0.5 * (1.0 - u * u);
}

double w_prime(double u, const PotentialParams& p, GuardMode mode) {
    const double v = guard_or_throw(u, mode, "w_prime");
    return w1_prime(v, p.theta) - v;
}

double w_second(double u, const PotentialParams& p, GuardMode mode) {
    const double v = guard_or_throw(u, mode, "w_second");
    return p.theta / (1.0 - v * v) - 1.0;
}

PotentialValues potential_values(double u, const PotentialParams& p,
                                 GuardMode mode) {
    const double v = guard_or_throw(u, mode, "potential_values");
    return {w_value(v, p), w_prime(v, p, mode), w_second(v, p, mode)};
}

RootResult find_u_theta(const PotentialParams& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_u_theta: tol must be > 0");
    const double theta = p.theta;

    // W' is negative on (0, u_theta), positive on (u_theta, 1), with its
    // minimum at the spinodal point.
    double lo = std::sqrt(1.0 - theta);
    double hi = std::nextafter(1.0, 0.0);
    const auto f = [theta](double u) { return w1_prime(u, theta) - u; };
    const auto df = [theta](double u) { return theta / (1.0 - u * u) - 1.0; };

    if (!(f(hi) > 0.0)) {
        std::ostringstream msg;
        msg << "find_u_theta: root not representable below 1 in double "
               "precision for theta = "
            << theta << " (bracket [" << lo << ", " << hi << "], W'(hi) = "
            << f(hi) << ")";
        throw std::runtime_error(msg.str());
    }

    double x = lo; // spinodal edge; first Newton step degenerates, bisection takes over
    double dx_old = hi - lo;
    double dx = dx_old;
    double fx = f(x);
    for (int it = 1; it <= kMaxNewtonIterations; ++it) {
        const double dfx = df(x);
        const bool newton_ok =
            dfx != 0.0 &&
            ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0.0 &&
            std::abs(2.0 * fx) <= std::abs(dx_old * dfx);
        dx_old = dx;
        if (newton_ok) {
            dx = fx / dfx;
            x -= dx;
        } else {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        }
        if (std::abs(dx) < tol || x == lo || x == hi)
            return {x, it, std::abs(f(x))};
        fx = f(x);
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
    }
    std::ostringstream msg;
    msg << "find_u_theta: no convergence after " << kMaxNewtonIterations
        << " iterations (bracket [" << lo << ", " << hi << "])";
    throw std::runtime_error(msg.str());
}

double truncated_wp1(double u, double theta, int k) {
    double pw = u;
    const double u2 = u * u;
    double s = 0.0;
    for (int m = 0; m <= k; ++m) {
        s += pw / double(2 * m + 1);
        pw *= u2;
    }
    return theta * s;
}

double truncated_wpp1(double u, double theta, int k) {
    const double u2 = u * u;
    double pw = 1.0;
    double s = 0.0;
    for (int m = 0; m <= k; ++m) {
        s += pw;
        pw *= u2;
    }
    return theta * s;
}

ModifiedPotential build_modified_potential(const PotentialParams& p, double c) {
    if (!(c > 1.0))
        throw std::invalid_argument("build_modified_potential: C must be > 1");
    const double theta = p.theta;
    const double u_theta = find_u_theta(p).value;

    const auto exact_ok = [&](double u) {
        return w1_prime(u, theta) > c && theta / (1.0 - u * u) > c;
    };

    // Start where the exact W1'' equals C, then move toward 1 until the
    // exact W1' threshold holds as well (it is the binding one: its root
    // is tanh(C/theta)).
    const double top = std::nextafter(1.0, 0.0);
    double u_hat = std::sqrt(1.0 - theta / c);
    if (!exact_ok(u_hat)) {
        if (!exact_ok(top)) {
            std::ostringstream msg;
            msg << "build_modified_potential: no u_hat < 1 representable in "
                   "double precision satisfies W1' > C for theta = "
                << theta << ", C = " << c
                << " (needs 1 - u_hat ~ 2 exp(-2C/theta))";
            throw std::runtime_error(msg.str());
        }
        double lo = u_hat, hi = top;
        while (true) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            if (exact_ok(mid))
                hi = mid;
            else
                lo = mid;
        }
        u_hat = hi;
    }
    while (!exact_ok(u_hat)) {
        u_hat = std::nextafter(u_hat, 1.0);
        if (u_hat >= 1.0)
            throw std::runtime_error(
                "build_modified_potential: u_hat not representable below 1");
    }

    // Minimal truncation order: the truncated W1'' must keep the convexity
    // margin C beyond u_hat, and the truncated W1' must exceed 1 > u_hat so
    // the continuation is strictly increasing from u_hat on.
    int k = -1;
    {
        const double u2 = u_hat * u_hat;
        double pw_odd = u_hat; // u_hat^(2m+1)
        double pw_even = 1.0;  // u_hat^(2m)
        double s1 = 0.0, s2 = 0.0;
        for (int m = 0; m <= kMaxTruncationOrder; ++m) {
            s1 += pw_odd / double(2 * m + 1);
            s2 += pw_even;
            pw_odd *= u2;
            pw_even *= u2;
            if (theta * s2 > c && theta * s1 > 1.0) {
                k = m;
                break;
            }
        }
    }
    if (k < 0) {
        std::ostringstream msg;
        msg << "build_modified_potential: no truncation order k <= "
            << kMaxTruncationOrder << " is admissible for theta = " << theta
            << ", C = " << c;
        throw std::runtime_error(msg.str());
    }

    ModifiedPotential m;
    m.theta = theta;
    m.u_theta = u_theta;
    m.u_hat = u_hat;
    m.k = k;
    m.threshold_c = c;
    m.w1_at_uhat = w1_value(u_hat, theta);
    m.series_at_uhat = truncated_primitive(u_hat, theta, k);
    m.wp_jump = truncated_wp1(u_hat, theta, k) - w1_prime(u_hat, theta);
    return m;
}

ModifiedValues modified_values(double u, const ModifiedPotential& m) {
    const double a = std::abs(u);
    double w, wp_abs;
    if (a <= m.u_hat) {
        w = w1_value(a, m.theta) + 0.5 * (1.0 - u * u);
        wp_abs = w1_prime(a, m.theta) - a;
    } else {
        const double w1 =
            m.w1_at_uhat + (truncated_primitive(a, m.theta, m.k) - m.series_at_uhat);
        w = w1 + 0.5 * (1.0 - u * u);
        wp_abs = truncated_wp1(a, m.theta, m.k) - a;
    }
    return {w, u < 0.0 ? -wp_abs : wp_abs};
}

} // namespace chmin
