// step_kernel.cpp
// Compiled with -ffast-math (see src/CMakeLists.txt): the hot loop is the
// whole run time of a simulation, and the vectorized log is ~4x the scalar
// one. No NaN/Inf can reach this kernel: callers enforce |u| < 1 via the
// guard before trusting a step.

#include "step_kernel.hpp"

#include <cmath>

namespace chmin::detail {

std::vector<double> interior_mask(int n) {
    const int m = n + 1;
    std::vector<double> mask(std::size_t(m) * m, 0.0);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) mask[std::size_t(i) * m + j] = 1.0;
    return mask;
}

StepStats step_exact(const double* __restrict u, double* __restrict out,
                     const double* __restrict mask, int n, double inv_h2,
                     double kappa, double theta, double dt) {
    const int m = n + 1;
    const double half_theta = 0.5 * theta;
    double rmax = 0.0;
    double umax = 0.0;
    // one flat sweep over [m+1, n*m-1); boundary-column lanes are masked out
    const int lo = m + 1;
    const int hi = n * m - 1;
#pragma omp simd reduction(max : rmax, umax)
    for (int x = lo; x < hi; ++x) {
        const double uc = u[x];
        const double a = std::fabs(uc);
        const double lap =
            (u[x + m] + u[x - m] + u[x + 1] + u[x - 1] - 4.0 * uc) * inv_h2;
        // odd in uc: evaluate the log at |uc| and restore the sign
        const double wp =
            std::copysign(half_theta * std::log((1.0 + a) / (1.0 - a)), uc) - uc;
        const double r = (kappa * lap - wp) * mask[x];
        out[x] = uc + dt * r;
        const double ra = std::fabs(r);
        if (ra > rmax) rmax = ra;
        if (a > umax) umax = a;
    }
    return {rmax, umax};
}

} // namespace chmin::detail
