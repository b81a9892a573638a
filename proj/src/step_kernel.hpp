// step_kernel.hpp
// Internal raw-buffer Euler step for the Allen-Cahn flow. The exact-potential
// kernel lives in its own translation unit compiled with -ffast-math so the
// per-node logarithm vectorizes; callers do the guarding and error handling.

#ifndef CHMIN_STEP_KERNEL_HPP
#define CHMIN_STEP_KERNEL_HPP

#include <vector>

namespace chmin::detail {

struct StepStats {
    double residual_inf; // max interior |kappa*Lap(u) - W'(u)|
    double state_absmax; // max interior |u| of the input state
};

// 1 on interior nodes, 0 on the boundary; lets the kernel sweep one flat
// index range without per-row remainders.
std::vector<double> interior_mask(int n);

// out = u + dt*(kappa*Lap_h(u) - W'(u)) on interior nodes of an
// (n+1)x(n+1) row-major grid; boundary nodes are copied through unchanged
// (they are zero and the mask zeroes their residual).
// W'(u) is evaluated in a sign-symmetric way so the step map is odd.
StepStats step_exact(const double* u, double* out, const double* mask, int n,
                     double inv_h2, double kappa, double theta, double dt);

} // namespace chmin::detail

#endif
