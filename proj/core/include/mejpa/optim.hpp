#pragma once

#include <functional>
#include <vector>

namespace mejpa {

/// Result of a derivative-free minimization.
struct MinimizeResult {
    std::vector<double> x;
    double fx = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
};

/// Golden-section search for a 1-D minimum on [lo, hi]. Deterministic;
/// stops when the bracket shrinks below tol_x * (hi - lo) or after
/// max_iter shrink steps.
MinimizeResult golden_section_minimize(const std::function<double(double)>& f,
                                       double lo, double hi,
                                       double tol_x = 1e-6, int max_iter = 200);

/// Deterministic Nelder-Mead with a fixed initial simplex (steps given
/// per axis). Out-of-bounds candidates must be rejected by the objective
/// itself (return +inf). Convergence: spread of simplex values below
/// tol_f * (|best| + tiny).
MinimizeResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const std::vector<double>& initial_step,
                                    double tol_f = 1e-4, int max_evals = 500);

}  // namespace mejpa
