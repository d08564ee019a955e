#include "mejpa/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mejpa/errors.hpp"

namespace mejpa {

MinimizeResult golden_section_minimize(const std::function<double(double)>& f,
                                       double lo, double hi, double tol_x, int max_iter) {
    if (!(hi > lo)) throw DomainError("golden_section_minimize: need hi > lo");
    constexpr double inv_phi = 0.6180339887498949;  // 1/phi

    MinimizeResult res;
    const double span = hi - lo;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    res.evaluations = 2;
    for (int it = 0; it < max_iter; ++it) {
        ++res.iterations;
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++res.evaluations;
        if (b - a < tol_x * span) {
            res.converged = true;
            break;
        }
    }
    const double x = (fc < fd) ? c : d;
    res.x = {x};
    res.fx = std::min(fc, fd);
    return res;
}

MinimizeResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const std::vector<double>& initial_step,
    double tol_f, int max_evals) {
    const std::size_t n = x0.size();
    if (n == 0 || initial_step.size() != n) {
        throw DomainError("nelder_mead_minimize: bad dimensions");
    }

    MinimizeResult res;
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fvals(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step[i];
    for (std::size_t i = 0; i <= n; ++i) {
        fvals[i] = f(simplex[i]);
        ++res.evaluations;
    }

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    auto order = [&]() {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (auto i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fvals[i]);
        }
        simplex = std::move(s2);
        fvals = std::move(f2);
    };

    while (res.evaluations < max_evals) {
        ++res.iterations;
        order();
        const double spread = fvals[n] - fvals[0];
        if (spread <= tol_f * (std::abs(fvals[0]) + 1e-30)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto combine = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
            }
            return x;
        };

        const auto xr = combine(-alpha);
        const double fr = f(xr);
        ++res.evaluations;
        if (fr < fvals[0]) {
            const auto xe = combine(-gamma);
            const double fe = f(xe);
            ++res.evaluations;
            if (fe < fr) {
                simplex[n] = xe;
                fvals[n] = fe;
            } else {
                simplex[n] = xr;
                fvals[n] = fr;
            }
            continue;
        }
        if (fr < fvals[n - 1]) {
            simplex[n] = xr;
            fvals[n] = fr;
            continue;
        }
        const auto xc = combine(rho);
        const double fcontr = f(xc);
        ++res.evaluations;
        if (fcontr < fvals[n]) {
            simplex[n] = xc;
            fvals[n] = fcontr;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 1; i <= n && res.evaluations < max_evals; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
            }
            fvals[i] = f(simplex[i]);
            ++res.evaluations;
        }
    }
    order();
    res.x = simplex[0];
    res.fx = fvals[0];
    return res;
}

}  // namespace mejpa
