#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace she {

/// Result of an adaptive quadrature run. `converged` is false when the
/// error target was not met within the interval budget; callers that
/// need a hard guarantee should check it and raise.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;     ///< estimated absolute error
    bool converged = false;
    std::size_t intervals = 0;
};

struct QuadratureError : std::runtime_error {
    double achieved_error;
    QuadratureError(const std::string& what, double err)
        : std::runtime_error(what), achieved_error(err) {}
};

/// Globally adaptive Gauss-Kronrod 7/15 on a finite interval [a, b].
/// Stops when total error <= max(abs_tol, rel_tol * |integral|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 0.0,
                     std::size_t max_intervals = 2000);

/// Integral over [a, +inf) via the rational map y = a + t/(1-t).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double rel_tol = 1e-10, double abs_tol = 0.0,
                            std::size_t max_intervals = 4000);

/// Like integrate() but throws QuadratureError on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0);

}  // namespace she
