#include "she/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "she/quadrature.hpp"

namespace she {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double log_heat_kernel(double r, double z) {
    if (!(r > 0.0)) throw std::domain_error("heat_kernel: time argument must be positive");
    return -z * z / (2.0 * r) - 0.5 * std::log(kTwoPi * r);
}

double heat_kernel(double r, double z) {
    return std::exp(log_heat_kernel(r, z));
}

double convolve_initial(const std::function<double(double)>& u0, double t, double x,
                        double quad_tol) {
    if (!(t > 0.0)) throw std::domain_error("convolve_initial: t must be positive");
    // Tail mass beyond 8 standard deviations is below 1e-15 of the total.
    const double half_width = 8.0 * std::sqrt(t);
    auto f = [&](double y) { return heat_kernel(t, y - x) * u0(y); };
    QuadResult r = integrate(f, x - half_width, x + half_width, quad_tol,
                             quad_tol * 1e-2, 4000);
    if (!r.converged)
        throw QuadratureError("convolve_initial: quadrature did not converge", r.error);
    return r.value;
}

double product_identity_residual(double t, double s, double x, double y, double z) {
    if (!(0.0 < s && s < t))
        throw std::domain_error("product_identity_residual: need 0 < s < t");
    const double log_lhs = log_heat_kernel(t - s, x - y) + log_heat_kernel(s, y - z);
    const double tau = s * (t - s) / t;
    const double log_rhs =
        log_heat_kernel(t, x - z) + log_heat_kernel(tau, y - z - (s / t) * (x - z));
    const double lhs = std::exp(log_lhs);
    const double rhs = std::exp(log_rhs);
    const double eps = std::numeric_limits<double>::epsilon();
    return std::fabs(lhs - rhs) / std::max(lhs, eps);
}

double squared_kernel_mass(double t, double r) {
    if (!(t > 0.0) || !(r > 0.0) || r > t)
        throw std::domain_error("squared_kernel_mass: need 0 < r <= t");
    constexpr double kPi = 3.141592653589793238462643383280;
    return std::sqrt(t / kPi) - std::sqrt((t - r) / kPi);
}

double squared_kernel_mass_quadrature(double t, double r, double tol) {
    if (!(t > 0.0) || !(r > 0.0) || r > t)
        throw std::domain_error("squared_kernel_mass_quadrature: need 0 < r <= t");
    auto inner = [&](double s) {
        const double tau = t - s;
        const double hw = 8.0 * std::sqrt(tau);
        auto f = [&](double y) {
            const double p = heat_kernel(tau, y);
            return p * p;
        };
        return integrate(f, -hw, hw, tol * 1e-2, 0.0, 1000).value;
    };
    // The s-integrand behaves like 1/sqrt(t-s); when r = t the endpoint is an
    // integrable singularity, so the outer integral is substituted with
    // v = sqrt(t-s) to remove it.
    auto g = [&](double v) { return 2.0 * v * inner(t - v * v); };
    const double v_lo = std::sqrt(t - r);
    const double v_hi = std::sqrt(t);
    QuadResult q = integrate(g, v_lo, v_hi, tol, 0.0, 2000);
    if (!q.converged)
        throw QuadratureError("squared_kernel_mass_quadrature: no convergence", q.error);
    return q.value;
}

double squared_identity_residual(double t, double s, double r, double x, double z,
                                 double tol) {
    if (!(0.0 <= r && r < s && s < t))
        throw std::domain_error("squared_identity_residual: need 0 <= r < s < t");
    constexpr double kFourPi = 12.566370614359172953850573533118;
    const double log_rhs = 0.5 * std::log((t - r) / (kFourPi * (t - s) * (s - r))) +
                           2.0 * log_heat_kernel(t - r, x - z);
    const double rhs = std::exp(log_rhs);

    auto f = [&](double y) {
        const double lg = 2.0 * log_heat_kernel(t - s, x - y) +
                          2.0 * log_heat_kernel(s - r, y - z);
        return std::exp(lg);
    };
    // The product of two squared Gaussians centered at x and z; cover both.
    const double w1 = 8.0 * std::sqrt(t - s);
    const double w2 = 8.0 * std::sqrt(s - r);
    const double lo = std::min(x - w1, z - w2);
    const double hi = std::max(x + w1, z + w2);
    QuadResult q = integrate(f, lo, hi, tol, rhs * tol, 4000);
    if (!q.converged)
        throw QuadratureError("squared_identity_residual: no convergence", q.error);
    const double eps = std::numeric_limits<double>::epsilon();
    return std::fabs(q.value - rhs) / std::max(rhs, eps);
}

}  // namespace she
