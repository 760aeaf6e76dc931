#pragma once

#include <functional>
#include <stdexcept>

namespace she {

/// Gaussian heat kernel p_r(z) = exp(-z^2 / (2r)) / sqrt(2*pi*r), the
/// fundamental solution of u_t = u_xx / 2.
double heat_kernel(double r, double z);

/// log p_r(z); finite for all r > 0, used to form products of kernels
/// without intermediate underflow.
double log_heat_kernel(double r, double z);

/// Convolution (p_t * u0)(x) for bounded u0, by adaptive quadrature over
/// the kernel's effective support. Throws QuadratureError when the
/// requested relative tolerance cannot be met.
double convolve_initial(const std::function<double(double)>& u0, double t, double x,
                        double quad_tol = 1e-10);

/// Relative residual of the pointwise product identity
///   p_{t-s}(x-y) p_s(y-z) = p_t(x-z) p_{s(t-s)/t}(y - z - (s/t)(x-z)).
/// Both sides are evaluated in log space; result is
/// |LHS - RHS| / max(LHS, eps).
double product_identity_residual(double t, double s, double x, double y, double z);

/// Closed form of int_0^r ds int dy [p_{t-s}(y)]^2 = sqrt(t/pi) - sqrt((t-r)/pi).
double squared_kernel_mass(double t, double r);

/// Same quantity by nested adaptive quadrature; cross-checks the closed form.
double squared_kernel_mass_quadrature(double t, double r, double tol = 1e-8);

/// Relative residual of the squared-kernel convolution identity
///   int [p_{t-s}(x-y)]^2 [p_{s-r}(y-z)]^2 dy
///     = sqrt((t-r) / (4*pi*(t-s)*(s-r))) * [p_{t-r}(x-z)]^2,
/// with the left side computed by adaptive quadrature.
double squared_identity_residual(double t, double s, double r, double x, double z,
                                 double tol = 1e-10);

}  // namespace she
