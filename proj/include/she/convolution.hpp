#pragma once

#include <functional>
#include <vector>

#include "she/noise.hpp"

namespace she {

/// Bounded predictable integrand for the stochastic convolution, with
/// certified bounds 0 < c1 <= Z <= c2 checked on every lattice evaluation.
struct IntegrandSpec {
    double c1 = 0.0;
    double c2 = 0.0;
    bool is_constant = false;
    double constant_value = 0.0;
    std::function<double(double, double)> f;  ///< f(s, y) when not constant

    static IntegrandSpec constant(double c);
    static IntegrandSpec function(double c1, double c2,
                                  std::function<double(double, double)> f);

    double eval(double s, double y) const;
};

/// I_Z(t, x_j) for every lattice node, plus optional quadratic-variation
/// samples (r, <M>_r).
struct ConvolutionFrame {
    GridSpec grid;
    double t = 0.0;
    std::vector<double> values;
    std::vector<std::pair<double, double>> qv;
};

/// Effective kernel time for noise layer m of a convolution evaluated at
/// time t: tau_m with dt / sqrt(4*pi*tau_m) equal to the exact mass
/// int_layer ds / sqrt(4*pi*(t-s)). Telescopes to the closed-form
/// quadratic variation and sidesteps the p_0 singularity at the final
/// layer (tau = dt/4 there).
double layer_effective_time(double t, std::size_t m, double dt);

/// Kernel-weighted noise summation at a single point x. t must be
/// lattice-aligned (t = m*dt, 1 <= m <= n_t).
double stochastic_convolution_at(const IntegrandSpec& Z, const NoiseGrid& noise,
                                 double t, double x);

/// Full frame over all lattice x; OpenMP-parallel over evaluation points.
ConvolutionFrame stochastic_convolution(const IntegrandSpec& Z, const NoiseGrid& noise,
                                        double t);

/// Straightforward serial reference for the frame evaluation.
ConvolutionFrame stochastic_convolution_serial(const IntegrandSpec& Z,
                                               const NoiseGrid& noise, double t);

/// Discrete quadratic variation <M>_r of the convolution martingale at
/// evaluation point x, for each lattice-aligned r in r_list.
std::vector<double> quadratic_variation(const IntegrandSpec& Z, const GridSpec& grid,
                                        double t, double x,
                                        const std::vector<double>& r_list);

/// Minimum of I_Z over a space-time window: min over the given frames of
/// the nodes with x in [x_lo, x_hi].
double window_infimum(const std::vector<ConvolutionFrame>& frames, double x_lo,
                      double x_hi);

}  // namespace she
