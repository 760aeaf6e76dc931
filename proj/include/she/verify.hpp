#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "she/convolution.hpp"
#include "she/stats.hpp"

namespace she {

/// Internal MC lattice used by the verification harness: effective-mass
/// layer times make the constant-integrand convolution exactly Gaussian
/// with variance c^2 * sqrt(t/pi) up to spectrally small spatial error,
/// so modest dt/dx suffice.
GridSpec mc_grid(double t_max, double x_lo, double x_hi, double dt = 0.05,
                 double dx = 0.05);

struct TailPoint {
    double lambda = 0.0;
    std::size_t count = 0;
    double p_hat = 0.0;
    Interval wilson;
    double oracle = 0.0;       ///< exact Gaussian ccdf
    double lower_shape = 0.0;  ///< C1/(1+lambda) exp(-lambda^2/(2 c^2))
    double upper_shape = 0.0;  ///< C2/(1+lambda) exp(-lambda^2/(2 c^2))
    bool underpowered = false;
    bool oracle_in_wilson = false;
    bool within_shapes = false;
};

struct TailReport {
    double c = 0.0;
    double t = 0.0;
    std::size_t reps = 0;
    std::vector<TailPoint> points;
    bool all_ok = false;
};

/// Empirical P{ I_Z(t,0) >= (t/pi)^(1/4) * lambda } for Z == c against the
/// exact Gaussian oracle and the tail-sandwich shape curves.
TailReport tail_report(double c, double t, const std::vector<double>& lambdas,
                       std::size_t reps, std::uint64_t seed, double conf = 0.99);

struct MomentPoint {
    double k = 0.0;
    double separation = 0.0;  ///< |x-z|, h, or the rho-metric distance
    double empirical = 0.0;
    Interval bootstrap;
    double bound = 0.0;
    bool within = false;
    bool unstable = false;
};

struct MomentReport {
    std::string direction;  ///< "spatial" | "temporal" | "combined"
    double c0 = 0.0;
    std::size_t reps = 0;
    std::vector<MomentPoint> points;
    bool all_ok = false;
};

/// E| (I(t,x)-I(t,z)) / |x-z|^(1/2) |^k <= (2 c0^2 k)^(k/2).
MomentReport spatial_moment_report(double c0, double t,
                                   const std::vector<std::pair<double, double>>& pairs,
                                   const std::vector<double>& k_list, std::size_t reps,
                                   std::uint64_t seed, double conf = 0.99);

/// E| (I(t+h,x)-I(t,x)) / h^(1/4) |^k <= (5 c0^2 k)^(k/2).
MomentReport temporal_moment_report(
    double c0, double x, const std::vector<std::pair<double, double>>& t_h_pairs,
    const std::vector<double>& k_list, std::size_t reps, std::uint64_t seed,
    double conf = 0.99);

struct SpaceTimePoint {
    double t = 0.0;
    double x = 0.0;
};

/// Increments under the metric rho(p) = |dt|^(1/4) + |dx|^(1/2), bound
/// (13 c0)^k k^(k/2).
MomentReport combined_modulus_report(
    double c0, const std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>>& pairs,
    const std::vector<double>& k_list, std::size_t reps, std::uint64_t seed,
    double conf = 0.99);

struct CovariancePoint {
    double x = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double oracle = 0.0;       ///< c^2 int_0^t p_{2s}(x) ds (identity g)
    bool within = false;       ///< |empirical - oracle| <= z * SE
    bool below_noise_floor = false;
};

struct CovarianceReport {
    double c = 0.0;
    double t = 0.0;
    std::size_t reps = 0;
    bool identity_g = true;
    std::vector<CovariancePoint> points;
};

/// Empirical Cov[g(I(t,x)), g(I(t,0))] along x_list. When g is the
/// identity, compared against the quadrature oracle.
CovarianceReport covariance_decay(double c, double t, const std::vector<double>& x_list,
                                  const std::function<double(double)>& g,
                                  bool identity_g, std::size_t reps,
                                  std::uint64_t seed, double conf = 0.99);

struct GrowthScanResult {
    std::vector<double> L_list;           ///< in lattice units
    std::vector<std::vector<double>> statistics;  ///< [L index][replicate]
    std::vector<double> medians;
    std::size_t strict_increase_count = 0;  ///< reps with stat(L_max) > stat(L_min)
    std::size_t reps = 0;
};

/// Max over window positions c <= L of the window infimum of I_Z over
/// (a, a+eps^4) x (c, c+eps^2); nested prefixes share one noise
/// realization so the statistic is monotone in L by construction.
GrowthScanResult growth_scan(const IntegrandSpec& Z, double a, double eps,
                             const std::vector<double>& L_list_lattice_units,
                             std::size_t reps, std::uint64_t seed);

}  // namespace she
