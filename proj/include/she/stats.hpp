#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace she {

double normal_cdf(double x);
double normal_ccdf(double x);  ///< upper tail, 1 - Phi(x)

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Wilson score interval for a binomial proportion at confidence `conf`.
Interval wilson_interval(std::size_t successes, std::size_t n, double conf = 0.99);

/// Upper quantile z with P(N(0,1) > z) = (1-conf)/2.
double normal_quantile_two_sided(double conf);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;   ///< unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::size_t n = 0;
};

SampleMoments sample_moments(std::span<const double> xs);

/// Mean of |x|^k over the sample.
double abs_moment(std::span<const double> xs, double k);

/// Percentile-bootstrap confidence interval for the mean of |x|^k.
Interval bootstrap_abs_moment(std::span<const double> xs, double k, double conf,
                              std::size_t n_boot, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov asymptotic p-value.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace she
