#include "she/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "she/rng.hpp"

namespace she {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

double normal_ccdf(double x) { return 0.5 * std::erfc(x / 1.4142135623730950488); }

double normal_quantile_two_sided(double conf) {
    // Bisection on the ccdf; plenty for the fixed confidences used here.
    const double tail = 0.5 * (1.0 - conf);
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_ccdf(mid) > tail)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double conf) {
    if (n == 0) throw std::domain_error("wilson_interval: empty sample");
    const double z = normal_quantile_two_sided(conf);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {center - half, center + half};
}

SampleMoments sample_moments(std::span<const double> xs) {
    SampleMoments out;
    out.n = xs.size();
    if (xs.size() < 2) throw std::domain_error("sample_moments: need at least 2 points");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(xs.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.mean = mean;
    out.variance = m2 * n / (n - 1.0);
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

double abs_moment(std::span<const double> xs, double k) {
    if (xs.empty()) throw std::domain_error("abs_moment: empty sample");
    double s = 0.0;
    for (double x : xs) s += std::pow(std::fabs(x), k);
    return s / static_cast<double>(xs.size());
}

Interval bootstrap_abs_moment(std::span<const double> xs, double k, double conf,
                              std::size_t n_boot, std::uint64_t seed) {
    const std::size_t n = xs.size();
    if (n == 0) throw std::domain_error("bootstrap_abs_moment: empty sample");
    std::vector<double> pk(n);
    for (std::size_t i = 0; i < n; ++i) pk[i] = std::pow(std::fabs(xs[i]), k);
    std::vector<double> stats(n_boot);
    for (std::size_t b = 0; b < n_boot; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = uniform01(seed, static_cast<std::uint32_t>(b),
                                       static_cast<std::uint32_t>(i), 0x6007u);
            s += pk[static_cast<std::size_t>(u * static_cast<double>(n))];
        }
        stats[b] = s / static_cast<double>(n);
    }
    std::sort(stats.begin(), stats.end());
    const double tail = 0.5 * (1.0 - conf);
    const auto idx = [&](double q) {
        const double pos = q * static_cast<double>(n_boot - 1);
        return stats[static_cast<std::size_t>(pos + 0.5)];
    };
    return {idx(tail), idx(1.0 - tail)};
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::domain_error("ks_two_sample_pvalue: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    // Kolmogorov distribution tail sum.
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * p, 0.0, 1.0);
}

}  // namespace she
