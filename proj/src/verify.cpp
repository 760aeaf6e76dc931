#include "she/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "she/kernel.hpp"
#include "she/quadrature.hpp"

namespace she {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;

std::size_t snap_step(double t, double dt, const char* who) {
    const double ratio = t / dt;
    const auto m = static_cast<long long>(std::llround(ratio));
    if (m < 1 || std::fabs(ratio - static_cast<double>(m)) > 1e-6 * ratio + 1e-12)
        throw std::domain_error(std::string(who) + ": time not lattice-aligned");
    return static_cast<std::size_t>(m);
}
}  // namespace

GridSpec mc_grid(double t_max, double x_lo, double x_hi, double dt, double dx) {
    GridSpec g;
    g.dt = dt;
    g.dx = dx;
    g.n_t = snap_step(t_max, dt, "mc_grid");
    const double margin = 8.0 * std::sqrt(t_max) + dx;
    g.x_min = x_lo - margin;
    g.n_x = static_cast<std::size_t>(std::ceil((x_hi - x_lo + 2.0 * margin) / dx)) + 1;
    return g;
}

TailReport tail_report(double c, double t, const std::vector<double>& lambdas,
                       std::size_t reps, std::uint64_t seed, double conf) {
    if (reps < 1000) throw std::domain_error("tail_report: need reps >= 1000");
    TailReport rep;
    rep.c = c;
    rep.t = t;
    rep.reps = reps;

    const IntegrandSpec Z = IntegrandSpec::constant(c);
    const GridSpec g = mc_grid(t, 0.0, 0.0);
    std::vector<double> samples(reps);
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        samples[r] = stochastic_convolution_at(Z, noise, t, 0.0);
    }

    const double scale = std::pow(t / kPi, 0.25);
    // Shape constants fitted from the exact oracle over the lambda grid.
    double c_lo = std::numeric_limits<double>::infinity();
    double c_hi = 0.0;
    for (double lam : lambdas) {
        const double oracle = normal_ccdf(lam / c);
        const double shape = std::exp(-lam * lam / (2.0 * c * c)) / (1.0 + lam);
        c_lo = std::min(c_lo, oracle / shape);
        c_hi = std::max(c_hi, oracle / shape);
    }

    rep.all_ok = true;
    for (double lam : lambdas) {
        TailPoint pt;
        pt.lambda = lam;
        const double thresh = scale * lam;
        for (double s : samples)
            if (s >= thresh) ++pt.count;
        pt.p_hat = static_cast<double>(pt.count) / static_cast<double>(reps);
        pt.wilson = wilson_interval(pt.count, reps, conf);
        pt.oracle = normal_ccdf(lam / c);
        const double shape = std::exp(-lam * lam / (2.0 * c * c)) / (1.0 + lam);
        pt.lower_shape = c_lo * shape;
        pt.upper_shape = c_hi * shape;
        pt.underpowered =
            static_cast<double>(reps) * std::min(pt.oracle, 1.0 - pt.oracle) < 10.0;
        pt.oracle_in_wilson = pt.wilson.contains(pt.oracle);
        const double half = 0.5 * (pt.wilson.hi - pt.wilson.lo);
        pt.within_shapes = pt.p_hat >= pt.lower_shape - half &&
                           pt.p_hat <= pt.upper_shape + half;
        if (!pt.underpowered && !(pt.oracle_in_wilson && pt.within_shapes))
            rep.all_ok = false;
        rep.points.push_back(pt);
    }
    return rep;
}

namespace {

/// Shared machinery for the increment-moment reports: samples of
/// normalized increments per pair, then bootstrap against the bound.
MomentReport build_moment_report(const std::string& direction, double c0,
                                 const std::vector<std::vector<double>>& samples,
                                 const std::vector<double>& separations,
                                 const std::vector<double>& k_list, std::size_t reps,
                                 std::uint64_t seed, double conf,
                                 const std::function<double(double)>& bound_of_k) {
    MomentReport rep;
    rep.direction = direction;
    rep.c0 = c0;
    rep.reps = reps;
    rep.all_ok = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (double k : k_list) {
            if (k < 2.0)
                throw std::domain_error("moment report: need k >= 2");
            MomentPoint pt;
            pt.k = k;
            pt.separation = separations[i];
            pt.empirical = abs_moment(samples[i], k);
            pt.bootstrap =
                bootstrap_abs_moment(samples[i], k, conf, 400, seed ^ 0xb007u);
            pt.bound = bound_of_k(k);
            pt.unstable = k > 8.0;
            pt.within = pt.bootstrap.hi <= pt.bound;
            if (!pt.unstable && !pt.within) rep.all_ok = false;
            rep.points.push_back(pt);
        }
    }
    return rep;
}

}  // namespace

MomentReport spatial_moment_report(double c0, double t,
                                   const std::vector<std::pair<double, double>>& pairs,
                                   const std::vector<double>& k_list, std::size_t reps,
                                   std::uint64_t seed, double conf) {
    if (pairs.empty()) throw std::domain_error("spatial_moment_report: no pairs");
    double lo = pairs[0].first, hi = pairs[0].first;
    for (const auto& [x, z] : pairs) {
        if (x == z)
            throw std::domain_error("spatial_moment_report: zero spatial separation");
        lo = std::min({lo, x, z});
        hi = std::max({hi, x, z});
    }
    const IntegrandSpec Z = IntegrandSpec::constant(c0);
    const GridSpec g = mc_grid(t, lo, hi);
    std::vector<std::vector<double>> samples(pairs.size(),
                                             std::vector<double>(reps));
    std::vector<double> seps(pairs.size());
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [x, z] = pairs[i];
            const double d = std::fabs(x - z);
            seps[i] = d;
            const double inc = stochastic_convolution_at(Z, noise, t, x) -
                               stochastic_convolution_at(Z, noise, t, z);
            samples[i][r] = inc / std::sqrt(d);
        }
    }
    return build_moment_report("spatial", c0, samples, seps, k_list, reps, seed, conf,
                               [c0](double k) {
                                   return std::pow(2.0 * c0 * c0 * k, k / 2.0);
                               });
}

MomentReport temporal_moment_report(
    double c0, double x, const std::vector<std::pair<double, double>>& t_h_pairs,
    const std::vector<double>& k_list, std::size_t reps, std::uint64_t seed,
    double conf) {
    if (t_h_pairs.empty()) throw std::domain_error("temporal_moment_report: no pairs");
    double dt = 0.05;
    double horizon = 0.0;
    for (const auto& [t, h] : t_h_pairs) {
        if (!(h > 0.0))
            throw std::domain_error("temporal_moment_report: identical times");
        dt = std::min(dt, h / 2.0);
        horizon = std::max(horizon, t + h);
    }
    // Snap the horizon onto the lattice.
    const auto n_t = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    horizon = static_cast<double>(n_t) * dt;
    const GridSpec g = mc_grid(horizon, x, x, dt);
    const IntegrandSpec Z = IntegrandSpec::constant(c0);

    std::vector<std::vector<double>> samples(t_h_pairs.size(),
                                             std::vector<double>(reps));
    std::vector<double> seps(t_h_pairs.size());
    std::vector<std::pair<double, double>> snapped(t_h_pairs.size());
    for (std::size_t i = 0; i < t_h_pairs.size(); ++i) {
        const auto [t, h] = t_h_pairs[i];
        const double t1 = std::max<double>(1, std::llround(t / dt)) * dt;
        const double t2 =
            std::max<double>(std::llround(t1 / dt) + 1, std::llround((t + h) / dt)) * dt;
        snapped[i] = {t1, t2};
        seps[i] = t2 - t1;
    }
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        for (std::size_t i = 0; i < t_h_pairs.size(); ++i) {
            const auto [t1, t2] = snapped[i];
            const double inc = stochastic_convolution_at(Z, noise, t2, x) -
                               stochastic_convolution_at(Z, noise, t1, x);
            samples[i][r] = inc / std::pow(t2 - t1, 0.25);
        }
    }
    return build_moment_report("temporal", c0, samples, seps, k_list, reps, seed, conf,
                               [c0](double k) {
                                   return std::pow(5.0 * c0 * c0 * k, k / 2.0);
                               });
}

MomentReport combined_modulus_report(
    double c0, const std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>>& pairs,
    const std::vector<double>& k_list, std::size_t reps, std::uint64_t seed,
    double conf) {
    if (pairs.empty()) throw std::domain_error("combined_modulus_report: no pairs");
    double dt = 0.05;
    double horizon = 0.0;
    double x_lo = pairs[0].first.x, x_hi = pairs[0].first.x;
    for (const auto& [p, q] : pairs) {
        const double dtime = std::fabs(p.t - q.t);
        if (dtime > 0.0) dt = std::min(dt, dtime);
        horizon = std::max({horizon, p.t, q.t});
        x_lo = std::min({x_lo, p.x, q.x});
        x_hi = std::max({x_hi, p.x, q.x});
    }
    const auto n_t = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    horizon = static_cast<double>(n_t) * dt;
    const GridSpec g = mc_grid(horizon, x_lo, x_hi, dt);
    const IntegrandSpec Z = IntegrandSpec::constant(c0);

    std::vector<std::vector<double>> samples(pairs.size(), std::vector<double>(reps));
    std::vector<double> seps(pairs.size());
    std::vector<std::pair<SpaceTimePoint, SpaceTimePoint>> snapped = pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto& [p, q] = snapped[i];
        p.t = std::max<double>(1, std::llround(p.t / dt)) * dt;
        q.t = std::max<double>(1, std::llround(q.t / dt)) * dt;
        const double rho = std::pow(std::fabs(p.t - q.t), 0.25) +
                           std::sqrt(std::fabs(p.x - q.x));
        if (rho == 0.0)
            throw std::domain_error("combined_modulus_report: coincident points");
        seps[i] = rho;
    }
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [p, q] = snapped[i];
            const double inc = stochastic_convolution_at(Z, noise, p.t, p.x) -
                               stochastic_convolution_at(Z, noise, q.t, q.x);
            samples[i][r] = inc / seps[i];
        }
    }
    return build_moment_report("combined", c0, samples, seps, k_list, reps, seed, conf,
                               [c0](double k) {
                                   return std::pow(13.0 * c0, k) * std::pow(k, k / 2.0);
                               });
}

CovarianceReport covariance_decay(double c, double t, const std::vector<double>& x_list,
                                  const std::function<double(double)>& g_fn,
                                  bool identity_g, std::size_t reps,
                                  std::uint64_t seed, double conf) {
    CovarianceReport rep;
    rep.c = c;
    rep.t = t;
    rep.reps = reps;
    rep.identity_g = identity_g;
    double lo = 0.0, hi = 0.0;
    for (double x : x_list) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const GridSpec g = mc_grid(t, lo, hi);
    const IntegrandSpec Z = IntegrandSpec::constant(c);
    const auto apply_g = [&](double v) { return g_fn ? g_fn(v) : v; };

    std::vector<double> base(reps);
    std::vector<std::vector<double>> at_x(x_list.size(), std::vector<double>(reps));
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        base[r] = apply_g(stochastic_convolution_at(Z, noise, t, 0.0));
        for (std::size_t i = 0; i < x_list.size(); ++i)
            at_x[i][r] = x_list[i] == 0.0
                             ? base[r]
                             : apply_g(stochastic_convolution_at(Z, noise, t, x_list[i]));
    }

    const double z = normal_quantile_two_sided(conf);
    double mean_b = 0.0;
    for (double v : base) mean_b += v;
    mean_b /= static_cast<double>(reps);
    double var_b = 0.0;
    for (double v : base) var_b += (v - mean_b) * (v - mean_b);
    var_b /= static_cast<double>(reps - 1);

    for (std::size_t i = 0; i < x_list.size(); ++i) {
        CovariancePoint pt;
        pt.x = x_list[i];
        double mean_a = 0.0;
        for (double v : at_x[i]) mean_a += v;
        mean_a /= static_cast<double>(reps);
        double cov = 0.0, var_a = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            cov += (at_x[i][r] - mean_a) * (base[r] - mean_b);
            var_a += (at_x[i][r] - mean_a) * (at_x[i][r] - mean_a);
        }
        cov /= static_cast<double>(reps - 1);
        var_a /= static_cast<double>(reps - 1);
        pt.empirical = cov;
        pt.std_error = std::sqrt((var_a * var_b + cov * cov) /
                                 static_cast<double>(reps));
        if (identity_g) {
            // int_0^t p_{2s}(x) ds with s = v^2 to tame the x = 0 endpoint.
            const double x = pt.x;
            pt.oracle = c * c *
                        integrate_or_throw(
                            [x](double v) {
                                return 2.0 * v * heat_kernel(2.0 * v * v, x);
                            },
                            1e-14, std::sqrt(t), 1e-10, 1e-12);
            pt.within = std::fabs(pt.empirical - pt.oracle) <= z * pt.std_error;
        }
        pt.below_noise_floor = std::fabs(pt.empirical) <= z * pt.std_error;
        rep.points.push_back(pt);
    }
    return rep;
}

GrowthScanResult growth_scan(const IntegrandSpec& Z, double a, double eps,
                             const std::vector<double>& L_list_lattice_units,
                             std::size_t reps, std::uint64_t seed) {
    if (!(a > 0.0) || !(eps > 0.0))
        throw std::domain_error("growth_scan: need positive a and eps");
    GrowthScanResult out;
    out.L_list = L_list_lattice_units;
    out.reps = reps;

    const double e2 = eps * eps;
    const double e4 = e2 * e2;
    // At least two lattice times inside (a, a + eps^4], aligned with a.
    const auto n_a = static_cast<std::size_t>(std::ceil(a / (e4 / 2.0)));
    const double dt = a / static_cast<double>(n_a);
    const double dx = 0.05;
    const double L_max_phys =
        *std::max_element(L_list_lattice_units.begin(), L_list_lattice_units.end()) *
        dx;
    if (!(e2 <= L_max_phys + 1e-12))
        throw std::domain_error("growth_scan: window larger than the domain");
    const double horizon = (static_cast<double>(n_a) +
                            std::floor(e4 / dt + 1e-9)) *
                           dt;
    const GridSpec g = mc_grid(horizon, 0.0, L_max_phys + e2, dt, dx);

    out.statistics.assign(out.L_list.size(), std::vector<double>(reps));
    NoiseGrid noise = generate(g, seed, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        std::vector<ConvolutionFrame> frames;
        for (std::size_t m = n_a + 1; m * dt <= a + e4 + 1e-12 && m <= g.n_t; ++m)
            frames.push_back(
                stochastic_convolution(Z, noise, static_cast<double>(m) * dt));
        for (std::size_t li = 0; li < out.L_list.size(); ++li) {
            const double L_phys = out.L_list[li] * dx;
            double best = -std::numeric_limits<double>::infinity();
            for (double c = 0.0; c + e2 <= L_phys + 1e-12; c += e2)
                best = std::max(best, window_infimum(frames, c, c + e2));
            out.statistics[li][r] = best;
        }
    }

    for (const auto& col : out.statistics) {
        std::vector<double> sorted = col;
        std::sort(sorted.begin(), sorted.end());
        out.medians.push_back(sorted[sorted.size() / 2]);
    }
    for (std::size_t r = 0; r < reps; ++r)
        if (out.statistics.back()[r] > out.statistics.front()[r])
            ++out.strict_increase_count;
    return out;
}

}  // namespace she
