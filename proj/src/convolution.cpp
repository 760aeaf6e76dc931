#include "she/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "she/kernel.hpp"

namespace she {

namespace {

constexpr double kSupportSigmas = 8.0;

std::size_t aligned_step(double t, const GridSpec& g, const char* who) {
    const double ratio = t / g.dt;
    const auto m = static_cast<long long>(std::llround(ratio));
    if (m < 1 || std::fabs(ratio - static_cast<double>(m)) > 1e-9)
        throw std::domain_error(std::string(who) + ": t must be a positive lattice time");
    if (static_cast<std::size_t>(m) > g.n_t)
        throw std::domain_error(std::string(who) + ": t beyond the lattice horizon");
    return static_cast<std::size_t>(m);
}

struct JRange {
    std::size_t lo, hi;  // half-open
};

JRange support_range(const GridSpec& g, double x, double half_width) {
    const double lo = (x - half_width - g.x_min) / g.dx;
    const double hi = (x + half_width - g.x_min) / g.dx;
    JRange r;
    r.lo = lo <= 0.0 ? 0 : static_cast<std::size_t>(lo);
    r.hi = hi < 0.0 ? 0 : std::min(g.n_x, static_cast<std::size_t>(hi) + 1);
    if (r.lo > r.hi) r.lo = r.hi;
    return r;
}

}  // namespace

IntegrandSpec IntegrandSpec::constant(double c) {
    if (!(c > 0.0)) throw std::domain_error("IntegrandSpec: constant must be positive");
    IntegrandSpec z;
    z.c1 = z.c2 = c;
    z.is_constant = true;
    z.constant_value = c;
    return z;
}

IntegrandSpec IntegrandSpec::function(double c1, double c2,
                                      std::function<double(double, double)> f) {
    if (!(0.0 < c1 && c1 <= c2))
        throw std::domain_error("IntegrandSpec: need 0 < c1 <= c2");
    IntegrandSpec z;
    z.c1 = c1;
    z.c2 = c2;
    z.is_constant = false;
    z.f = std::move(f);
    return z;
}

double IntegrandSpec::eval(double s, double y) const {
    if (is_constant) return constant_value;
    const double v = f(s, y);
    if (!(v >= c1 && v <= c2))
        throw std::runtime_error("IntegrandSpec: bound violation at (s, y)");
    return v;
}

double layer_effective_time(double t, std::size_t m, double dt) {
    const double a = t - static_cast<double>(m) * dt;
    const double b = a - dt;
    const double root = b <= 0.0 ? std::sqrt(a) : std::sqrt(a) - std::sqrt(b);
    const double s = dt / (2.0 * root);
    return s * s;
}

double stochastic_convolution_at(const IntegrandSpec& Z, const NoiseGrid& noise,
                                 double t, double x) {
    const GridSpec& g = noise.grid;
    const std::size_t m_t = aligned_step(t, g, "stochastic_convolution_at");
    double acc = 0.0;
    for (std::size_t m = 0; m < m_t; ++m) {
        const double tau = layer_effective_time(t, m, g.dt);
        const double s_mid = (static_cast<double>(m) + 0.5) * g.dt;
        const JRange r = support_range(g, x, kSupportSigmas * std::sqrt(tau));
        const double* row = noise.increments.data() + m * g.n_x;
        const double inv2tau = 0.5 / tau;
        const double norm = 1.0 / std::sqrt(6.283185307179586 * tau);
        for (std::size_t j = r.lo; j < r.hi; ++j) {
            const double d = g.x_at(j) - x;
            const double w = norm * std::exp(-d * d * inv2tau);
            acc += w * Z.eval(s_mid, g.x_at(j)) * row[j];
        }
    }
    return acc;
}

namespace {

ConvolutionFrame frame_impl(const IntegrandSpec& Z, const NoiseGrid& noise, double t,
                            bool parallel) {
    const GridSpec& g = noise.grid;
    const std::size_t m_t = aligned_step(t, g, "stochastic_convolution");
    ConvolutionFrame out;
    out.grid = g;
    out.t = t;
    out.values.assign(g.n_x, 0.0);

    const auto eval_point = [&](std::size_t jx) {
        const double x = g.x_at(jx);
        double acc = 0.0;
        for (std::size_t m = 0; m < m_t; ++m) {
            const double tau = layer_effective_time(t, m, g.dt);
            const double s_mid = (static_cast<double>(m) + 0.5) * g.dt;
            const JRange r = support_range(g, x, kSupportSigmas * std::sqrt(tau));
            const double* row = noise.increments.data() + m * g.n_x;
            const double inv2tau = 0.5 / tau;
            const double norm = 1.0 / std::sqrt(6.283185307179586 * tau);
            for (std::size_t j = r.lo; j < r.hi; ++j) {
                const double d = g.x_at(j) - x;
                acc += norm * std::exp(-d * d * inv2tau) *
                       Z.eval(s_mid, g.x_at(j)) * row[j];
            }
        }
        out.values[jx] = acc;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long long jx = 0; jx < static_cast<long long>(g.n_x); ++jx)
            eval_point(static_cast<std::size_t>(jx));
    } else {
        for (std::size_t jx = 0; jx < g.n_x; ++jx) eval_point(jx);
    }
    return out;
}

}  // namespace

ConvolutionFrame stochastic_convolution(const IntegrandSpec& Z, const NoiseGrid& noise,
                                        double t) {
    return frame_impl(Z, noise, t, true);
}

ConvolutionFrame stochastic_convolution_serial(const IntegrandSpec& Z,
                                               const NoiseGrid& noise, double t) {
    return frame_impl(Z, noise, t, false);
}

std::vector<double> quadratic_variation(const IntegrandSpec& Z, const GridSpec& grid,
                                        double t, double x,
                                        const std::vector<double>& r_list) {
    const std::size_t m_t = aligned_step(t, grid, "quadratic_variation");
    std::vector<double> out;
    out.reserve(r_list.size());
    for (double r : r_list) {
        if (!(r > 0.0) || r > t + 1e-12)
            throw std::domain_error("quadratic_variation: need 0 < r <= t");
        const double ratio = r / grid.dt;
        const auto m_r = static_cast<std::size_t>(std::llround(ratio));
        if (std::fabs(ratio - static_cast<double>(m_r)) > 1e-9)
            throw std::domain_error("quadratic_variation: r must be lattice-aligned");
        double acc = 0.0;
        for (std::size_t m = 0; m < std::min(m_r, m_t); ++m) {
            const double tau = layer_effective_time(t, m, grid.dt);
            const double s_mid = (static_cast<double>(m) + 0.5) * grid.dt;
            const JRange jr = support_range(grid, x, kSupportSigmas * std::sqrt(tau));
            const double inv2tau = 0.5 / tau;
            const double norm = 1.0 / std::sqrt(6.283185307179586 * tau);
            double layer = 0.0;
            for (std::size_t j = jr.lo; j < jr.hi; ++j) {
                const double d = grid.x_at(j) - x;
                const double w = norm * std::exp(-d * d * inv2tau);
                const double z = Z.eval(s_mid, grid.x_at(j));
                layer += w * w * z * z;
            }
            acc += layer * grid.dt * grid.dx;
        }
        out.push_back(acc);
    }
    return out;
}

double window_infimum(const std::vector<ConvolutionFrame>& frames, double x_lo,
                      double x_hi) {
    bool any = false;
    double best = 0.0;
    for (const auto& fr : frames) {
        const GridSpec& g = fr.grid;
        for (std::size_t j = 0; j < g.n_x; ++j) {
            const double x = g.x_at(j);
            if (x < x_lo || x > x_hi) continue;
            if (!any || fr.values[j] < best) best = fr.values[j];
            any = true;
        }
    }
    if (!any) throw std::domain_error("window_infimum: empty window");
    return best;
}

}  // namespace she
