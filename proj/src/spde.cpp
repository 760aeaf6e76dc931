#include "she/spde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "she/ode.hpp"
#include "she/quadrature.hpp"
#include "she/stats.hpp"

namespace she {

double Trajectory::first_time_above(double level) const {
    for (std::size_t m = 0; m < sup_u.size(); ++m)
        if (sup_u[m] >= level) return static_cast<double>(m + 1) * grid.dt;
    return std::numeric_limits<double>::infinity();
}

Trajectory solve_with(const std::function<double(double)>& b,
                      const std::function<double(double)>& sigma,
                      const SpdeProblem& p, const NoiseGrid& noise, bool parallel) {
    const GridSpec& g = p.grid;
    g.validate();
    if (g.dt > g.dx * g.dx * (1.0 + 1e-12))
        throw std::domain_error("solve: CFL violated, need dt <= dx^2");
    if (!(noise.grid == g))
        throw std::domain_error("solve: noise lattice does not match problem grid");

    Trajectory out;
    out.grid = g;
    out.frame_stride = p.frame_stride;
    out.sup_u.reserve(g.n_t);
    out.inf_u.reserve(g.n_t);

    const std::size_t n = g.n_x;
    std::vector<double> u(n), next(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = p.u0 ? p.u0(g.x_at(j)) : 0.0;

    const double lap_c = g.dt / (2.0 * g.dx * g.dx);
    const double inv_dx = 1.0 / g.dx;

    auto push_frame = [&](double t, const std::vector<double>& v) {
        if (p.frame_stride == 0) return;
        FieldFrame f;
        f.t = t;
        f.values = v;
        out.frames.push_back(std::move(f));
    };
    push_frame(0.0, u);

    for (std::size_t m = 0; m < g.n_t; ++m) {
        const double* row = noise.increments.data() + m * n;
        auto update = [&](std::size_t j) {
            const double uj = u[j];
            double ul, ur;
            if (p.boundary == Boundary::Periodic) {
                ul = u[j == 0 ? n - 1 : j - 1];
                ur = u[j == n - 1 ? 0 : j + 1];
            } else {  // reflecting
                ul = u[j == 0 ? 1 : j - 1];
                ur = u[j == n - 1 ? n - 2 : j + 1];
            }
            next[j] = uj + lap_c * (ur - 2.0 * uj + ul) + g.dt * b(uj) +
                      sigma(uj) * row[j] * inv_dx;
        };
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (long long j = 0; j < static_cast<long long>(n); ++j)
                update(static_cast<std::size_t>(j));
        } else {
            for (std::size_t j = 0; j < n; ++j) update(j);
        }
        std::swap(u, next);

        const double t_now = static_cast<double>(m + 1) * g.dt;
        double lo = u[0], hi = u[0];
        bool hit = false;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = u[j];
            if (std::isnan(v))
                throw std::runtime_error("solve: NaN at step " + std::to_string(m + 1) +
                                         ", node " + std::to_string(j));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v >= p.ceiling) {
                out.ceiling_hits.push_back({t_now, g.x_at(j)});
                hit = true;
            }
        }
        out.sup_u.push_back(hi);
        out.inf_u.push_back(lo);
        out.steps_completed = m + 1;
        if (p.frame_stride != 0 && (m + 1) % p.frame_stride == 0) push_frame(t_now, u);
        if (hit) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

Trajectory solve(const SpdeProblem& p, const NoiseGrid& noise) {
    const DriftSpec b = p.drift;
    const DiffusionSpec s = p.diffusion;
    return solve_with([b](double u) { return b(u); }, [s](double u) { return s(u); }, p,
                      noise, true);
}

Trajectory solve(const SpdeProblem& p) {
    return solve(p, generate(p.grid, p.seed, p.stream));
}

Trajectory solve_serial(const SpdeProblem& p, const NoiseGrid& noise) {
    const DriftSpec b = p.drift;
    const DiffusionSpec s = p.diffusion;
    return solve_with([b](double u) { return b(u); }, [s](double u) { return s(u); }, p,
                      noise, false);
}

LadderResult minimal_ladder(const SpdeProblem& p, const std::vector<double>& levels,
                            const std::function<double(double)>& threshold_rule) {
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] < levels[i - 1])
            throw std::domain_error("minimal_ladder: levels must be nondecreasing");
    const auto rule =
        threshold_rule ? threshold_rule : [](double n) { return n / 2.0; };

    const NoiseGrid noise = generate(p.grid, p.seed, p.stream);
    LadderResult out;
    out.levels = levels;
    for (double n : levels) {
        SpdeProblem q = p;
        q.drift = truncate(p.drift, n);
        out.trajectories.push_back(solve(q, noise));
        out.escalation_times.push_back(out.trajectories.back().first_time_above(rule(n)));
    }

    // Pointwise comparison u^(n) <= u^(m) for n <= m on the shared noise,
    // over the steps both levels completed.
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const Trajectory& lo = out.trajectories[i];
        const Trajectory& hi = out.trajectories[i + 1];
        if (p.frame_stride == 0) continue;
        const std::size_t n_frames = std::min(lo.frames.size(), hi.frames.size());
        for (std::size_t f = 0; f < n_frames; ++f) {
            for (std::size_t j = 0; j < p.grid.n_x; ++j) {
                const double a = lo.frames[f].values[j];
                const double b = hi.frames[f].values[j];
                const double tol = 1e-9 * (1.0 + std::fabs(b));
                if (a > b + tol) {
                    const double excess = a - b;
                    if (excess > out.worst_violation) {
                        out.worst_violation = excess;
                        out.violation_witness = {lo.frames[f].t, p.grid.x_at(j)};
                    }
                    out.monotone = false;
                }
            }
        }
    }
    return out;
}

BlowupScanResult blowup_scan(const SpdeProblem& p, const std::vector<double>& levels,
                             const std::function<double(double)>& threshold_rule,
                             double comparison_start_level) {
    const auto rule =
        threshold_rule ? threshold_rule : [](double n) { return n / 2.0; };
    BlowupScanResult out;
    out.ell = normal_cdf(0.5) - normal_cdf(0.0);

    const NoiseGrid noise = generate(p.grid, p.seed, p.stream);
    for (double n : levels) {
        SpdeProblem q = p;
        q.drift = truncate(p.drift, n);
        const Trajectory traj = solve(q, noise);
        BlowupScanRow row;
        row.level = n;
        row.threshold = rule(n);
        row.tau = traj.first_time_above(row.threshold);
        // Hitting time of the dominating ODE F' = ell * b(F) from M + rho.
        const double a_level = comparison_start_level + p.u0_inf;
        if (row.threshold > a_level) {
            const DriftSpec& b = p.drift;
            row.osgood_prediction =
                integrate_or_throw([&b](double s) { return 1.0 / b(s); }, a_level,
                                   row.threshold, 1e-8, 1e-10) /
                out.ell;
        } else {
            row.osgood_prediction = 0.0;
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace she
