#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "she/convolution.hpp"
#include "she/kernel.hpp"
#include "she/spde.hpp"

using namespace she;

namespace {
GridSpec make_grid(double dt, double dx, double horizon, double x_min, double span) {
    GridSpec g;
    g.dt = dt;
    g.dx = dx;
    g.n_t = static_cast<std::size_t>(std::llround(horizon / dt));
    g.x_min = x_min;
    g.n_x = static_cast<std::size_t>(std::llround(span / dx));
    return g;
}

SpdeProblem zero_problem(const GridSpec& g, std::uint64_t seed) {
    SpdeProblem p;
    p.drift = DriftSpec::affine(0.0);
    p.diffusion = DiffusionSpec::constant(1.0);
    p.u0 = [](double) { return 0.0; };
    p.grid = g;
    p.seed = seed;
    return p;
}
}  // namespace

TEST_CASE("preconditions") {
    GridSpec g = make_grid(0.02, 0.1, 1.0, -5.0, 10.0);  // dt > dx^2
    SpdeProblem p = zero_problem(g, 1);
    CHECK_THROWS_AS(solve(p), std::domain_error);

    g = make_grid(0.01, 0.1, 1.0, -5.0, 10.0);
    p = zero_problem(g, 1);
    GridSpec other = g;
    other.n_x += 1;
    CHECK_THROWS_AS(solve(p, generate(other, 1, 0)), std::domain_error);
}

TEST_CASE("noiseless heat-equation regression against the kernel oracle") {
    // dt = dx^2/2 keeps the explicit stencil away from its even/odd
    // decoupling point; the step's midpoint value at x = 0 removes the
    // half-cell bias of the lattice restriction.
    const GridSpec g = make_grid(0.00125, 0.05, 0.25, -10.0, 20.0);
    SpdeProblem p = zero_problem(g, 1);
    p.u0 = [](double x) { return x > 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0); };
    const NoiseGrid noise = generate(g, 1, 0);  // unused by sigma = 0
    const Trajectory tr = solve_with([](double) { return 0.0; },
                                     [](double) { return 0.0; }, p, noise, true);
    REQUIRE(tr.steps_completed == g.n_t);
    const std::vector<double>& last = tr.frames.back().values;
    const std::size_t j0 = 200;  // x = 0
    CHECK(g.x_at(j0) == doctest::Approx(0.0));
    CHECK(last[j0] == doctest::Approx(0.5).epsilon(0.01));
    const std::size_t j1 = 210;  // x = 0.5 = sqrt(t), one std in
    CHECK(last[j1] ==
          doctest::Approx(convolve_initial(p.u0, 0.25, 0.5)).epsilon(0.01));
}

TEST_CASE("constant drift: mean field grows like beta * t") {
    const GridSpec g = make_grid(0.01, 0.1, 1.0, -6.4, 12.8);
    SpdeProblem p = zero_problem(g, 42);  // affine(0) drift is b == 1
    const std::size_t reps = 300;
    NoiseGrid noise = generate(g, 42, 0);
    double acc = 0.0, acc2 = 0.0;
    p.frame_stride = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(noise, static_cast<std::uint32_t>(r));
        SpdeProblem q = p;
        q.frame_stride = g.n_t;  // final frame only
        const Trajectory tr = solve(q, noise);
        const double v = tr.frames.back().values[64];  // x = 0
        acc += v;
        acc2 += v * v;
    }
    const double mean = acc / reps;
    const double var = acc2 / reps - mean * mean;
    const double se = std::sqrt(var / reps);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("determinism and serial/parallel agreement") {
    const GridSpec g = make_grid(0.0025, 0.05, 0.5, -4.0, 8.0);
    SpdeProblem p = zero_problem(g, 9);
    p.drift = truncate(DriftSpec::power(2.0), 6.0);
    p.diffusion = DiffusionSpec::sine(1.0, 0.5);
    const Trajectory a = solve(p);
    const Trajectory b = solve(p);
    CHECK(a.sup_u == b.sup_u);
    CHECK(a.inf_u == b.inf_u);
    REQUIRE(a.frames.size() == b.frames.size());
    CHECK(a.frames.back().values == b.frames.back().values);

    const NoiseGrid noise = generate(g, 9, 0);
    const Trajectory ser = solve_serial(p, noise);
    CHECK(a.frames.back().values == ser.frames.back().values);
    CHECK(a.sup_u == ser.sup_u);
}

TEST_CASE("ceiling truncation is recorded with locations") {
    const GridSpec g = make_grid(0.0025, 0.05, 1.0, -2.0, 4.0);
    SpdeProblem p = zero_problem(g, 3);
    p.drift = truncate(DriftSpec::exponential(), 1000.0);
    p.u0 = [](double) { return 10.0; };
    p.u0_inf = p.u0_sup = 10.0;
    p.ceiling = 50.0;
    const Trajectory tr = solve(p);
    CHECK(tr.truncated);
    CHECK_FALSE(tr.ceiling_hits.empty());
    CHECK(tr.steps_completed < g.n_t);
    CHECK(tr.first_time_above(50.0) ==
          doctest::Approx(static_cast<double>(tr.steps_completed) * g.dt));
}

TEST_CASE("first_time_above on a quiet trajectory is infinite") {
    const GridSpec g = make_grid(0.01, 0.1, 0.5, -3.0, 6.0);
    const Trajectory tr = solve(zero_problem(g, 4));
    CHECK(std::isinf(tr.first_time_above(1e6)));
}

TEST_CASE("ladder: duplicate levels give identical trajectories") {
    const GridSpec g = make_grid(0.0025, 0.05, 0.5, -4.0, 8.0);
    SpdeProblem p = zero_problem(g, 11);
    p.drift = DriftSpec::power(2.0);
    const LadderResult lr = minimal_ladder(p, {4.0, 4.0});
    CHECK(lr.monotone);
    CHECK(lr.trajectories[0].sup_u == lr.trajectories[1].sup_u);
    CHECK(lr.trajectories[0].frames.back().values ==
          lr.trajectories[1].frames.back().values);
    CHECK(lr.escalation_times[0] == lr.escalation_times[1]);
}

TEST_CASE("ladder: pointwise monotone coupling across levels") {
    const GridSpec g = make_grid(0.0025, 0.05, 1.0, -8.0, 16.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SpdeProblem p = zero_problem(g, seed);
        p.drift = DriftSpec::power(2.0);
        p.frame_stride = 10;
        const LadderResult lr = minimal_ladder(p, {2.0, 4.0, 8.0});
        CHECK(lr.monotone);
        CHECK(lr.worst_violation == 0.0);
    }
    SUBCASE("decreasing level list is rejected") {
        SpdeProblem p = zero_problem(g, 1);
        CHECK_THROWS_AS(minimal_ladder(p, {4.0, 2.0}), std::domain_error);
    }
}

TEST_CASE("drift ordering transfers to the solutions on shared noise") {
    const GridSpec g = make_grid(0.0025, 0.05, 1.0, -4.0, 8.0);
    const NoiseGrid noise = generate(g, 21, 0);
    SpdeProblem lo = zero_problem(g, 21);
    lo.drift = DriftSpec::affine(1.0);
    SpdeProblem hi = lo;
    hi.drift = DriftSpec::affine(2.0);
    const Trajectory a = solve(lo, noise);
    const Trajectory b = solve(hi, noise);
    for (std::size_t f = 0; f < a.frames.size(); ++f)
        for (std::size_t j = 0; j < g.n_x; ++j)
            CHECK(a.frames[f].values[j] <=
                  b.frames[f].values[j] + 1e-9 * (1.0 + std::fabs(b.frames[f].values[j])));
}

TEST_CASE("blowup scan") {
    const GridSpec g = make_grid(0.0025, 0.05, 2.0, -8.0, 16.0);
    SpdeProblem p = zero_problem(g, 5);
    p.drift = DriftSpec::power(2.0);
    p.frame_stride = 0;

    SUBCASE("single level equals a thresholded solve") {
        const BlowupScanResult r = blowup_scan(p, {2.0});
        SpdeProblem q = p;
        q.drift = truncate(p.drift, 2.0);
        const Trajectory tr = solve(q);
        CHECK(r.rows.size() == 1);
        CHECK(r.rows[0].tau == tr.first_time_above(1.0));
    }
    SUBCASE("unreachable threshold rule reports not-reached everywhere") {
        const BlowupScanResult r =
            blowup_scan(p, {2.0, 4.0}, [](double) { return 1e18; });
        for (const auto& row : r.rows) CHECK(std::isinf(row.tau));
    }
    SUBCASE("kernel-mass constant and the closed-form prediction") {
        const BlowupScanResult r =
            blowup_scan(p, {16.0}, [](double) { return 8.0; });
        CHECK(r.ell == doctest::Approx(0.1914624612740131).epsilon(1e-12));
        // int_1^8 dy/(1+y^2) / ell, arctan antiderivative
        const double expect = (std::atan(8.0) - std::atan(1.0)) / r.ell;
        CHECK(r.rows[0].osgood_prediction == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("mild-form residual shrinks under grid refinement") {
    // u(t, x) should match (p_t*u0) + kernel-weighted drift + stochastic
    // convolution up to discretization error that decays with dx.
    const double t = 0.5;
    auto median_residual = [&](double dx, double dt) {
        const GridSpec g = make_grid(dt, dx, t, -8.0, 16.0);
        std::vector<double> res;
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            SpdeProblem p = zero_problem(g, seed);
            p.drift = truncate(DriftSpec::power(2.0), 5.0);
            const NoiseGrid noise = generate(g, seed, 0);
            const Trajectory tr = solve(p, noise);
            const ConvolutionFrame I =
                stochastic_convolution(IntegrandSpec::constant(1.0), noise, t);
            for (int k = -4; k <= 4; ++k) {
                const double x = 0.1 * k;
                const std::size_t jx =
                    static_cast<std::size_t>(std::llround((x - g.x_min) / dx));
                // drift part of the mild form, midpoint kernel times
                double drift_sum = 0.0;
                for (std::size_t m = 0; m < g.n_t; ++m) {
                    const double tau = t - (static_cast<double>(m) + 0.5) * dt;
                    const std::vector<double>& um = tr.frames[m].values;
                    for (std::size_t j = 0; j < g.n_x; ++j) {
                        const double w = heat_kernel(tau, g.x_at(j) - x);
                        if (w > 0.0)
                            drift_sum += w * p.drift(um[j]) * dt * dx;
                    }
                }
                const double mild = drift_sum + I.values[jx];
                res.push_back(std::fabs(tr.frames.back().values[jx] - mild));
            }
        }
        std::sort(res.begin(), res.end());
        return res[res.size() / 2];
    };
    const double coarse = median_residual(0.1, 0.005);
    const double fine = median_residual(0.05, 0.00125);
    CHECK(fine < coarse);
}
