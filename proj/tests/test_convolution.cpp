#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "she/convolution.hpp"
#include "she/kernel.hpp"
#include "she/stats.hpp"

using namespace she;

namespace {
GridSpec conv_grid(double x_span = 17.0) {
    GridSpec g;
    g.dt = 0.05;
    g.dx = 0.05;
    g.n_t = 20;  // horizon t = 1
    g.x_min = -8.5;
    g.n_x = static_cast<std::size_t>(std::llround(x_span / g.dx)) + 1;
    return g;
}
}  // namespace

TEST_CASE("integrand bounds are enforced") {
    CHECK_THROWS_AS(IntegrandSpec::constant(0.0), std::domain_error);
    CHECK_THROWS_AS(IntegrandSpec::constant(-1.0), std::domain_error);
    CHECK_THROWS_AS(IntegrandSpec::function(2.0, 1.0, [](double, double) { return 1.5; }),
                    std::domain_error);
    const IntegrandSpec bad =
        IntegrandSpec::function(1.0, 2.0, [](double, double) { return 5.0; });
    CHECK_THROWS_AS(bad.eval(0.0, 0.0), std::runtime_error);
    CHECK(IntegrandSpec::constant(2.0).eval(0.3, -1.0) == doctest::Approx(2.0));
}

TEST_CASE("layer effective times telescope to the closed-form mass") {
    const double t = 1.0, dt = 0.05;
    double acc = 0.0;
    for (std::size_t m = 0; m < 20; ++m) {
        const double tau = layer_effective_time(t, m, dt);
        CHECK(tau > 0.0);
        // dt / sqrt(4 pi tau) is the exact squared-kernel mass of the layer
        acc += dt / std::sqrt(4.0 * 3.14159265358979324 * tau);
    }
    CHECK(acc == doctest::Approx(squared_kernel_mass(t, t)).epsilon(1e-12));
    CHECK(layer_effective_time(t, 19, dt) == doctest::Approx(dt / 4.0).epsilon(1e-12));
}

TEST_CASE("alignment and precondition errors") {
    const GridSpec g = conv_grid();
    const NoiseGrid n = generate(g, 1, 0);
    const IntegrandSpec z = IntegrandSpec::constant(1.0);
    CHECK_THROWS_AS(stochastic_convolution_at(z, n, 0.512, 0.0), std::domain_error);
    CHECK_THROWS_AS(stochastic_convolution_at(z, n, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(stochastic_convolution_at(z, n, 5.0, 0.0), std::domain_error);
}

TEST_CASE("linearity and determinism on a shared noise") {
    const GridSpec g = conv_grid();
    const NoiseGrid n = generate(g, 3, 0);
    const double a1 = stochastic_convolution_at(IntegrandSpec::constant(1.0), n, 1.0, 0.0);
    const double a2 = stochastic_convolution_at(IntegrandSpec::constant(2.0), n, 1.0, 0.0);
    CHECK(a2 == doctest::Approx(2.0 * a1).epsilon(1e-15));
    const double b1 = stochastic_convolution_at(IntegrandSpec::constant(1.0), n, 1.0, 0.0);
    CHECK(a1 == b1);
}

TEST_CASE("parallel and serial frames agree exactly") {
    const GridSpec g = conv_grid();
    const NoiseGrid n = generate(g, 11, 0);
    const IntegrandSpec z =
        IntegrandSpec::function(0.5, 1.5, [](double s, double y) {
            return 1.0 + 0.5 * std::sin(s + y);
        });
    const ConvolutionFrame par = stochastic_convolution(z, n, 1.0);
    const ConvolutionFrame ser = stochastic_convolution_serial(z, n, 1.0);
    REQUIRE(par.values.size() == ser.values.size());
    for (std::size_t j = 0; j < par.values.size(); ++j)
        CHECK(par.values[j] == ser.values[j]);
}

TEST_CASE("quadratic variation telescopes and is monotone") {
    const GridSpec g = conv_grid();
    const IntegrandSpec z = IntegrandSpec::constant(1.5);
    const std::vector<double> r_list = {0.05, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> qv = quadratic_variation(z, g, 1.0, 0.0, r_list);
    REQUIRE(qv.size() == r_list.size());
    for (std::size_t i = 0; i < qv.size(); ++i) {
        // constant integrand: qv is exactly c^2 (sqrt(t/pi) - sqrt((t-r)/pi))
        CHECK(qv[i] ==
              doctest::Approx(1.5 * 1.5 * squared_kernel_mass(1.0, r_list[i]))
                  .epsilon(1e-9));
        if (i > 0) CHECK(qv[i] >= qv[i - 1]);
    }
    CHECK_THROWS_AS(quadratic_variation(z, g, 1.0, 0.0, {1.5}), std::domain_error);
    CHECK_THROWS_AS(quadratic_variation(z, g, 1.0, 0.0, {0.512}), std::domain_error);
    CHECK_THROWS_AS(quadratic_variation(z, g, 1.0, 0.0, {-0.05}), std::domain_error);
}

TEST_CASE("bounded-integrand quadratic variation respects the sandwich") {
    const GridSpec g = conv_grid();
    const IntegrandSpec z =
        IntegrandSpec::function(0.8, 1.2, [](double s, double y) {
            return 1.0 + 0.2 * std::sin(3.0 * s) * std::cos(2.0 * y);
        });
    const std::vector<double> r_list = {0.05, 0.3, 0.6, 1.0};
    const std::vector<double> qv = quadratic_variation(z, g, 1.0, 0.4, r_list);
    for (std::size_t i = 0; i < qv.size(); ++i) {
        const double mass = squared_kernel_mass(1.0, r_list[i]);
        CHECK(qv[i] >= 0.8 * 0.8 * mass * (1.0 - 1e-9));
        CHECK(qv[i] <= 1.2 * 1.2 * mass * (1.0 + 1e-9));
    }
}

TEST_CASE("constant-Z convolution matches the exact Gaussian law") {
    const GridSpec g = conv_grid();
    NoiseGrid n = generate(g, 77, 0);
    const IntegrandSpec z = IntegrandSpec::constant(1.0);
    const std::size_t reps = 4000;
    std::vector<double> xs;
    xs.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        regenerate(n, static_cast<std::uint32_t>(r));
        xs.push_back(stochastic_convolution_at(z, n, 1.0, 0.0));
    }
    const SampleMoments m = sample_moments(xs);
    const double var = squared_kernel_mass(1.0, 1.0);  // 0.5641895...
    const double se_var = var * std::sqrt(2.0 / (reps - 1.0));
    CHECK(std::abs(m.mean) <= 4.0 * std::sqrt(var / reps));
    CHECK(std::abs(m.variance - var) <= 3.0 * se_var);
    CHECK(std::abs(m.skewness) <= 0.15);
    CHECK(std::abs(m.excess_kurtosis) <= 0.3);
}

TEST_CASE("spatial stationarity for constant integrands") {
    const GridSpec g = conv_grid(27.0);  // room for x = 10 away from edges
    NoiseGrid n = generate(g, 101, 0);
    const IntegrandSpec z = IntegrandSpec::constant(1.0);
    std::vector<double> at0, at10;
    for (std::size_t r = 0; r < 2000; ++r) {
        regenerate(n, static_cast<std::uint32_t>(r));
        at0.push_back(stochastic_convolution_at(z, n, 1.0, 0.0));
        at10.push_back(stochastic_convolution_at(z, n, 1.0, 10.0));
    }
    CHECK(ks_two_sample_pvalue(at0, at10) > 0.01);
}

TEST_CASE("window infimum") {
    const GridSpec g = conv_grid();
    const NoiseGrid n = generate(g, 5, 0);
    const IntegrandSpec z = IntegrandSpec::constant(1.0);
    std::vector<ConvolutionFrame> frames = {stochastic_convolution(z, n, 0.95),
                                            stochastic_convolution(z, n, 1.0)};
    SUBCASE("single-cell window returns that cell") {
        const std::vector<ConvolutionFrame> one = {frames[0]};
        const double v = window_infimum(one, 0.0, 0.02);  // only node x=0
        CHECK(v == frames[0].values[170]);                // x=0 is node 170
    }
    SUBCASE("infimum bounded by interior values") {
        const double v = window_infimum(frames, -1.0, 1.0);
        CHECK(v <= frames[1].values[170]);
        CHECK(v <= frames[0].values[150]);
    }
    SUBCASE("empty window is rejected") {
        CHECK_THROWS_AS(window_infimum(frames, 0.011, 0.012), std::domain_error);
    }
}
