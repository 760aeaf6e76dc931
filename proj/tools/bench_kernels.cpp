// Timing comparison between the OpenMP kernels and their serial reference
// implementations: the stochastic-convolution evaluator and the SPDE
// stepper. Each pair is also checked for exact agreement.

#include <chrono>
#include <cstdio>
#include <functional>

#include "she/convolution.hpp"
#include "she/noise.hpp"
#include "she/spde.hpp"

using namespace she;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& f, int iters) {
    f();  // warm-up
    const auto t0 = clk::now();
    for (int i = 0; i < iters; ++i) f();
    const auto t1 = clk::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

}  // namespace

int main() {
    GridSpec g;
    g.dt = 0.002;
    g.dx = 0.05;
    g.n_t = 500;
    g.x_min = -16.0;
    g.n_x = 640;
    const NoiseGrid noise = generate(g, 1, 0);

    // stochastic convolution over the final layer
    const IntegrandSpec Z = IntegrandSpec::constant(1.0);
    const double t = g.n_t * g.dt;
    ConvolutionFrame par, ser;
    const double conv_par =
        time_ms([&] { par = stochastic_convolution(Z, noise, t); }, 3);
    const double conv_ser =
        time_ms([&] { ser = stochastic_convolution_serial(Z, noise, t); }, 3);
    const bool conv_equal = par.values == ser.values;
    std::printf("stochastic_convolution  parallel %8.2f ms   serial %8.2f ms   "
                "speedup %.2fx   equal: %s\n",
                conv_par, conv_ser, conv_ser / conv_par, conv_equal ? "yes" : "NO");

    // SPDE stepper
    SpdeProblem p;
    p.drift = truncate(DriftSpec::power(2.0), 8.0);
    p.diffusion = DiffusionSpec::constant(1.0);
    p.u0 = [](double) { return 0.0; };
    p.grid = g;
    p.seed = 1;
    p.frame_stride = 0;
    Trajectory tp, ts;
    const double spde_par = time_ms([&] { tp = solve(p, noise); }, 3);
    const double spde_ser = time_ms([&] { ts = solve_serial(p, noise); }, 3);
    const bool spde_equal = tp.sup_u == ts.sup_u && tp.inf_u == ts.inf_u;
    std::printf("spde stepper            parallel %8.2f ms   serial %8.2f ms   "
                "speedup %.2fx   equal: %s\n",
                spde_par, spde_ser, spde_ser / spde_par, spde_equal ? "yes" : "NO");

    return conv_equal && spde_equal ? 0 : 1;
}
