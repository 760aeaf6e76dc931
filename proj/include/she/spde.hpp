#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "she/drift.hpp"
#include "she/noise.hpp"

namespace she {

enum class Boundary { Periodic, Reflecting };

/// One time slice of the solution field.
struct FieldFrame {
    double t = 0.0;
    std::vector<double> values;
};

struct SpdeProblem {
    DriftSpec drift = DriftSpec::affine(0.0);
    DiffusionSpec diffusion = DiffusionSpec::constant(1.0);
    std::function<double(double)> u0;  ///< bounded initial data
    double u0_inf = 0.0;               ///< rho = inf u0
    double u0_sup = 0.0;               ///< sup |u0|
    GridSpec grid;
    Boundary boundary = Boundary::Periodic;
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;
    double ceiling = 1e12;
    std::size_t frame_stride = 1;  ///< 0 disables frame storage
};

struct CeilingHit {
    double t = 0.0;
    double x = 0.0;
};

struct Trajectory {
    GridSpec grid;
    std::size_t frame_stride = 1;
    std::vector<FieldFrame> frames;
    std::vector<double> sup_u;  ///< per completed step, sup over x
    std::vector<double> inf_u;
    std::vector<CeilingHit> ceiling_hits;
    bool truncated = false;            ///< stopped early at the numeric ceiling
    std::size_t steps_completed = 0;

    /// First lattice time with sup_x u >= level; +inf when never reached.
    double first_time_above(double level) const;
};

/// Explicit Euler-Maruyama / central-difference step for
///   du = (1/2) u_xx dt + b(u) dt + sigma(u) dW.
/// Deterministic in (problem, noise). CFL requires dt <= dx^2.
Trajectory solve(const SpdeProblem& p, const NoiseGrid& noise);

/// Convenience overload generating the noise from (grid, seed, stream).
Trajectory solve(const SpdeProblem& p);

/// Serial reference stepper (no OpenMP), for cross-checking.
Trajectory solve_serial(const SpdeProblem& p, const NoiseGrid& noise);

/// Test hook: same stepper with arbitrary drift/diffusion callables
/// (e.g. zero drift for heat-equation regressions).
Trajectory solve_with(const std::function<double(double)>& b,
                      const std::function<double(double)>& sigma,
                      const SpdeProblem& p, const NoiseGrid& noise,
                      bool parallel = true);

struct LadderResult {
    std::vector<double> levels;
    std::vector<Trajectory> trajectories;
    std::vector<double> escalation_times;  ///< per level, +inf if not reached
    bool monotone = true;                  ///< pointwise coupling check result
    double worst_violation = 0.0;
    CeilingHit violation_witness;
};

/// Solves once per truncation level b^(n), all on one shared NoiseGrid,
/// and verifies the pointwise comparison u^(n) <= u^(m) for n <= m.
/// Escalation times use threshold_rule (default n/2).
LadderResult minimal_ladder(const SpdeProblem& p, const std::vector<double>& levels,
                            const std::function<double(double)>& threshold_rule = {});

struct BlowupScanRow {
    double level = 0.0;
    double threshold = 0.0;
    double tau = 0.0;             ///< first lattice time sup_x u >= threshold; +inf if none
    double osgood_prediction = 0.0;  ///< hitting time of ell*b from M+rho to threshold
};

struct BlowupScanResult {
    std::vector<BlowupScanRow> rows;
    double ell = 0.0;  ///< kernel-mass constant Phi(1/2) - Phi(0)
};

BlowupScanResult blowup_scan(const SpdeProblem& p, const std::vector<double>& levels,
                             const std::function<double(double)>& threshold_rule = {},
                             double comparison_start_level = 1.0);

}  // namespace she
