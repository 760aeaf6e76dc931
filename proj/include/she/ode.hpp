#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "she/drift.hpp"

namespace she {

/// Hitting problem for G' = B(G), G(0) = A: time for G to rise to N.
/// N may be infinite when B comes from a drift spec whose tail is
/// certified superlinear.
struct HittingProblem {
    std::function<double(double)> B;  ///< positive Lipschitz on [A, N]
    double A = 0.0;
    double N = 0.0;
    bool to_infinity = false;
    /// Set when B is a drift-family function; required for N = infinity.
    std::optional<DriftSpec> B_drift;

    static HittingProblem power(double p, double A, double N);     ///< B(s) = s^p
    static HittingProblem constant(double beta, double A, double N);
    static HittingProblem from_drift(const DriftSpec& b, double A, double N);
    static HittingProblem from_drift_to_infinity(const DriftSpec& b, double A);
};

/// T = int_A^N ds / B(s). Returns +infinity when N is infinite and the
/// integral is certified divergent.
double hitting_time(const HittingProblem& p, double tol = 1e-10);

struct OdeTrajectory {
    double dt = 0.0;
    std::vector<double> values;  ///< values[i] = G(i*dt), capped at N once reached
    bool reached = false;
    double reach_time = std::numeric_limits<double>::infinity();
};

/// Integrate G(t) = A + int_0^t B(G(s)) ds on [0, horizon] with RK4 and
/// step halving; once B(G)*dt crowds the solution (blowup approach) the
/// remaining time to N is taken from the inverse form int_G^N ds/B.
OdeTrajectory solve_comparison(const HittingProblem& p, double horizon, double dt);

struct LowerBoundCheck {
    bool hypothesis_ok = false;  ///< F(t) >= A + int_0^t B(F) ds on the lattice
    bool conclusion_ok = false;  ///< inf over [T, 2T] of F >= N (lattice tolerance)
    double witness_time = -1.0;  ///< first failing lattice time, when not ok
    double T = 0.0;
};

/// Checks the comparison statement: any F dominating its own drift
/// integral from level A is at or above N throughout [T, 2T].
LowerBoundCheck verify_lower_bound(const std::vector<double>& F, double dt,
                                   const HittingProblem& p);

}  // namespace she
