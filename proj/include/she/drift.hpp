#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace she {

enum class DriftFamily { Affine, Power, Exponential, LogisticCap, Table, Truncated };

/// What is certified about the growth of b at +infinity. Convergence of
/// the Osgood integral is decided from this, never from samples alone.
enum class TailClass {
    SuperlinearConvergent,  ///< b(y) >= kappa * y^(1+delta) eventually
    LinearOrSlower,         ///< b(y) <= kappa * y eventually
    Bounded,                ///< sup b < infinity
    Undecided               ///< opaque (table-backed beyond its range)
};

/// Positive nondecreasing locally Lipschitz scalar drift, as a named
/// family plus parameters. Families are clamped below zero where the raw
/// formula would break monotonicity (e.g. 1 + u^2 on u < 0 evaluates as 1).
class DriftSpec {
public:
    static DriftSpec affine(double beta);                 ///< 1 + beta*(u v 0)
    static DriftSpec power(double p);                     ///< 1 + (u v 0)^p
    static DriftSpec exponential();                       ///< e^u
    static DriftSpec logistic_cap(double cap, double rate);
    static DriftSpec table(std::vector<std::pair<double, double>> points);

    double operator()(double u) const;
    TailClass tail_class() const;
    DriftFamily family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    std::string name() const;

    /// b^(n) = min(b, n); globally Lipschitz and bounded.
    friend DriftSpec truncate(const DriftSpec& b, double n);
    double truncation_level() const { return level_; }
    const DriftSpec* inner() const { return inner_.get(); }

private:
    DriftFamily family_ = DriftFamily::Affine;
    std::vector<double> params_;
    std::vector<std::pair<double, double>> table_;
    std::shared_ptr<const DriftSpec> inner_;
    double level_ = 0.0;
};

DriftSpec truncate(const DriftSpec& b, double n);

/// (b + n - |b - n|) / 2, algebraically equal to min(b, n).
double truncate_closed_form(double b_of_x, double n);

/// sigma with certified bounds 0 < c1 <= sigma <= c2.
class DiffusionSpec {
public:
    static DiffusionSpec constant(double c);
    /// base + amp*sin(u), bounds (base-|amp|, base+|amp|)
    static DiffusionSpec sine(double base, double amp);

    double operator()(double u) const;
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::string name() const;

private:
    std::vector<double> params_;
    bool is_constant_ = true;
    double c1_ = 0.0, c2_ = 0.0;
};

struct OsgoodVerdict {
    bool finite = false;
    bool undecided = false;
    double value = 0.0;       ///< meaningful when finite
    double lower_limit = 0.0;
    std::string tail_bound_used;
};

/// int_lower^inf dy / b(y), decided through the family's tail class with
/// an analytic tail remainder; quadrature handles the finite part.
OsgoodVerdict osgood_integral(const DriftSpec& b, double lower, double tol = 1e-10);

struct ValidationReport {
    bool accepted = false;
    bool global_lipschitz = false;
    std::vector<std::string> violations;
};

struct ValidationOptions {
    std::size_t grid_points = 4096;
    double range = 1e6;  ///< geometric grid over [-range, range]
};

ValidationReport validate(const DriftSpec& b, const ValidationOptions& opt = {});
ValidationReport validate(const DiffusionSpec& s, const ValidationOptions& opt = {});

}  // namespace she
