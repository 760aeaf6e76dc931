#include "she/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "she/quadrature.hpp"

namespace she {

DriftSpec DriftSpec::affine(double beta) {
    if (beta < 0.0) throw std::domain_error("affine drift: beta must be >= 0");
    DriftSpec s;
    s.family_ = DriftFamily::Affine;
    s.params_ = {beta};
    return s;
}

DriftSpec DriftSpec::power(double p) {
    if (!(p > 0.0)) throw std::domain_error("power drift: exponent must be positive");
    DriftSpec s;
    s.family_ = DriftFamily::Power;
    s.params_ = {p};
    return s;
}

DriftSpec DriftSpec::exponential() {
    DriftSpec s;
    s.family_ = DriftFamily::Exponential;
    return s;
}

DriftSpec DriftSpec::logistic_cap(double cap, double rate) {
    if (!(cap > 0.0) || !(rate > 0.0))
        throw std::domain_error("logistic_cap drift: cap and rate must be positive");
    DriftSpec s;
    s.family_ = DriftFamily::LogisticCap;
    s.params_ = {cap, rate};
    return s;
}

DriftSpec DriftSpec::table(std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) throw std::domain_error("table drift: need >= 2 points");
    std::sort(points.begin(), points.end());
    double prev = 0.0;
    bool first = true;
    for (const auto& [u, b] : points) {
        if (!(b > 0.0)) throw std::domain_error("table drift: values must be positive");
        if (!first && b < prev)
            throw std::domain_error("table drift: values must be nondecreasing");
        prev = b;
        first = false;
    }
    DriftSpec s;
    s.family_ = DriftFamily::Table;
    s.table_ = std::move(points);
    return s;
}

double DriftSpec::operator()(double u) const {
    switch (family_) {
        case DriftFamily::Affine:
            return 1.0 + params_[0] * std::max(u, 0.0);
        case DriftFamily::Power:
            return 1.0 + std::pow(std::max(u, 0.0), params_[0]);
        case DriftFamily::Exponential:
            return std::exp(u);
        case DriftFamily::LogisticCap:
            return params_[0] / (1.0 + std::exp(-params_[1] * u));
        case DriftFamily::Table: {
            if (u <= table_.front().first) return table_.front().second;
            if (u >= table_.back().first) return table_.back().second;
            auto it = std::upper_bound(
                table_.begin(), table_.end(), u,
                [](double v, const auto& p) { return v < p.first; });
            const auto& [u1, b1] = *it;
            const auto& [u0, b0] = *(it - 1);
            const double w = (u - u0) / (u1 - u0);
            return b0 + w * (b1 - b0);
        }
        case DriftFamily::Truncated:
            return std::min((*inner_)(u), level_);
    }
    return 0.0;
}

TailClass DriftSpec::tail_class() const {
    switch (family_) {
        case DriftFamily::Affine:
            return TailClass::LinearOrSlower;
        case DriftFamily::Power:
            return params_[0] > 1.0 ? TailClass::SuperlinearConvergent
                                    : TailClass::LinearOrSlower;
        case DriftFamily::Exponential:
            return TailClass::SuperlinearConvergent;
        case DriftFamily::LogisticCap:
            return TailClass::Bounded;
        case DriftFamily::Table:
            return TailClass::Undecided;
        case DriftFamily::Truncated:
            return TailClass::Bounded;
    }
    return TailClass::Undecided;
}

std::string DriftSpec::name() const {
    switch (family_) {
        case DriftFamily::Affine:
            return "affine(beta=" + std::to_string(params_[0]) + ")";
        case DriftFamily::Power:
            return "power(p=" + std::to_string(params_[0]) + ")";
        case DriftFamily::Exponential:
            return "exponential";
        case DriftFamily::LogisticCap:
            return "logistic_cap(cap=" + std::to_string(params_[0]) +
                   ",rate=" + std::to_string(params_[1]) + ")";
        case DriftFamily::Table:
            return "table[" + std::to_string(table_.size()) + "]";
        case DriftFamily::Truncated:
            return "min(" + inner_->name() + "," + std::to_string(level_) + ")";
    }
    return "?";
}

DriftSpec truncate(const DriftSpec& b, double n) {
    if (!(n > 0.0)) throw std::domain_error("truncate: level must be positive");
    DriftSpec s;
    s.family_ = DriftFamily::Truncated;
    s.inner_ = std::make_shared<DriftSpec>(b);
    s.level_ = n;
    return s;
}

double truncate_closed_form(double b_of_x, double n) {
    return (b_of_x + n - std::fabs(b_of_x - n)) / 2.0;
}

DiffusionSpec DiffusionSpec::constant(double c) {
    if (!(c > 0.0)) throw std::domain_error("constant diffusion: c must be positive");
    DiffusionSpec s;
    s.is_constant_ = true;
    s.params_ = {c};
    s.c1_ = s.c2_ = c;
    return s;
}

DiffusionSpec DiffusionSpec::sine(double base, double amp) {
    if (!(base - std::fabs(amp) > 0.0))
        throw std::domain_error("sine diffusion: base - |amp| must be positive");
    DiffusionSpec s;
    s.is_constant_ = false;
    s.params_ = {base, amp};
    s.c1_ = base - std::fabs(amp);
    s.c2_ = base + std::fabs(amp);
    return s;
}

double DiffusionSpec::operator()(double u) const {
    if (is_constant_) return params_[0];
    return params_[0] + params_[1] * std::sin(u);
}

std::string DiffusionSpec::name() const {
    if (is_constant_) return "constant(" + std::to_string(params_[0]) + ")";
    return "sine(base=" + std::to_string(params_[0]) +
           ",amp=" + std::to_string(params_[1]) + ")";
}

OsgoodVerdict osgood_integral(const DriftSpec& b, double lower, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("osgood_integral: tol must be positive");
    OsgoodVerdict v;
    v.lower_limit = lower;
    switch (b.tail_class()) {
        case TailClass::LinearOrSlower:
            v.finite = false;
            v.tail_bound_used = "b(y) <= kappa*y eventually; integral diverges";
            return v;
        case TailClass::Bounded:
            v.finite = false;
            v.tail_bound_used = "b bounded; integral diverges";
            return v;
        case TailClass::Undecided:
            v.undecided = true;
            v.tail_bound_used = "opaque table: tail undecidable from samples";
            return v;
        case TailClass::SuperlinearConvergent:
            break;
    }
    // Finite part by quadrature plus an analytic tail remainder chosen so
    // the remainder's own error is below tol.
    double cut, tail;
    if (b.family() == DriftFamily::Exponential) {
        cut = std::max(lower, 0.0) + 40.0;
        tail = std::exp(-cut);
        v.tail_bound_used = "exp tail: int_Y^inf e^-y dy = e^-Y";
    } else {
        // power family, p > 1: |int_Y^inf [1/(1+y^p) - y^-p] dy| <= Y^(1-2p)/(2p-1)
        const double p = b.params()[0];
        cut = std::max({lower, 2.0, std::pow(tol * (2.0 * p - 1.0), 1.0 / (1.0 - 2.0 * p))});
        tail = std::pow(cut, 1.0 - p) / (p - 1.0);
        v.tail_bound_used = "power tail: int_Y^inf y^-p dy = Y^(1-p)/(p-1)";
    }
    QuadResult q = integrate([&b](double y) { return 1.0 / b(y); }, lower, cut,
                             tol * 1e-2, tol * 1e-2, 4000);
    if (!q.converged)
        throw QuadratureError("osgood_integral: quadrature did not converge", q.error);
    v.finite = true;
    v.value = q.value + tail;
    return v;
}

namespace {

std::vector<double> geometric_grid(std::size_t n, double range) {
    // Symmetric, geometrically spaced magnitudes from 1e-6 up to `range`.
    std::vector<double> g;
    g.reserve(n + 1);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double mag =
            1e-6 * std::pow(range / 1e-6, static_cast<double>(i) / (half - 1));
        g.push_back(-mag);
        g.push_back(mag);
    }
    g.push_back(0.0);
    std::sort(g.begin(), g.end());
    return g;
}

}  // namespace

ValidationReport validate(const DriftSpec& b, const ValidationOptions& opt) {
    ValidationReport rep;
    const auto grid = geometric_grid(opt.grid_points, opt.range);
    // Zero is tolerated in the far-left tail (underflow of e.g. e^u); a
    // negative or NaN value is a genuine positivity violation, as is b(0) <= 0.
    if (!(b(0.0) > 0.0)) rep.violations.push_back("positivity fails at u=0");
    double prev = b(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = b(grid[i]);
        if (cur < 0.0 || std::isnan(cur)) {
            rep.violations.push_back("positivity fails at u=" + std::to_string(grid[i]));
            break;
        }
        if (cur < prev * (1.0 - 1e-12)) {
            rep.violations.push_back("monotonicity fails at u=" + std::to_string(grid[i]));
            break;
        }
        prev = cur;
    }
    // Global Lipschitz iff the difference quotients stop growing at the
    // far end of the grid; compare slopes on [range/2, range] vs [1, 2].
    const double s_far = (b(opt.range) - b(opt.range / 2.0)) / (opt.range / 2.0);
    const double s_near = b(2.0) - b(1.0);
    rep.global_lipschitz = std::isfinite(s_far) && s_far <= 4.0 * (s_near + 1.0);
    rep.accepted = rep.violations.empty();
    return rep;
}

ValidationReport validate(const DiffusionSpec& s, const ValidationOptions& opt) {
    ValidationReport rep;
    const auto grid = geometric_grid(opt.grid_points, opt.range);
    double lip = 0.0;
    double prev = s(grid.front());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = s(grid[i]);
        if (!(v >= s.c1()) || !(v <= s.c2())) {
            rep.violations.push_back("bounds fail at u=" + std::to_string(grid[i]));
            break;
        }
        if (i > 0) {
            const double du = grid[i] - grid[i - 1];
            if (du > 0.0) lip = std::max(lip, std::fabs(v - prev) / du);
        }
        prev = v;
    }
    if (!(s.c1() > 0.0)) rep.violations.push_back("c1 must be positive");
    rep.global_lipschitz = std::isfinite(lip);
    rep.accepted = rep.violations.empty();
    return rep;
}

}  // namespace she
