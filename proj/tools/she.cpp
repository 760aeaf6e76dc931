// Experiment runner: configuration parsing, seeded execution, JSON + CSV
// artifact emission. Every artifact is a pure function of (config, seed).
//
// Exit codes: 0 = success and all declared checks passed,
//             1 = a numeric or invariant check failed (report written),
//             2 = config/schema violation or bad usage.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "she/convolution.hpp"
#include "she/drift.hpp"
#include "she/kernel.hpp"
#include "she/noise.hpp"
#include "she/ode.hpp"
#include "she/rng.hpp"
#include "she/spde.hpp"
#include "she/stats.hpp"
#include "she/verify.hpp"

using nlohmann::json;
using namespace she;

namespace {

constexpr int kConfigVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------ output

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Artifacts {
    std::filesystem::path dir;
    std::string stem;

    void write_json(const json& j) const {
        std::ofstream f(dir / (stem + ".json"));
        f << j.dump(2) << "\n";
    }
    void write_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) const {
        std::ofstream f(dir / (stem + ".csv"));
        for (std::size_t i = 0; i < header.size(); ++i)
            f << (i ? "," : "") << header[i];
        f << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                f << (i ? "," : "") << fmt17(row[i]);
            f << "\n";
        }
    }
    std::string json_path() const { return (dir / (stem + ".json")).string(); }
    std::string csv_path() const { return (dir / (stem + ".csv")).string(); }
};

Artifacts make_artifacts(const std::string& out_dir, const std::string& stem) {
    Artifacts a;
    a.dir = out_dir;
    a.stem = stem;
    std::filesystem::create_directories(a.dir);
    return a;
}

// ------------------------------------------------------------------ config

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (!j.contains("version"))
        throw ConfigError("config: missing required field 'version'");
    if (!j["version"].is_number_integer() ||
        j["version"].get<int>() != kConfigVersion)
        throw ConfigError("config: unsupported version (expected " +
                          std::to_string(kConfigVersion) + ")");
    return j;
}

// Apply a config value unless the flag was given on the command line
// (flags override file values).
template <typename T>
void jset(const json& cfg, const char* key, T& var, const CLI::Option* opt) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!cfg.contains(key)) return;
    try {
        var = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: field '") + key + "': " + e.what());
    }
}

// ------------------------------------------------------------------ specs

struct DriftOpts {
    std::string family = "power";
    std::vector<double> params = {2.0};
    double truncate_level = 0.0;  // 0 disables truncation
};

DriftSpec make_drift(const DriftOpts& o) {
    DriftSpec b = [&] {
        if (o.family == "affine") {
            if (o.params.size() != 1) throw ConfigError("affine drift needs 1 param");
            return DriftSpec::affine(o.params[0]);
        }
        if (o.family == "power") {
            if (o.params.size() != 1) throw ConfigError("power drift needs 1 param");
            return DriftSpec::power(o.params[0]);
        }
        if (o.family == "exponential") return DriftSpec::exponential();
        if (o.family == "logistic-cap") {
            if (o.params.size() != 2)
                throw ConfigError("logistic-cap drift needs 2 params");
            return DriftSpec::logistic_cap(o.params[0], o.params[1]);
        }
        throw ConfigError("unknown drift family '" + o.family +
                          "' (affine|power|exponential|logistic-cap)");
    }();
    const ValidationReport rep = validate(b);
    if (!rep.accepted)
        throw ConfigError("drift spec rejected: " + rep.violations.front());
    if (o.truncate_level > 0.0) b = truncate(b, o.truncate_level);
    return b;
}

json drift_json(const DriftOpts& o) {
    return json{{"family", o.family},
                {"params", o.params},
                {"truncate", o.truncate_level}};
}

struct GridOpts {
    double dt = 0.002;
    double dx = 0.05;
    double horizon = 1.0;
    double x_min = -8.0;
    double span = 16.0;
};

GridSpec make_grid(const GridOpts& o) {
    GridSpec g;
    g.dt = o.dt;
    g.dx = o.dx;
    g.n_t = static_cast<std::size_t>(std::llround(o.horizon / o.dt));
    g.x_min = o.x_min;
    g.n_x = static_cast<std::size_t>(std::llround(o.span / o.dx));
    if (g.n_t < 1 || g.n_x < 2) throw ConfigError("grid: empty lattice");
    return g;
}

json grid_json(const GridOpts& o) {
    return json{{"dt", o.dt},
                {"dx", o.dx},
                {"horizon", o.horizon},
                {"x_min", o.x_min},
                {"span", o.span}};
}

// Shared plumbing per subcommand: --config / --out / --seed.
struct Common {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    CLI::Option* seed_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "JSON config file (flags override file values)");
        const char* env = std::getenv("SHE_OUT_DIR");
        out_dir = env ? env : "out";
        cmd->add_option("--out", out_dir, "output directory for artifacts");
        seed_opt = cmd->add_option("--seed", seed, "base RNG seed");
    }
    json load() {
        const json cfg = load_config(config_path);
        jset(cfg, "seed", seed, seed_opt);
        jset(cfg, "out", out_dir, nullptr);
        return cfg;
    }
};

void attach_grid(CLI::App* cmd, GridOpts& g, std::vector<CLI::Option*>& opts) {
    opts.push_back(cmd->add_option("--dt", g.dt, "time step"));
    opts.push_back(cmd->add_option("--dx", g.dx, "space step"));
    opts.push_back(cmd->add_option("--horizon", g.horizon, "simulated time span"));
    opts.push_back(cmd->add_option("--x-min", g.x_min, "left domain edge"));
    opts.push_back(cmd->add_option("--span", g.span, "domain length"));
}

void grid_from_config(const json& cfg, GridOpts& g,
                      const std::vector<CLI::Option*>& opts) {
    jset(cfg, "dt", g.dt, opts[0]);
    jset(cfg, "dx", g.dx, opts[1]);
    jset(cfg, "horizon", g.horizon, opts[2]);
    jset(cfg, "x_min", g.x_min, opts[3]);
    jset(cfg, "span", g.span, opts[4]);
}

void attach_drift(CLI::App* cmd, DriftOpts& d, std::vector<CLI::Option*>& opts) {
    opts.push_back(cmd->add_option("--family", d.family,
                                   "drift family: affine|power|exponential|logistic-cap"));
    opts.push_back(cmd->add_option("--params", d.params, "drift family parameters"));
    opts.push_back(
        cmd->add_option("--truncate", d.truncate_level, "truncation level n (0 = off)"));
}

void drift_from_config(const json& cfg, DriftOpts& d,
                       const std::vector<CLI::Option*>& opts) {
    jset(cfg, "family", d.family, opts[0]);
    jset(cfg, "params", d.params, opts[1]);
    jset(cfg, "truncate", d.truncate_level, opts[2]);
}

// ------------------------------------------------------------------ simulate

int run_simulate(Common& com, DriftOpts& dopt, GridOpts& gopt, double sigma,
                 double u0_value, std::uint32_t stream, double ceiling,
                 const std::vector<CLI::Option*>& dflags,
                 const std::vector<CLI::Option*>& gflags) {
    const json cfg = com.load();
    drift_from_config(cfg, dopt, dflags);
    grid_from_config(cfg, gopt, gflags);
    jset(cfg, "sigma", sigma, nullptr);
    jset(cfg, "u0", u0_value, nullptr);
    jset(cfg, "ceiling", ceiling, nullptr);

    SpdeProblem p;
    p.drift = make_drift(dopt);
    p.diffusion = DiffusionSpec::constant(sigma);
    p.u0 = [u0_value](double) { return u0_value; };
    p.u0_inf = p.u0_sup = u0_value;
    p.grid = make_grid(gopt);
    p.seed = com.seed;
    p.stream = stream;
    p.ceiling = ceiling;
    p.frame_stride = 0;
    const Trajectory tr = solve(p);

    const Artifacts art = make_artifacts(com.out_dir, "simulate");
    std::vector<std::vector<double>> rows;
    for (std::size_t m = 0; m < tr.sup_u.size(); ++m)
        rows.push_back({static_cast<double>(m + 1) * p.grid.dt, tr.sup_u[m],
                        tr.inf_u[m],
                        tr.truncated && m + 1 == tr.steps_completed ? 1.0 : 0.0});
    art.write_csv({"t[1]", "sup_u[1]", "inf_u[1]", "ceiling_hit[flag]"}, rows);
    json out{{"version", kConfigVersion},
             {"subcommand", "simulate"},
             {"config",
              {{"drift", drift_json(dopt)},
               {"grid", grid_json(gopt)},
               {"sigma", sigma},
               {"u0", u0_value},
               {"seed", com.seed},
               {"stream", stream},
               {"ceiling", ceiling}}},
             {"steps_completed", tr.steps_completed},
             {"truncated", tr.truncated},
             {"final_sup_u", tr.sup_u.back()},
             {"final_inf_u", tr.inf_u.back()}};
    art.write_json(out);
    std::printf("simulate: drift=%s seed=%llu steps=%zu final sup_u=%.6g%s\n",
                p.drift.name().c_str(),
                static_cast<unsigned long long>(com.seed), tr.steps_completed,
                tr.sup_u.back(), tr.truncated ? " (hit ceiling)" : "");
    std::printf("artifacts: %s, %s\n", art.json_path().c_str(), art.csv_path().c_str());
    return 0;
}

// ------------------------------------------------------------------ ladder / scan

int run_ladder(Common& com, DriftOpts& dopt, GridOpts& gopt,
               std::vector<double>& levels, double sigma, double fixed_threshold,
               const std::vector<CLI::Option*>& dflags,
               const std::vector<CLI::Option*>& gflags, bool scan_mode) {
    const json cfg = com.load();
    drift_from_config(cfg, dopt, dflags);
    grid_from_config(cfg, gopt, gflags);
    jset(cfg, "levels", levels, nullptr);
    jset(cfg, "sigma", sigma, nullptr);
    jset(cfg, "threshold", fixed_threshold, nullptr);

    SpdeProblem p;
    p.drift = make_drift(dopt);
    p.diffusion = DiffusionSpec::constant(sigma);
    p.u0 = [](double) { return 0.0; };
    p.grid = make_grid(gopt);
    p.seed = com.seed;
    p.frame_stride = scan_mode ? 0 : 1;
    const auto rule = fixed_threshold > 0.0
                          ? std::function<double(double)>(
                                [fixed_threshold](double) { return fixed_threshold; })
                          : std::function<double(double)>();

    const json base_cfg{{"drift", drift_json(dopt)}, {"grid", grid_json(gopt)},
                        {"levels", levels},          {"sigma", sigma},
                        {"seed", com.seed},          {"threshold", fixed_threshold}};

    if (scan_mode) {
        const BlowupScanResult r = blowup_scan(p, levels, rule);
        const Artifacts art = make_artifacts(com.out_dir, "blowup-scan");
        std::vector<std::vector<double>> rows;
        for (const auto& row : r.rows)
            rows.push_back({row.level, row.threshold, row.tau, row.osgood_prediction});
        art.write_csv({"level[1]", "threshold[1]", "tau[1]", "osgood_prediction[1]"},
                      rows);
        json out{{"version", kConfigVersion},
                 {"subcommand", "blowup-scan"},
                 {"config", base_cfg},
                 {"ell", r.ell},
                 {"rows", json::array()}};
        for (const auto& row : r.rows)
            out["rows"].push_back({{"level", row.level},
                                   {"threshold", row.threshold},
                                   {"tau", row.tau},
                                   {"osgood_prediction", row.osgood_prediction}});
        art.write_json(out);
        std::printf("blowup-scan: %zu levels, ell=%.6f\n", r.rows.size(), r.ell);
        for (const auto& row : r.rows)
            std::printf("  n=%-6g threshold=%-6g tau=%-10.6g osgood=%.6g\n", row.level,
                        row.threshold, row.tau, row.osgood_prediction);
        std::printf("artifacts: %s, %s\n", art.json_path().c_str(),
                    art.csv_path().c_str());
        return 0;
    }

    const LadderResult r = minimal_ladder(p, levels, rule);
    const Artifacts art = make_artifacts(com.out_dir, "ladder");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < levels.size(); ++i)
        rows.push_back({levels[i], r.escalation_times[i],
                        r.trajectories[i].sup_u.back()});
    art.write_csv({"level[1]", "escalation_time[1]", "final_sup_u[1]"}, rows);
    json out{{"version", kConfigVersion},
             {"subcommand", "ladder"},
             {"config", base_cfg},
             {"monotone", r.monotone},
             {"worst_violation", r.worst_violation},
             {"escalation_times", r.escalation_times}};
    art.write_json(out);
    std::printf("ladder: %zu levels, pointwise monotone: %s\n", levels.size(),
                r.monotone ? "yes" : "NO");
    for (std::size_t i = 0; i < levels.size(); ++i)
        std::printf("  n=%-6g escalation=%-10.6g final sup=%.6g\n", levels[i],
                    r.escalation_times[i], r.trajectories[i].sup_u.back());
    std::printf("artifacts: %s, %s\n", art.json_path().c_str(), art.csv_path().c_str());
    if (!r.monotone)
        throw CheckFailure("ladder monotone-coupling check failed, see " +
                           art.json_path());
    return 0;
}

// ------------------------------------------------------------------ osgood / hitting

int run_osgood(Common& com, DriftOpts& dopt, double lower, double tol,
               std::string expect, const std::vector<CLI::Option*>& dflags) {
    const json cfg = com.load();
    drift_from_config(cfg, dopt, dflags);
    jset(cfg, "lower", lower, nullptr);
    jset(cfg, "tol", tol, nullptr);
    jset(cfg, "expect", expect, nullptr);

    const DriftSpec b = make_drift(dopt);
    const OsgoodVerdict v = osgood_integral(b, lower, tol);
    const std::string verdict =
        v.undecided ? "undecided" : (v.finite ? "finite" : "divergent");

    const Artifacts art = make_artifacts(com.out_dir, "osgood-check");
    art.write_csv({"finite[flag]", "undecided[flag]", "value[1]", "lower[1]"},
                  {{v.finite ? 1.0 : 0.0, v.undecided ? 1.0 : 0.0, v.value, lower}});
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "osgood-check"},
                        {"config",
                         {{"drift", drift_json(dopt)}, {"lower", lower}, {"tol", tol}}},
                        {"verdict", verdict},
                        {"value", v.value},
                        {"tail_bound_used", v.tail_bound_used}});
    if (v.finite)
        std::printf("osgood-check: %s -> finite, %.6f\n", b.name().c_str(), v.value);
    else
        std::printf("osgood-check: %s -> %s\n", b.name().c_str(), verdict.c_str());
    if (!expect.empty() && expect != verdict)
        throw CheckFailure("expected '" + expect + "', got '" + verdict + "'");
    return 0;
}

int run_hitting(Common& com, DriftOpts& dopt, double from, std::string to, double tol,
                const std::vector<CLI::Option*>& dflags) {
    const json cfg = com.load();
    drift_from_config(cfg, dopt, dflags);
    jset(cfg, "from", from, nullptr);
    jset(cfg, "to", to, nullptr);
    jset(cfg, "tol", tol, nullptr);

    const DriftSpec b = make_drift(dopt);
    HittingProblem p;
    if (to == "inf" || to == "infinity")
        p = HittingProblem::from_drift_to_infinity(b, from);
    else
        p = HittingProblem::from_drift(b, from, std::stod(to));
    const double T = hitting_time(p, tol);

    const Artifacts art = make_artifacts(com.out_dir, "hitting-time");
    art.write_csv({"from[1]", "to[1]", "T[1]"},
                  {{from, p.to_infinity ? std::numeric_limits<double>::infinity() : p.N,
                    T}});
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "hitting-time"},
                        {"config",
                         {{"drift", drift_json(dopt)},
                          {"from", from},
                          {"to", to},
                          {"tol", tol}}},
                        {"T", T}});
    std::printf("hitting-time: B=%s, A=%g, N=%s -> T = %.9g\n", b.name().c_str(), from,
                to.c_str(), T);
    return 0;
}

// ------------------------------------------------------------------ verify-*

int run_verify_tails(Common& com, double c, double t, std::vector<double>& lambdas,
                     std::size_t reps, double conf) {
    const json cfg = com.load();
    jset(cfg, "c", c, nullptr);
    jset(cfg, "t", t, nullptr);
    jset(cfg, "lambdas", lambdas, nullptr);
    jset(cfg, "reps", reps, nullptr);
    jset(cfg, "conf", conf, nullptr);

    const TailReport r = tail_report(c, t, lambdas, reps, com.seed, conf);
    const Artifacts art = make_artifacts(com.out_dir, "verify-tails");
    std::vector<std::vector<double>> rows;
    for (const auto& p : r.points)
        rows.push_back({p.lambda, p.p_hat, p.wilson.lo, p.wilson.hi, p.oracle,
                        p.lower_shape, p.upper_shape, p.underpowered ? 1.0 : 0.0});
    art.write_csv({"lambda[1]", "p_hat[1]", "wilson_lo[1]", "wilson_hi[1]",
                   "oracle[1]", "lower_shape[1]", "upper_shape[1]",
                   "underpowered[flag]"},
                  rows);
    json out{{"version", kConfigVersion},
             {"subcommand", "verify-tails"},
             {"config",
              {{"c", c}, {"t", t}, {"lambdas", lambdas}, {"reps", reps},
               {"conf", conf}, {"seed", com.seed}}},
             {"all_ok", r.all_ok}};
    art.write_json(out);
    std::printf("verify-tails: c=%g t=%g reps=%zu -> %s\n", c, t, reps,
                r.all_ok ? "all tail points consistent with the oracle"
                         : "ORACLE MISMATCH");
    for (const auto& p : r.points)
        std::printf("  lambda=%-5g p_hat=%.5f oracle=%.5f wilson=[%.5f, %.5f]%s\n",
                    p.lambda, p.p_hat, p.oracle, p.wilson.lo, p.wilson.hi,
                    p.underpowered ? " (underpowered)" : "");
    if (!r.all_ok) throw CheckFailure("tail report failed, see " + art.json_path());
    return 0;
}

int run_verify_moments(Common& com, std::string direction, double c0,
                       std::vector<double>& k_list, std::size_t reps) {
    const json cfg = com.load();
    jset(cfg, "direction", direction, nullptr);
    jset(cfg, "c0", c0, nullptr);
    jset(cfg, "k", k_list, nullptr);
    jset(cfg, "reps", reps, nullptr);

    std::vector<MomentReport> reports;
    if (direction == "spatial" || direction == "all")
        reports.push_back(spatial_moment_report(c0, 1.0, {{0.0, 0.5}, {0.0, 1.0}},
                                                k_list, reps, com.seed));
    if (direction == "temporal" || direction == "all")
        reports.push_back(temporal_moment_report(c0, 0.0, {{1.0, 0.1}, {1.0, 0.4}},
                                                 k_list, reps, com.seed + 1));
    if (direction == "combined" || direction == "all")
        reports.push_back(combined_modulus_report(
            c0, {{{1.0, 0.0}, {1.05, 0.25}}, {{1.0, 0.0}, {1.0, 0.5}}}, k_list, reps,
            com.seed + 2));
    if (reports.empty())
        throw ConfigError("verify-moments: direction must be "
                          "spatial|temporal|combined|all");

    const Artifacts art = make_artifacts(com.out_dir, "verify-moments");
    std::vector<std::vector<double>> rows;
    bool all_ok = true;
    json jreports = json::array();
    for (const auto& r : reports) {
        all_ok = all_ok && r.all_ok;
        json jr{{"direction", r.direction}, {"all_ok", r.all_ok}};
        for (const auto& p : r.points) {
            rows.push_back({p.k, p.separation, p.empirical, p.bootstrap.hi, p.bound,
                            p.within ? 1.0 : 0.0});
        }
        jreports.push_back(jr);
    }
    art.write_csv({"k[1]", "separation[1]", "empirical[1]", "bootstrap_hi[1]",
                   "bound[1]", "within[flag]"},
                  rows);
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "verify-moments"},
                        {"config",
                         {{"direction", direction}, {"c0", c0}, {"k", k_list},
                          {"reps", reps}, {"seed", com.seed}}},
                        {"reports", jreports},
                        {"all_ok", all_ok}});
    for (const auto& r : reports)
        std::printf("verify-moments[%s]: %s\n", r.direction.c_str(),
                    r.all_ok ? "all bounds hold at bootstrap confidence"
                             : "BOUND VIOLATED");
    if (!all_ok) throw CheckFailure("moment bounds failed, see " + art.json_path());
    return 0;
}

int run_verify_covariance(Common& com, double c, double t, std::vector<double>& xs,
                          std::size_t reps) {
    const json cfg = com.load();
    jset(cfg, "c", c, nullptr);
    jset(cfg, "t", t, nullptr);
    jset(cfg, "x", xs, nullptr);
    jset(cfg, "reps", reps, nullptr);

    const CovarianceReport r =
        covariance_decay(c, t, xs, [](double v) { return v; }, true, reps, com.seed);
    const Artifacts art = make_artifacts(com.out_dir, "verify-covariance");
    std::vector<std::vector<double>> rows;
    bool ok = true;
    for (const auto& p : r.points) {
        rows.push_back({p.x, p.empirical, p.std_error, p.oracle,
                        p.within ? 1.0 : 0.0, p.below_noise_floor ? 1.0 : 0.0});
        // near points must match the oracle; far points must sit in the noise
        if (std::fabs(p.x) < 10.0 * std::sqrt(t))
            ok = ok && p.within;
        else
            ok = ok && p.below_noise_floor;
    }
    art.write_csv({"x[1]", "empirical_cov[1]", "std_error[1]", "oracle[1]",
                   "within[flag]", "below_noise_floor[flag]"},
                  rows);
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "verify-covariance"},
                        {"config",
                         {{"c", c}, {"t", t}, {"x", xs}, {"reps", reps},
                          {"seed", com.seed}}},
                        {"all_ok", ok}});
    std::printf("verify-covariance: c=%g t=%g reps=%zu -> %s\n", c, t, reps,
                ok ? "oracle matched, far field in noise floor" : "MISMATCH");
    for (const auto& p : r.points)
        std::printf("  x=%-5g emp=%-12.5g oracle=%-12.5g se=%.3g\n", p.x, p.empirical,
                    p.oracle, p.std_error);
    if (!ok) throw CheckFailure("covariance check failed, see " + art.json_path());
    return 0;
}

int run_growth_scan(Common& com, double c, double a, double eps,
                    std::vector<double>& L_list, std::size_t reps) {
    const json cfg = com.load();
    jset(cfg, "c", c, nullptr);
    jset(cfg, "a", a, nullptr);
    jset(cfg, "eps", eps, nullptr);
    jset(cfg, "L", L_list, nullptr);
    jset(cfg, "reps", reps, nullptr);

    const GrowthScanResult r =
        growth_scan(IntegrandSpec::constant(c), a, eps, L_list, reps, com.seed);
    bool monotone = true;
    for (std::size_t rep = 0; rep < r.reps; ++rep)
        for (std::size_t i = 1; i < r.L_list.size(); ++i)
            if (r.statistics[i][rep] < r.statistics[i - 1][rep]) monotone = false;

    const Artifacts art = make_artifacts(com.out_dir, "growth-scan");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < r.L_list.size(); ++i)
        rows.push_back({r.L_list[i], r.medians[i]});
    art.write_csv({"L[lattice_units]", "median_statistic[1]"}, rows);
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "growth-scan"},
                        {"config",
                         {{"c", c}, {"a", a}, {"eps", eps}, {"L", L_list},
                          {"reps", reps}, {"seed", com.seed}}},
                        {"medians", r.medians},
                        {"monotone", monotone},
                        {"strict_increase_count", r.strict_increase_count}});
    std::printf("growth-scan: a=%g eps=%g reps=%zu, strict increase in %zu/%zu seeds\n",
                a, eps, reps, r.strict_increase_count, r.reps);
    for (std::size_t i = 0; i < r.L_list.size(); ++i)
        std::printf("  L=%-6g median statistic=%.6g\n", r.L_list[i], r.medians[i]);
    if (!monotone)
        throw CheckFailure("growth statistic not monotone in L, see " +
                           art.json_path());
    return 0;
}

int run_kernel_selftest(Common& com, std::size_t tuples) {
    const json cfg = com.load();
    jset(cfg, "tuples", tuples, nullptr);

    double worst0 = 0.0, worst1 = 0.0;
    for (std::size_t i = 0; i < tuples; ++i) {
        const auto u = static_cast<std::uint32_t>(i);
        const double t = 0.05 + 3.0 * uniform01(com.seed, 0, u, 0);
        const double s = t * (0.05 + 0.9 * uniform01(com.seed, 0, u, 1));
        const double x = 4.0 * (uniform01(com.seed, 0, u, 2) - 0.5);
        const double y = 4.0 * (uniform01(com.seed, 0, u, 3) - 0.5);
        const double z = 4.0 * (uniform01(com.seed, 0, u, 4) - 0.5);
        worst0 = std::max(worst0, product_identity_residual(t, s, x, y, z));
    }
    for (std::size_t i = 0; i < tuples; ++i) {
        const auto u = static_cast<std::uint32_t>(i);
        const double t = 0.2 + 2.0 * uniform01(com.seed, 1, u, 0);
        const double r = 0.5 * t * uniform01(com.seed, 1, u, 1);
        const double s = r + (t - r) * (0.1 + 0.8 * uniform01(com.seed, 1, u, 2));
        const double x = 3.0 * (uniform01(com.seed, 1, u, 3) - 0.5);
        const double z = 3.0 * (uniform01(com.seed, 1, u, 4) - 0.5);
        worst1 = std::max(worst1, squared_identity_residual(t, s, r, x, z));
    }
    const double mass_diff = std::fabs(squared_kernel_mass(1.0, 1.0) -
                                       squared_kernel_mass_quadrature(1.0, 1.0));
    const bool ok = worst0 <= 1e-12 && worst1 <= 1e-8 && mass_diff <= 1e-6;

    const Artifacts art = make_artifacts(com.out_dir, "kernel-selftest");
    art.write_csv({"pointwise_residual_max[1]", "squared_residual_max[1]",
                   "mass_closed_vs_quadrature[1]"},
                  {{worst0, worst1, mass_diff}});
    art.write_json(json{{"version", kConfigVersion},
                        {"subcommand", "kernel-selftest"},
                        {"config", {{"tuples", tuples}, {"seed", com.seed}}},
                        {"pointwise_residual_max", worst0},
                        {"squared_residual_max", worst1},
                        {"mass_diff", mass_diff},
                        {"all_ok", ok}});
    std::printf("kernel-selftest: %zu tuples, pointwise residual <= %.2e, squared "
                "residual <= %.2e, mass |closed - quadrature| = %.2e -> %s\n",
                tuples, worst0, worst1, mass_diff, ok ? "ok" : "FAIL");
    if (!ok) throw CheckFailure("kernel identities violated, see " + art.json_path());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and statistical-verification laboratory for the "
                 "semilinear stochastic heat equation driven by space-time "
                 "white noise"};
    app.require_subcommand(1);

    // simulate ------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "run the finite-difference solver");
    Common sim_com;
    sim_com.attach(sim);
    DriftOpts sim_drift;
    GridOpts sim_grid;
    std::vector<CLI::Option*> sim_dflags, sim_gflags;
    attach_drift(sim, sim_drift, sim_dflags);
    attach_grid(sim, sim_grid, sim_gflags);
    double sim_sigma = 1.0, sim_u0 = 0.0, sim_ceiling = 1e12;
    std::uint32_t sim_stream = 0;
    sim->add_option("--sigma", sim_sigma, "constant diffusion coefficient");
    sim->add_option("--u0", sim_u0, "constant initial condition");
    sim->add_option("--stream", sim_stream, "replicate stream index");
    sim->add_option("--ceiling", sim_ceiling, "numeric ceiling");

    // ladder / blowup-scan -------------------------------------------------
    auto* lad = app.add_subcommand("ladder", "truncated-drift ladder on shared noise");
    auto* scan = app.add_subcommand("blowup-scan",
                                    "escalation times vs the Osgood prediction");
    struct LadderArgs {
        Common com;
        DriftOpts drift;
        GridOpts grid;
        std::vector<CLI::Option*> dflags, gflags;
        std::vector<double> levels = {2.0, 4.0, 8.0, 16.0};
        double sigma = 1.0;
        double threshold = 0.0;  // 0 = default rule n/2
    } lad_a, scan_a;
    for (auto [cmd, a] : {std::pair{lad, &lad_a}, std::pair{scan, &scan_a}}) {
        a->com.attach(cmd);
        attach_drift(cmd, a->drift, a->dflags);
        attach_grid(cmd, a->grid, a->gflags);
        cmd->add_option("--levels", a->levels, "truncation levels (increasing)");
        cmd->add_option("--sigma", a->sigma, "constant diffusion coefficient");
        cmd->add_option("--threshold", a->threshold,
                        "fixed escalation threshold (0 = per-level n/2)");
    }

    // osgood-check ---------------------------------------------------------
    auto* osg = app.add_subcommand("osgood-check", "classify the Osgood integral");
    Common osg_com;
    osg_com.attach(osg);
    DriftOpts osg_drift;
    std::vector<CLI::Option*> osg_dflags;
    attach_drift(osg, osg_drift, osg_dflags);
    double osg_lower = 1.0, osg_tol = 1e-10;
    std::string osg_expect;
    osg->add_option("--lower", osg_lower, "lower integration limit");
    osg->add_option("--tol", osg_tol, "quadrature tolerance");
    osg->add_option("--expect", osg_expect,
                    "declared check: finite|divergent|undecided");

    // hitting-time ---------------------------------------------------------
    auto* hit = app.add_subcommand("hitting-time", "ODE hitting time int ds/B");
    Common hit_com;
    hit_com.attach(hit);
    DriftOpts hit_drift;
    std::vector<CLI::Option*> hit_dflags;
    attach_drift(hit, hit_drift, hit_dflags);
    double hit_from = 1.0, hit_tol = 1e-10;
    std::string hit_to = "10";
    hit->add_option("--from", hit_from, "start level A");
    hit->add_option("--to", hit_to, "target level N (number or 'inf')");
    hit->add_option("--tol", hit_tol, "quadrature tolerance");

    // verify-tails ---------------------------------------------------------
    auto* vt = app.add_subcommand("verify-tails", "tail probabilities vs oracle");
    Common vt_com;
    vt_com.attach(vt);
    double vt_c = 1.0, vt_t = 1.0, vt_conf = 0.99;
    std::vector<double> vt_lambdas = {0.0, 0.5, 1.0, 2.0};
    std::size_t vt_reps = 20000;
    vt->add_option("--c", vt_c, "constant integrand value");
    vt->add_option("--t", vt_t, "evaluation time");
    vt->add_option("--lambdas", vt_lambdas, "tail levels");
    vt->add_option("--reps", vt_reps, "Monte Carlo replicates");
    vt->add_option("--conf", vt_conf, "Wilson confidence level");

    // verify-moments -------------------------------------------------------
    auto* vm = app.add_subcommand("verify-moments", "increment moment bounds");
    Common vm_com;
    vm_com.attach(vm);
    std::string vm_dir = "all";
    double vm_c0 = 1.0;
    std::vector<double> vm_k = {2.0, 4.0};
    std::size_t vm_reps = 5000;
    vm->add_option("--direction", vm_dir, "spatial|temporal|combined|all");
    vm->add_option("--c0", vm_c0, "integrand bound c0");
    vm->add_option("--k", vm_k, "moment orders (>= 2)");
    vm->add_option("--reps", vm_reps, "Monte Carlo replicates");

    // verify-covariance ----------------------------------------------------
    auto* vc = app.add_subcommand("verify-covariance", "covariance decay vs oracle");
    Common vc_com;
    vc_com.attach(vc);
    double vc_c = 1.0, vc_t = 1.0;
    std::vector<double> vc_x = {0.0, 1.0, 2.0, 12.0};
    std::size_t vc_reps = 10000;
    vc->add_option("--c", vc_c, "constant integrand value");
    vc->add_option("--t", vc_t, "evaluation time");
    vc->add_option("--x", vc_x, "spatial separations");
    vc->add_option("--reps", vc_reps, "Monte Carlo replicates");

    // growth-scan ----------------------------------------------------------
    auto* gs = app.add_subcommand("growth-scan", "max-of-window-infima statistic");
    Common gs_com;
    gs_com.attach(gs);
    double gs_c = 1.0, gs_a = 1.0, gs_eps = 0.5;
    std::vector<double> gs_L = {10.0, 100.0, 1000.0};
    std::size_t gs_reps = 20;
    gs->add_option("--c", gs_c, "constant integrand value");
    gs->add_option("--a", gs_a, "window start time");
    gs->add_option("--eps", gs_eps, "window scale epsilon");
    gs->add_option("--L", gs_L, "window position ranges, lattice units");
    gs->add_option("--reps", gs_reps, "Monte Carlo replicates");

    // kernel-selftest --------------------------------------------------------
    auto* ks = app.add_subcommand("kernel-selftest", "kernel identity residuals");
    Common ks_com;
    ks_com.attach(ks);
    std::size_t ks_tuples = 1000;
    ks->add_option("--tuples", ks_tuples, "random tuples per identity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return run_simulate(sim_com, sim_drift, sim_grid, sim_sigma, sim_u0,
                                sim_stream, sim_ceiling, sim_dflags, sim_gflags);
        for (auto [cmd, a, scan_mode] : {std::tuple{lad, &lad_a, false},
                                         std::tuple{scan, &scan_a, true}})
            if (cmd->parsed())
                return run_ladder(a->com, a->drift, a->grid, a->levels, a->sigma,
                                  a->threshold, a->dflags, a->gflags, scan_mode);
        if (osg->parsed())
            return run_osgood(osg_com, osg_drift, osg_lower, osg_tol, osg_expect,
                              osg_dflags);
        if (hit->parsed())
            return run_hitting(hit_com, hit_drift, hit_from, hit_to, hit_tol,
                               hit_dflags);
        if (vt->parsed())
            return run_verify_tails(vt_com, vt_c, vt_t, vt_lambdas, vt_reps, vt_conf);
        if (vm->parsed()) return run_verify_moments(vm_com, vm_dir, vm_c0, vm_k, vm_reps);
        if (vc->parsed())
            return run_verify_covariance(vc_com, vc_c, vc_t, vc_x, vc_reps);
        if (gs->parsed())
            return run_growth_scan(gs_com, gs_c, gs_a, gs_eps, gs_L, gs_reps);
        if (ks->parsed()) return run_kernel_selftest(ks_com, ks_tuples);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
