// rg2: command-line front end for the homogeneous RG-2 / Ricci flow library.
//
// Subcommands:
//   flow        integrate one trajectory -> trajectory.csv + verdict.json
//   portrait    classify + integrate a phase-plane grid -> portrait.csv [+ .svg]
//   separatrix  construct the SL(2,R) separatrix -> separatrix.csv + .json
//   validate    run the oracle/invariant suite -> validation.json
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 integration
// failure, 4 separatrix non-convergence.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rg2/rg2.hpp"
#include "svg.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kConfigError = 2;
constexpr int kIntegrationFailure = 3;
constexpr int kSeparatrixNonConvergence = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16g", v);
    return buf;
}

enum class GeometryKind { su2, nil, sol, sl2r, r3, so3xr, h2xr, custom };

struct GeometrySpec {
    GeometryKind kind = GeometryKind::nil;
    rg2::StructureConstants sc = rg2::families::nil;
    std::string name = "nil";
};

GeometrySpec geometry_from_name(const std::string& name) {
    if (name == "su2") return {GeometryKind::su2, rg2::families::su2, name};
    if (name == "nil") return {GeometryKind::nil, rg2::families::nil, name};
    if (name == "sol") return {GeometryKind::sol, rg2::families::sol, name};
    if (name == "sl2r") return {GeometryKind::sl2r, rg2::families::sl2r, name};
    if (name == "r3") return {GeometryKind::r3, rg2::families::r3, name};
    if (name == "so3xr") return {GeometryKind::so3xr, rg2::families::r3, name};
    if (name == "h2xr") return {GeometryKind::h2xr, rg2::families::r3, name};
    throw ConfigError("unknown geometry tag: " + name);
}

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool log_spacing = false;
};

struct RunConfig {
    GeometrySpec geometry;
    std::string mode = "lrs";  // full3d | lrs | const_curv | product
    double alpha = 0.0;
    double K = 1.0;
    int n = 3;
    std::vector<double> initial;
    rg2::IntegratorConfig integrator;
    std::optional<AxisSpec> sweep_x, sweep_y;
    std::vector<std::string> outputs = {"csv", "json"};
    std::string out_dir = ".";
};

AxisSpec parse_axis(const json& j) {
    AxisSpec a;
    a.min = j.at("min").get<double>();
    a.max = j.at("max").get<double>();
    a.count = j.at("count").get<int>();
    if (j.contains("spacing")) {
        const std::string s = j.at("spacing").get<std::string>();
        if (s != "linear" && s != "log") throw ConfigError("axis spacing must be linear or log");
        a.log_spacing = s == "log";
    }
    if (a.count < 2) throw ConfigError("grid counts must be >= 2 per swept axis");
    if (!(a.min > 0.0) || !(a.max > a.min)) throw ConfigError("axis range must be 0 < min < max");
    return a;
}

void apply_config_json(RunConfig& cfg, const json& root) {
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    if (!root.contains("schema_version") || root.at("schema_version").get<int>() != 1)
        throw ConfigError("config requires schema_version = 1");
    if (root.contains("geometry")) {
        const json& g = root.at("geometry");
        if (g.is_string()) {
            cfg.geometry = geometry_from_name(g.get<std::string>());
        } else if (g.is_array() && g.size() == 3) {
            cfg.geometry.kind = GeometryKind::custom;
            cfg.geometry.sc = rg2::StructureConstants(g[0].get<double>(), g[1].get<double>(),
                                                      g[2].get<double>());
            cfg.geometry.name = "custom";
        } else {
            throw ConfigError("geometry must be a family tag or a [lambda, mu, nu] triple");
        }
    }
    if (root.contains("mode")) cfg.mode = root.at("mode").get<std::string>();
    if (root.contains("alpha")) cfg.alpha = root.at("alpha").get<double>();
    if (root.contains("K")) cfg.K = root.at("K").get<double>();
    if (root.contains("n")) cfg.n = root.at("n").get<int>();
    if (root.contains("initial")) cfg.initial = root.at("initial").get<std::vector<double>>();
    if (root.contains("integrator")) {
        const json& it = root.at("integrator");
        auto rd = [&](const char* key, double& dst) {
            if (it.contains(key)) dst = it.at(key).get<double>();
        };
        rd("rel_tol", cfg.integrator.rel_tol);
        rd("abs_tol", cfg.integrator.abs_tol);
        rd("h_init", cfg.integrator.h_init);
        rd("t_max", cfg.integrator.t_max);
        rd("extinction_floor", cfg.integrator.extinction_floor);
        rd("blowup_cap", cfg.integrator.blowup_cap);
        if (it.contains("max_steps")) cfg.integrator.max_steps = it.at("max_steps").get<long>();
    }
    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        if (sw.contains("x")) cfg.sweep_x = parse_axis(sw.at("x"));
        if (sw.contains("y")) cfg.sweep_y = parse_axis(sw.at("y"));
    }
    if (root.contains("outputs")) cfg.outputs = root.at("outputs").get<std::vector<std::string>>();
    if (root.contains("out_dir")) cfg.out_dir = root.at("out_dir").get<std::string>();
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    apply_config_json(cfg, root);
}

bool wants(const RunConfig& cfg, const std::string& what) {
    return std::find(cfg.outputs.begin(), cfg.outputs.end(), what) != cfg.outputs.end();
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir.string());
    return dir;
}

rg2::LrsFamily lrs_family_for(const GeometrySpec& g) {
    switch (g.kind) {
        case GeometryKind::su2: return rg2::LrsFamily::su2_b_eq_c;
        case GeometryKind::nil: return rg2::LrsFamily::nil_b_eq_c;
        case GeometryKind::sol: return rg2::LrsFamily::sol_a_eq_c;
        case GeometryKind::sl2r: return rg2::LrsFamily::sl2r_a_eq_b;
        default: throw ConfigError("lrs mode requires geometry su2, nil, sol, or sl2r");
    }
}

/// Project a full 3D trajectory of an LRS datum onto the reduced plane.
rg2::Trajectory project_lrs(const rg2::Trajectory& tr, rg2::LrsFamily fam) {
    std::size_t xi = 0, yi = 1;   // su2/nil/sol: (A, B)
    std::size_t twin = 2;         // index collapsing onto...
    std::size_t twin_to = 1;      // ...the y coordinate
    if (fam == rg2::LrsFamily::sol_a_eq_c) twin_to = 0;
    if (fam == rg2::LrsFamily::sl2r_a_eq_b) {
        xi = 2;
        yi = 0;
        twin = 1;
        twin_to = 1;
    }
    rg2::Trajectory out;
    out.times = tr.times;
    out.states.reserve(tr.states.size());
    for (const auto& st : tr.states) out.states.push_back({st[xi], st[yi]});
    out.termination = tr.termination;
    out.t_end = tr.t_end;
    std::vector<std::size_t> comps;
    for (std::size_t c : tr.termination.components) {
        std::size_t m = c == xi ? 0 : (c == yi ? 1 : (c == twin ? twin_to : 0));
        if (std::find(comps.begin(), comps.end(), m) == comps.end()) comps.push_back(m);
    }
    out.termination.components = std::move(comps);
    return out;
}

json termination_json(const rg2::TerminationReason& term) {
    json t;
    t["tag"] = rg2::termination_name(term.kind);
    t["components"] = term.components;
    return t;
}

void write_trajectory_csv(const std::filesystem::path& path, const std::string& header,
                          const rg2::Trajectory& tr) {
    std::ofstream out(path);
    out << header << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out << fmt(tr.times[i]);
        for (double v : tr.states[i]) out << "," << fmt(v);
        out << "\n";
    }
}

struct FlowResult {
    rg2::Trajectory traj;
    std::optional<rg2::Regime> predicted;
    rg2::Observation observed;
    std::string csv_header;
};

FlowResult run_flow(const RunConfig& cfg) {
    FlowResult res;
    const double alpha = cfg.alpha;
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");

    if (cfg.mode == "lrs") {
        if (cfg.initial.size() != 2) throw ConfigError("lrs mode requires initial = [x0, y0]");
        const rg2::LrsFamily fam = lrs_family_for(cfg.geometry);
        const rg2::ReducedState s0(cfg.initial[0], cfg.initial[1]);
        std::optional<rg2::SeparatrixCurve> sep;
        if (fam == rg2::LrsFamily::sl2r_a_eq_b && alpha > 0.0) {
            sep = rg2::build_sl2r_separatrix(alpha, std::max(1.0, 2.0 * s0.x), 1e-6);
            res.predicted = rg2::classify_sl2r(s0.x, s0.y, alpha, &*sep);
        } else {
            switch (fam) {
                case rg2::LrsFamily::su2_b_eq_c:
                    res.predicted = rg2::classify_su2(s0.x, s0.y, alpha);
                    break;
                case rg2::LrsFamily::nil_b_eq_c:
                    res.predicted = rg2::classify_nil(s0.x, s0.y, s0.y, alpha);
                    break;
                case rg2::LrsFamily::sol_a_eq_c:
                    res.predicted = rg2::classify_sol(s0.x, s0.y, alpha);
                    break;
                case rg2::LrsFamily::sl2r_a_eq_b:
                    res.predicted = rg2::classify_sl2r(s0.x, s0.y, alpha, nullptr);
                    break;
            }
        }
        auto rhs = [fam, alpha](double, std::span<const double> y, std::span<double> dy) {
            const rg2::ReducedVelocity v =
                rg2::reduced_rhs(fam, rg2::ReducedState(y[0], y[1]), alpha);
            dy[0] = v.dx;
            dy[1] = v.dy;
        };
        res.traj = rg2::integrate(rhs, std::span<const double>(cfg.initial), cfg.integrator);
        res.observed = rg2::observe_lrs(fam, res.traj, alpha);
        res.csv_header = "t,x,y";
        return res;
    }

    if (cfg.mode == "full3d") {
        if (cfg.initial.size() != 3) throw ConfigError("full3d mode requires initial = [A0, B0, C0]");
        const rg2::DiagonalMetric g0(cfg.initial[0], cfg.initial[1], cfg.initial[2]);
        const rg2::StructureConstants sc = cfg.geometry.sc;
        auto rhs = [sc, alpha](double, std::span<const double> y, std::span<double> dy) {
            const rg2::MetricVelocity v =
                rg2::rg2_rhs(sc, rg2::DiagonalMetric(y[0], y[1], y[2]), rg2::CouplingParam(alpha));
            dy[0] = v.dA;
            dy[1] = v.dB;
            dy[2] = v.dC;
        };
        res.traj = rg2::integrate(rhs, std::span<const double>(cfg.initial), cfg.integrator);
        res.csv_header = "t,A,B,C";

        auto lrs_match = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
        };
        switch (cfg.geometry.kind) {
            case GeometryKind::r3: {
                res.predicted = rg2::Regime::fixed_point;
                const auto& yf = res.traj.final_state();
                const rg2::MetricVelocity vf = rg2::rg2_rhs(
                    sc, rg2::DiagonalMetric(yf[0], yf[1], yf[2]), rg2::CouplingParam(alpha));
                const bool still = std::abs(vf.dA) + std::abs(vf.dB) + std::abs(vf.dC) <= 1e-10;
                res.observed = {still ? std::optional(rg2::Regime::fixed_point) : std::nullopt,
                                still, still ? "" : "unexpected drift for flat geometry"};
                break;
            }
            case GeometryKind::nil:
                res.predicted = rg2::classify_nil(g0.A, g0.B, g0.C, alpha);
                res.observed = rg2::observe_nil_full3d(res.traj, alpha);
                break;
            case GeometryKind::su2:
                if (lrs_match(g0.B, g0.C)) {
                    res.predicted = rg2::classify_su2(g0.A, g0.B, alpha);
                    res.observed = rg2::observe_lrs(
                        rg2::LrsFamily::su2_b_eq_c,
                        project_lrs(res.traj, rg2::LrsFamily::su2_b_eq_c), alpha);
                } else {
                    res.observed = {std::nullopt, false, "no classification for non-LRS su2 data"};
                }
                break;
            case GeometryKind::sol:
                if (lrs_match(g0.A, g0.C)) {
                    res.predicted = rg2::classify_sol(g0.A, g0.B, alpha);
                    res.observed = rg2::observe_lrs(
                        rg2::LrsFamily::sol_a_eq_c,
                        project_lrs(res.traj, rg2::LrsFamily::sol_a_eq_c), alpha);
                } else {
                    res.observed = {std::nullopt, false, "no classification for non-LRS sol data"};
                }
                break;
            case GeometryKind::sl2r:
                if (lrs_match(g0.A, g0.B)) {
                    std::optional<rg2::SeparatrixCurve> sep;
                    if (alpha > 0.0)
                        sep = rg2::build_sl2r_separatrix(alpha, std::max(1.0, 2.0 * g0.C), 1e-6);
                    res.predicted =
                        rg2::classify_sl2r(g0.C, g0.A, alpha, sep ? &*sep : nullptr);
                    res.observed = rg2::observe_lrs(
                        rg2::LrsFamily::sl2r_a_eq_b,
                        project_lrs(res.traj, rg2::LrsFamily::sl2r_a_eq_b), alpha);
                } else {
                    res.observed = {std::nullopt, false, "no classification for non-LRS sl2r data"};
                }
                break;
            default:
                res.observed = {std::nullopt, false, "no classification for custom structure constants"};
                break;
        }
        return res;
    }

    if (cfg.mode == "const_curv") {
        std::vector<double> y0 = cfg.initial.empty() ? std::vector<double>{1.0} : cfg.initial;
        if (y0.size() != 1) throw ConfigError("const_curv mode requires initial = [phi0]");
        const rg2::ConstCurvatureParams p(cfg.K, cfg.n, alpha);
        res.predicted = rg2::classify_constant_curvature(cfg.K, alpha, cfg.n);
        auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = rg2::const_curvature_rhs(p, y[0]);
        };
        res.traj = rg2::integrate(rhs, std::span<const double>(y0), cfg.integrator);
        res.observed = rg2::observe_constant_curvature(res.traj, p);
        res.csv_header = "t,phi";
        return res;
    }

    if (cfg.mode == "product") {
        if (cfg.geometry.kind != GeometryKind::so3xr && cfg.geometry.kind != GeometryKind::h2xr)
            throw ConfigError("product mode requires geometry so3xr or h2xr");
        std::vector<double> y0 = cfg.initial.empty() ? std::vector<double>{1.0, 1.0} : cfg.initial;
        if (y0.size() != 2) throw ConfigError("product mode requires initial = [D0, E0]");
        const double kappa0 = cfg.geometry.kind == GeometryKind::so3xr ? 1.0 : -1.0;
        const rg2::ConstCurvatureParams p(kappa0, 2, alpha);
        res.predicted = rg2::classify_constant_curvature(kappa0, alpha, 2);
        auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = 0.0;  // flat factor
            dy[1] = rg2::const_curvature_rhs(p, y[1]);
        };
        res.traj = rg2::integrate(rhs, std::span<const double>(y0), cfg.integrator);
        // observe on the evolving factor only
        rg2::Trajectory factor;
        factor.times = res.traj.times;
        for (const auto& st : res.traj.states) factor.states.push_back({st[1]});
        factor.termination = res.traj.termination;
        factor.termination.components.assign(res.traj.termination.components.size(), 0);
        factor.t_end = res.traj.t_end;
        res.observed = rg2::observe_constant_curvature(factor, p);
        res.csv_header = "t,D,E";
        return res;
    }

    throw ConfigError("unknown mode: " + cfg.mode + " (expected full3d, lrs, const_curv, product)");
}

int cmd_flow(const RunConfig& cfg) {
    const FlowResult res = run_flow(cfg);
    const auto dir = prepare_out_dir(cfg);

    if (wants(cfg, "csv")) write_trajectory_csv(dir / "trajectory.csv", res.csv_header, res.traj);
    if (wants(cfg, "json")) {
        json v;
        v["termination"] = termination_json(res.traj.termination);
        v["t_end"] = res.traj.t_end;
        v["singular_time_estimate"] = res.traj.termination.singular_time
                                          ? json(*res.traj.termination.singular_time)
                                          : json(nullptr);
        v["terminal_state"] = res.traj.final_state();
        v["predicted_regime"] =
            res.predicted ? json(rg2::regime_name(*res.predicted)) : json(nullptr);
        v["observed_regime"] =
            res.observed.regime ? json(rg2::regime_name(*res.observed.regime)) : json(nullptr);
        v["agree"] = (res.predicted && res.observed.regime)
                         ? json(rg2::regimes_agree(*res.predicted, *res.observed.regime))
                         : json(nullptr);
        std::ofstream out(dir / "verdict.json");
        out << v.dump(2) << "\n";
    }
    if (!res.observed.note.empty()) std::cerr << "note: " << res.observed.note << "\n";
    if (res.traj.termination.kind == rg2::TerminationKind::step_failure) {
        std::cerr << "integration failure: " << res.traj.termination.note << "\n";
        return kIntegrationFailure;
    }
    return kOk;
}

// ---- portrait ----

std::vector<double> axis_values(const AxisSpec& a) {
    std::vector<double> v(static_cast<std::size_t>(a.count));
    for (int i = 0; i < a.count; ++i) {
        const double u = a.count == 1 ? 0.0 : static_cast<double>(i) / (a.count - 1);
        v[static_cast<std::size_t>(i)] =
            a.log_spacing ? a.min * std::pow(a.max / a.min, u) : a.min + u * (a.max - a.min);
    }
    return v;
}

struct PortraitRow {
    double x0 = 0.0, y0 = 0.0;
    std::optional<rg2::Regime> predicted, observed;
    std::optional<bool> agree;
    double t_end = 0.0;
    std::optional<double> singular_time;
    std::vector<double> traj_x, traj_y;  // for the SVG overlay
};

const char* regime_color(rg2::Regime r) {
    switch (r) {
        case rg2::Regime::shrinker_finite_time: return "#1f77b4";
        case rg2::Regime::shrinker_exponential: return "#17becf";
        case rg2::Regime::pancake_immortal: return "#ff7f0e";
        case rg2::Regime::cigar_immortal: return "#2ca02c";
        case rg2::Regime::sol_boundary: return "#9467bd";
        case rg2::Regime::sl2r_boundary_or_shrinker: return "#8c564b";
        case rg2::Regime::fixed_point: return "#7f7f7f";
        case rg2::Regime::expand_immortal: return "#bcbd22";
        case rg2::Regime::contract_finite_time: return "#e377c2";
    }
    return "#000000";
}

int cmd_portrait(const RunConfig& cfg, int threads, std::optional<unsigned> seed) {
    if (cfg.mode != "lrs")
        throw ConfigError("portrait requires mode = lrs (a two-dimensional phase plane)");
    if (!cfg.sweep_x || !cfg.sweep_y) throw ConfigError("portrait requires sweep.x and sweep.y");
    const rg2::LrsFamily fam = lrs_family_for(cfg.geometry);
    const double alpha = cfg.alpha;

    std::optional<rg2::SeparatrixCurve> sep;
    if (fam == rg2::LrsFamily::sl2r_a_eq_b && alpha > 0.0)
        sep = rg2::build_sl2r_separatrix(alpha, cfg.sweep_x->max * 1.5, 1e-6);

    const std::vector<double> xs = axis_values(*cfg.sweep_x);
    const std::vector<double> ys = axis_values(*cfg.sweep_y);
    const std::size_t total = xs.size() * ys.size();
    std::vector<PortraitRow> rows(total);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nworkers = std::min<std::size_t>(
        total, threads > 0 ? static_cast<std::size_t>(threads) : hw);
    std::atomic<std::size_t> next{0};
    std::atomic<long> failures{0};

    auto worker = [&]() {
        for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            const std::size_t ix = idx % xs.size();
            const std::size_t iy = idx / xs.size();
            double x0 = xs[ix], y0 = ys[iy];
            if (seed) {
                std::mt19937_64 rng(0x9E3779B97F4A7C15ULL * (idx + 1) ^ *seed);
                std::uniform_real_distribution<double> u(-0.4, 0.4);
                auto jitter = [&](double v, const AxisSpec& a, std::size_t i,
                                  const std::vector<double>& grid) {
                    if (grid.size() < 2) return v;
                    const double step = a.log_spacing
                                            ? std::log(grid[1] / grid[0])
                                            : grid[1] - grid[0];
                    (void)i;
                    return a.log_spacing ? v * std::exp(u(rng) * step) : v + u(rng) * step;
                };
                x0 = jitter(x0, *cfg.sweep_x, ix, xs);
                y0 = jitter(y0, *cfg.sweep_y, iy, ys);
            }
            PortraitRow& row = rows[idx];
            row.x0 = x0;
            row.y0 = y0;
            try {
                switch (fam) {
                    case rg2::LrsFamily::su2_b_eq_c:
                        row.predicted = rg2::classify_su2(x0, y0, alpha);
                        break;
                    case rg2::LrsFamily::nil_b_eq_c:
                        row.predicted = rg2::classify_nil(x0, y0, y0, alpha);
                        break;
                    case rg2::LrsFamily::sol_a_eq_c:
                        row.predicted = rg2::classify_sol(x0, y0, alpha);
                        break;
                    case rg2::LrsFamily::sl2r_a_eq_b:
                        row.predicted = rg2::classify_sl2r(x0, y0, alpha, sep ? &*sep : nullptr);
                        break;
                }
                auto rhs = [fam, alpha](double, std::span<const double> y, std::span<double> dy) {
                    const rg2::ReducedVelocity v =
                        rg2::reduced_rhs(fam, rg2::ReducedState(y[0], y[1]), alpha);
                    dy[0] = v.dx;
                    dy[1] = v.dy;
                };
                const double s0[2] = {x0, y0};
                const rg2::Trajectory tr =
                    rg2::integrate(rhs, std::span<const double>(s0, 2), cfg.integrator);
                const rg2::Observation obs = rg2::observe_lrs(fam, tr, alpha);
                row.observed = obs.regime;
                row.t_end = tr.t_end;
                row.singular_time = rg2::estimate_singular_time(tr);
                if (row.predicted && row.observed)
                    row.agree = rg2::regimes_agree(*row.predicted, *row.observed);
                const std::size_t stride = std::max<std::size_t>(1, tr.times.size() / 200);
                for (std::size_t i = 0; i < tr.times.size(); i += stride) {
                    row.traj_x.push_back(tr.states[i][0]);
                    row.traj_y.push_back(tr.states[i][1]);
                }
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                row.agree = std::nullopt;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const auto dir = prepare_out_dir(cfg);
    if (wants(cfg, "csv")) {
        std::ofstream out(dir / "portrait.csv");
        out << "x0,y0,predicted,observed,agree,t_end,singular_time\n";
        for (const auto& row : rows) {
            out << fmt(row.x0) << "," << fmt(row.y0) << ","
                << (row.predicted ? rg2::regime_name(*row.predicted) : "") << ","
                << (row.observed ? rg2::regime_name(*row.observed) : "") << ","
                << (row.agree ? (*row.agree ? "1" : "0") : "") << "," << fmt(row.t_end) << ","
                << (row.singular_time ? fmt(*row.singular_time) : "") << "\n";
        }
    }

    if (wants(cfg, "svg")) {
        rg2cli::SvgAxis ax{cfg.sweep_x->min, cfg.sweep_x->max, cfg.sweep_x->log_spacing,
                           fam == rg2::LrsFamily::sl2r_a_eq_b ? "C" : "A"};
        rg2cli::SvgAxis ay{cfg.sweep_y->min, cfg.sweep_y->max, cfg.sweep_y->log_spacing,
                           fam == rg2::LrsFamily::sl2r_a_eq_b ? "A" : "B"};
        rg2cli::PortraitSvg svg(ax, ay);
        auto edges = [](const std::vector<double>& v, bool logsp) {
            std::vector<double> e(v.size() + 1);
            for (std::size_t i = 1; i < v.size(); ++i)
                e[i] = logsp ? std::sqrt(v[i - 1] * v[i]) : 0.5 * (v[i - 1] + v[i]);
            e[0] = logsp ? v[0] * v[0] / e[1] : 2 * v[0] - e[1];
            e[v.size()] = logsp ? v.back() * v.back() / e[v.size() - 1]
                                : 2 * v.back() - e[v.size() - 1];
            return e;
        };
        const auto ex = edges(xs, cfg.sweep_x->log_spacing);
        const auto ey = edges(ys, cfg.sweep_y->log_spacing);
        std::vector<rg2::Regime> seen;
        for (std::size_t idx = 0; idx < total; ++idx) {
            const auto& row = rows[idx];
            if (!row.predicted) continue;
            const std::size_t ix = idx % xs.size(), iy = idx / xs.size();
            svg.add_cell(ex[ix], ex[ix + 1], ey[iy], ey[iy + 1], regime_color(*row.predicted),
                         row.agree && !*row.agree);
            if (std::find(seen.begin(), seen.end(), *row.predicted) == seen.end())
                seen.push_back(*row.predicted);
        }
        for (rg2::Regime r : seen) svg.add_legend_entry(regime_color(r), rg2::regime_name(r));
        const std::size_t tstride = std::max<std::size_t>(1, total / 24);
        for (std::size_t idx = 0; idx < total; idx += tstride)
            svg.add_polyline(rows[idx].traj_x, rows[idx].traj_y, "#444444", 1.0, 0.6);
        // separatrix overlay
        std::vector<double> sx, sy;
        const int ns = 300;
        for (int i = 0; i <= ns; ++i) {
            const double u = static_cast<double>(i) / ns;
            const double x = cfg.sweep_x->log_spacing
                                 ? cfg.sweep_x->min * std::pow(cfg.sweep_x->max / cfg.sweep_x->min, u)
                                 : cfg.sweep_x->min + u * (cfg.sweep_x->max - cfg.sweep_x->min);
            double y = -1.0;
            switch (fam) {
                case rg2::LrsFamily::su2_b_eq_c: y = x; break;  // isotropy line A = B
                case rg2::LrsFamily::nil_b_eq_c:
                    if (alpha > 0.0) y = std::sqrt(1.5 * alpha * x);  // B = sqrt(3a/2 A)
                    break;
                case rg2::LrsFamily::sol_a_eq_c:
                    if (alpha > 0.0) y = 2.0 * alpha;  // line B = 2a
                    break;
                case rg2::LrsFamily::sl2r_a_eq_b:
                    if (sep && x <= sep->max_c()) y = sep->value_at(x);
                    break;
            }
            if (y > 0.0) {
                sx.push_back(x);
                sy.push_back(y);
            }
        }
        svg.add_polyline(sx, sy, "#000000", 2.2);
        svg.write((dir / "portrait.svg").string());
    }

    if (failures.load() > 0) {
        std::cerr << failures.load() << " grid points failed\n";
    }
    return kOk;
}

int cmd_separatrix(double alpha, double c_max, double tol, const std::string& out_dir) {
    RunConfig cfg;
    cfg.out_dir = out_dir;
    const auto dir = prepare_out_dir(cfg);
    try {
        const rg2::SeparatrixCurve sep = rg2::build_sl2r_separatrix(alpha, c_max, tol);
        {
            std::ofstream out(dir / "separatrix.csv");
            out << "C,A\n";
            for (std::size_t i = 0; i < sep.c.size(); ++i)
                out << fmt(sep.c[i]) << "," << fmt(sep.a[i]) << "\n";
        }
        {
            json meta;
            meta["alpha"] = sep.alpha;
            meta["n_reached"] = sep.n_reached;
            meta["achieved_gap"] = sep.achieved_gap;
            meta["lower_limit"] = sep.lower_limit;
            std::ofstream out(dir / "separatrix.json");
            out << meta.dump(2) << "\n";
        }
        std::cout << "separatrix: " << sep.c.size() << " samples, n = " << sep.n_reached
                  << ", gap = " << sep.achieved_gap << ", lower limit = " << sep.lower_limit
                  << "\n";
        return kOk;
    } catch (const rg2::SeparatrixNonConvergence& e) {
        std::cerr << "separatrix did not converge: achieved gap " << e.achieved_gap << " at n = "
                  << e.n_last << "\n";
        return kSeparatrixNonConvergence;
    }
}

int cmd_validate(const std::string& out_dir, bool flip_sign, bool quick) {
    rg2::ValidationOptions opt;
    opt.flip_rm2_sign = flip_sign;
    opt.quick = quick;
    const std::vector<rg2::ValidationCheck> checks = rg2::run_validation(opt);

    RunConfig cfg;
    cfg.out_dir = out_dir;
    const auto dir = prepare_out_dir(cfg);
    json report = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["measured"] = c.measured;
        e["threshold"] = c.threshold;
        e["detail"] = c.detail;
        report.push_back(e);
        std::printf("%-42s %s  (measured %.3g, threshold %.3g)\n", c.name.c_str(),
                    c.passed ? "PASS" : "FAIL", c.measured, c.threshold);
    }
    std::ofstream out(dir / "validation.json");
    out << report.dump(2) << "\n";
    return rg2::all_passed(checks) ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogeneous RG-2 / Ricci flow laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::optional<unsigned> seed;
    unsigned seed_value = 0;
    app.add_option("--config", config_path, "JSON run configuration (schema_version 1)");
    app.add_option("--out", out_dir, "output directory (overrides config out_dir)");
    app.add_option("--threads", threads, "worker threads for sweeps (default: hardware)");
    auto* seed_opt = app.add_option("--seed", seed_value, "seed for grid jitter (default: none)");

    auto* flow = app.add_subcommand("flow", "integrate a single trajectory");
    std::string geometry_flag, mode_flag, initial_flag;
    double alpha_flag = std::nan("");
    double tmax_flag = std::nan("");
    double K_flag = std::nan("");
    int n_flag = 0;
    flow->add_option("--geometry", geometry_flag, "su2|nil|sol|sl2r|r3|so3xr|h2xr");
    flow->add_option("--mode", mode_flag, "full3d|lrs|const_curv|product");
    flow->add_option("--alpha", alpha_flag, "RG coupling constant (0 = Ricci flow)");
    flow->add_option("--initial", initial_flag, "comma-separated initial state");
    flow->add_option("--t-max", tmax_flag, "integration horizon");
    flow->add_option("--K", K_flag, "curvature constant (const_curv mode)");
    flow->add_option("--n", n_flag, "dimension (const_curv mode, 2 or 3)");

    auto* portrait = app.add_subcommand("portrait", "classify + integrate a phase-plane grid");
    bool svg_flag = false;
    portrait->add_flag("--svg", svg_flag, "also emit portrait.svg");

    auto* separatrix = app.add_subcommand("separatrix", "construct the SL(2,R) separatrix");
    double sep_alpha = 1.0, sep_cmax = 10.0, sep_tol = 1e-6;
    separatrix->add_option("--alpha", sep_alpha, "coupling constant (> 0)")->required();
    separatrix->add_option("--c-max", sep_cmax, "upper end of the sampled C range");
    separatrix->add_option("--tol", sep_tol, "sup-norm stopping tolerance");

    auto* validate = app.add_subcommand("validate", "run the oracle and invariant suite");
    bool flip_sign = false, quick = false;
    validate->add_flag("--debug-flip-rm2-sign", flip_sign,
                       "mutation sanity: negate the quadratic term in the cross-check");
    validate->add_flag("--quick", quick, "reduced sample counts");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) seed = seed_value;

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (!geometry_flag.empty()) cfg.geometry = geometry_from_name(geometry_flag);
        if (!mode_flag.empty()) cfg.mode = mode_flag;
        if (!std::isnan(alpha_flag)) cfg.alpha = alpha_flag;
        if (!std::isnan(K_flag)) cfg.K = K_flag;
        if (n_flag != 0) cfg.n = n_flag;
        if (!std::isnan(tmax_flag)) cfg.integrator.t_max = tmax_flag;
        if (!initial_flag.empty()) {
            cfg.initial.clear();
            std::stringstream ss(initial_flag);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.initial.push_back(std::stod(tok));
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (svg_flag && !wants(cfg, "svg")) cfg.outputs.push_back("svg");

        if (*flow) return cmd_flow(cfg);
        if (*portrait) return cmd_portrait(cfg, threads, seed);
        if (*separatrix) return cmd_separatrix(sep_alpha, sep_cmax, sep_tol, cfg.out_dir);
        if (*validate) return cmd_validate(cfg.out_dir, flip_sign, quick);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const rg2::SeparatrixNonConvergence& e) {
        std::cerr << "separatrix did not converge: achieved gap " << e.achieved_gap << "\n";
        return kSeparatrixNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIntegrationFailure;
    }
    return kOk;
}
