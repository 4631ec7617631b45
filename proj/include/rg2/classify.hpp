#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rg2/flows.hpp"
#include "rg2/geometry.hpp"
#include "rg2/integrate.hpp"
#include "rg2/roots.hpp"

namespace rg2 {

/// Asymptotic regimes of the flows, following the paper's case splits.
enum class Regime {
    fixed_point,
    shrinker_finite_time,
    shrinker_exponential,
    pancake_immortal,
    cigar_immortal,
    sol_boundary,
    sl2r_boundary_or_shrinker,
    expand_immortal,
    contract_finite_time,
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::fixed_point: return "fixed_point";
        case Regime::shrinker_finite_time: return "shrinker_finite_time";
        case Regime::shrinker_exponential: return "shrinker_exponential";
        case Regime::pancake_immortal: return "pancake_immortal";
        case Regime::cigar_immortal: return "cigar_immortal";
        case Regime::sol_boundary: return "sol_boundary";
        case Regime::sl2r_boundary_or_shrinker: return "sl2r_boundary_or_shrinker";
        case Regime::expand_immortal: return "expand_immortal";
        case Regime::contract_finite_time: return "contract_finite_time";
    }
    return "?";
}

namespace detail {
inline bool nearly_equal(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace detail

/// Constant-curvature classification. For K < 0 the threshold is
/// |K| = 2/alpha: smaller curvature expands forever, larger contracts to a
/// finite-time singularity. The exact boundary is a stationary solution
/// (phi identically 1), reported as a fixed point.
inline Regime classify_constant_curvature(double K, double alpha, int n) {
    if (n != 2 && n != 3) throw std::invalid_argument("classify_constant_curvature: n must be 2 or 3");
    if (!(alpha >= 0.0)) throw std::invalid_argument("classify_constant_curvature: alpha must be >= 0");
    if (K == 0.0) return Regime::fixed_point;
    if (K > 0.0) return Regime::contract_finite_time;
    const double prod = alpha * std::abs(K);
    if (prod == 2.0) return Regime::fixed_point;  // boundary: neither expands nor contracts
    return prod < 2.0 ? Regime::expand_immortal : Regime::contract_finite_time;
}

/// Full 3D Nil classification (paper's corollary): shrinker iff
/// alpha >= 2 B0 C0 / (3 A0); exact equality is the separatrix, on which
/// the solution decays exponentially to the origin.
inline Regime classify_nil(double A0, double B0, double C0, double alpha) {
    if (!(A0 > 0.0) || !(B0 > 0.0) || !(C0 > 0.0) || !(alpha >= 0.0))
        throw std::invalid_argument("classify_nil: bad arguments");
    if (alpha == 0.0) return Regime::pancake_immortal;
    const double threshold = 2.0 * B0 * C0 / (3.0 * A0);
    if (detail::nearly_equal(alpha, threshold)) return Regime::shrinker_exponential;
    return alpha > threshold ? Regime::shrinker_finite_time : Regime::pancake_immortal;
}

inline Regime classify_sol(double A0, double B0, double alpha) {
    if (!(A0 > 0.0) || !(B0 > 0.0) || !(alpha >= 0.0))
        throw std::invalid_argument("classify_sol: bad arguments");
    if (B0 > 2.0 * alpha) return Regime::cigar_immortal;
    if (B0 == 2.0 * alpha) return Regime::sol_boundary;
    return Regime::shrinker_finite_time;
}

inline Regime classify_su2(double A0, double B0, double alpha) {
    if (!(A0 > 0.0) || !(B0 > 0.0) || !(alpha >= 0.0))
        throw std::invalid_argument("classify_su2: bad arguments");
    return Regime::shrinker_finite_time;
}

/// Zero level set of the SL(2,R) trajectory derivative, C = h(A):
///   h(A) = (A/5a)(A - 6a + sqrt((A - 6a)^2 + 20a(A - 2a))),  A >= 2a.
inline double sl2r_h(double A, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sl2r_h: alpha must be positive");
    if (!(A >= 2.0 * alpha)) throw std::invalid_argument("sl2r_h: requires A >= 2*alpha");
    const double d = A - 6.0 * alpha;
    return A / (5.0 * alpha) * (d + std::sqrt(d * d + 20.0 * alpha * (A - 2.0 * alpha)));
}

/// Inverse of h: the strictly increasing function A = g(C) whose graph is
/// the zero level set, with g(C) -> 2*alpha as C -> 0. Solved by bracketed
/// bisection; the residual |h(g(C)) - C| is at interval-collapse precision.
inline double sl2r_g(double C, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sl2r_g: alpha must be positive");
    if (!(C > 0.0)) throw std::invalid_argument("sl2r_g: C must be positive");
    double hi = 2.0 * alpha;
    for (int i = 0; i < 2000 && !(sl2r_h(hi, alpha) > C); ++i) hi *= 2.0;
    if (!(sl2r_h(hi, alpha) > C)) throw std::runtime_error("sl2r_g: failed to bracket");
    return find_root_bisect([&](double a) { return sl2r_h(a, alpha) - C; }, 2.0 * alpha, hi);
}

/// Sampled regime-separating curve of the LRS SL(2,R) phase plane (x = C,
/// y = A), strictly increasing away from C = 0 and approaching 2*alpha as
/// C -> 0.
struct SeparatrixCurve {
    double alpha = 0.0;
    std::vector<double> c;  // strictly increasing
    std::vector<double> a;
    double lower_limit = 0.0;
    int n_reached = 0;
    double achieved_gap = 0.0;

    double min_c() const { return c.front(); }
    double max_c() const { return c.back(); }

    /// Interpolated curve value. Below the sampled range the curve is
    /// anchored at its C -> 0 limit (0, 2*alpha); above it, the caller must
    /// extend the curve first.
    double value_at(double C) const {
        if (!(C > 0.0)) throw std::invalid_argument("SeparatrixCurve: C must be positive");
        if (C < c.front()) {
            const double t = C / c.front();
            return 2.0 * alpha + t * (a.front() - 2.0 * alpha);
        }
        if (C > c.back())
            throw std::out_of_range("SeparatrixCurve: C beyond sampled range; use extend_separatrix");
        const auto it = std::lower_bound(c.begin(), c.end(), C);
        const std::size_t j = static_cast<std::size_t>(it - c.begin());
        if (j == 0 || c[j] == C) return a[j];
        const double u = (std::log(C) - std::log(c[j - 1])) / (std::log(c[j]) - std::log(c[j - 1]));
        return a[j - 1] + u * (a[j] - a[j - 1]);
    }

    /// Signed side of a phase-plane point: positive above the curve.
    double side(double C, double A) const { return A - value_at(C); }
};

struct SeparatrixNonConvergence : std::runtime_error {
    double achieved_gap;
    int n_last;
    SeparatrixNonConvergence(double gap, int n)
        : std::runtime_error("separatrix construction did not converge; achieved gap " +
                             std::to_string(gap)),
          achieved_gap(gap),
          n_last(n) {}
};

namespace detail {

inline IntegratorConfig separatrix_integrator_config(double alpha, const IntegratorConfig* user) {
    IntegratorConfig cfg = user ? *user : IntegratorConfig{};
    if (!user) {
        cfg.rel_tol = 1e-10;
        cfg.abs_tol = 1e-13;
    }
    cfg.extinction_floor = std::min(1e-9 * alpha, 1e-9);
    cfg.h_init = 1e-3;
    return cfg;
}

/// Sample the solution phi_n of the trajectory ODE through (1/n, g(1/n))
/// at the given strictly increasing C-grid. Integration runs in s = ln C
/// both upward and downward from the initial point; nodes the solution
/// never reaches (it blows up in A on the way down) are NaN.
inline std::vector<double> sample_sl2r_phi_n(double alpha, double n,
                                             std::span<const double> c_grid,
                                             const IntegratorConfig* user_cfg = nullptr) {
    const double c0 = 1.0 / n;
    const double a0 = sl2r_g(c0, alpha);
    const double s0 = std::log(c0);
    std::vector<double> out(c_grid.size(), std::numeric_limits<double>::quiet_NaN());
    IntegratorConfig cfg = separatrix_integrator_config(alpha, user_cfg);

    auto slope = [alpha](double A, double C) {
        return trajectory_rhs(LrsFamily::sl2r_a_eq_b, ReducedState(C, A), alpha);
    };

    // upward branch: C = exp(s0 + tau)
    {
        std::vector<double> taus;
        for (double cg : c_grid)
            if (cg >= c0) taus.push_back(std::log(cg) - s0);
        if (!taus.empty() && taus.back() > 0.0) {
            cfg.t_max = taus.back();
            auto rhs = [&](double tau, std::span<const double> y, std::span<double> dy) {
                const double C = std::exp(s0 + tau);
                dy[0] = slope(y[0], C) * C;
            };
            const double y0[1] = {a0};
            Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg,
                                      std::span<const double>(taus));
            std::size_t ti = 0;
            for (std::size_t i = 0; i < c_grid.size(); ++i) {
                if (!(c_grid[i] >= c0)) continue;
                const double want = std::log(c_grid[i]) - s0;
                while (ti < tr.times.size() && tr.times[ti] < want) ++ti;
                if (ti < tr.times.size() && tr.times[ti] == want) out[i] = tr.states[ti][0];
            }
        } else if (!taus.empty()) {
            // only the initial node requested
            for (std::size_t i = 0; i < c_grid.size(); ++i)
                if (c_grid[i] == c0) out[i] = a0;
        }
    }

    // downward branch: C = exp(s0 - tau); A grows toward the blowup cap
    {
        std::vector<double> taus;
        for (std::size_t i = c_grid.size(); i-- > 0;)
            if (c_grid[i] < c0) taus.push_back(s0 - std::log(c_grid[i]));
        if (!taus.empty()) {
            cfg.t_max = taus.back();
            auto rhs = [&](double tau, std::span<const double> y, std::span<double> dy) {
                const double C = std::exp(s0 - tau);
                dy[0] = -slope(y[0], C) * C;
            };
            const double y0[1] = {a0};
            Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg,
                                      std::span<const double>(taus));
            std::size_t ti = 0;
            for (std::size_t i = c_grid.size(); i-- > 0;) {
                if (!(c_grid[i] < c0)) continue;
                const double want = s0 - std::log(c_grid[i]);
                while (ti < tr.times.size() && tr.times[ti] < want) ++ti;
                if (ti < tr.times.size() && tr.times[ti] == want) out[i] = tr.states[ti][0];
            }
        }
    }
    return out;
}

}  // namespace detail

/// Construct the SL(2,R) separatrix for a given coupling by integrating the
/// trajectory ODE from (1/n, g(1/n)) for n = 2^4, 2^5, ..., stopping when
/// two successive curves differ by less than tol in sup-norm over the full
/// sampling grid. The curves decrease monotonically toward the limit; the
/// ordering is asserted during construction.
inline SeparatrixCurve build_sl2r_separatrix(double alpha, double c_max, double tol,
                                             const IntegratorConfig* icfg = nullptr) {
    if (!(alpha > 0.0) || !(c_max > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("build_sl2r_separatrix: alpha, c_max, tol must be positive");
    const double c_min = 1e-4 * alpha;
    if (!(c_max > 10.0 * c_min))
        throw std::invalid_argument("build_sl2r_separatrix: c_max too small for the grid");

    const double decades = std::log10(c_max / c_min);
    const std::size_t count = std::min<std::size_t>(
        4000, std::max<std::size_t>(128, static_cast<std::size_t>(64.0 * decades) + 1));
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(count - 1);
        grid[i] = c_min * std::pow(c_max / c_min, u);
    }
    grid.back() = c_max;

    auto covered = [&](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };

    std::vector<double> prev;
    bool prev_covered = false;
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 4; k <= 20; ++k) {
        const double n = std::pow(2.0, k);
        if (1.0 / n >= c_max) continue;
        std::vector<double> cur = detail::sample_sl2r_phi_n(alpha, n, grid, icfg);
        const bool cur_covered = covered(cur);
        if (!prev.empty()) {
            gap = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                if (!std::isfinite(prev[i]) || !std::isfinite(cur[i])) continue;
                const double slack = 1e-7 * std::max(1.0, std::abs(prev[i]));
                if (cur[i] > prev[i] + slack)
                    throw std::logic_error("build_sl2r_separatrix: monotone ordering violated");
                gap = std::max(gap, std::abs(cur[i] - prev[i]));
            }
            if (prev_covered && cur_covered && gap < tol) {
                SeparatrixCurve curve;
                curve.alpha = alpha;
                curve.c = grid;
                curve.a = std::move(cur);
                curve.lower_limit = curve.a.front();
                curve.n_reached = static_cast<int>(n);
                curve.achieved_gap = gap;
                return curve;
            }
        }
        prev = std::move(cur);
        prev_covered = cur_covered;
    }
    throw SeparatrixNonConvergence(gap, 1 << 20);
}

/// Continue the separatrix (a global solution of the trajectory ODE) to a
/// larger C on demand, preserving the sampling density.
inline void extend_separatrix(SeparatrixCurve& curve, double c_new,
                              const IntegratorConfig* icfg = nullptr) {
    if (!(c_new > 0.0)) throw std::invalid_argument("extend_separatrix: c_new must be positive");
    if (c_new <= curve.max_c()) return;
    const double s_end = std::log(curve.c.back());
    const double step = s_end - std::log(curve.c[curve.c.size() - 2]);
    const double span = std::log(c_new) - s_end;
    const auto m = static_cast<std::size_t>(std::ceil(span / step));
    std::vector<double> taus;
    for (std::size_t j = 1; j <= m; ++j) taus.push_back(std::min(span, static_cast<double>(j) * step));
    IntegratorConfig cfg = detail::separatrix_integrator_config(curve.alpha, icfg);
    cfg.t_max = taus.back();
    const double alpha = curve.alpha;
    auto rhs = [alpha, s_end](double tau, std::span<const double> y, std::span<double> dy) {
        const double C = std::exp(s_end + tau);
        dy[0] = trajectory_rhs(LrsFamily::sl2r_a_eq_b, ReducedState(C, y[0]), alpha) * C;
    };
    const double y0[1] = {curve.a.back()};
    Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg,
                              std::span<const double>(taus));
    std::size_t ti = 0;
    for (double tau : taus) {
        while (ti < tr.times.size() && tr.times[ti] < tau) ++ti;
        if (ti < tr.times.size() && tr.times[ti] == tau) {
            curve.c.push_back(std::exp(s_end + tau));
            curve.a.push_back(tr.states[ti][0]);
        }
    }
}

/// SL(2,R) classification per the paper's dichotomy: strictly above the
/// separatrix the flow is an immortal pancake; on or below it the solution
/// converges to (0,0) in finite time or to (0, 2*alpha) -- the paper does
/// not separate those two outcomes a priori. The Ricci case alpha = 0 is
/// always a pancake.
inline Regime classify_sl2r(double C0, double A0, double alpha, const SeparatrixCurve* sep) {
    if (!(C0 > 0.0) || !(A0 > 0.0) || !(alpha >= 0.0))
        throw std::invalid_argument("classify_sl2r: bad arguments");
    if (alpha == 0.0) return Regime::pancake_immortal;
    if (sep == nullptr) throw std::invalid_argument("classify_sl2r: separatrix required for alpha > 0");
    if (!detail::nearly_equal(sep->alpha, alpha, 1e-9))
        throw std::invalid_argument("classify_sl2r: separatrix built for a different alpha");
    const double phi = sep->value_at(C0);  // throws out_of_range beyond the sampled range
    return A0 > phi ? Regime::pancake_immortal : Regime::sl2r_boundary_or_shrinker;
}

/// Thresholds used when mapping a finished trajectory to an observed regime.
struct VerifyOptions {
    /// Relative neighborhood for boundary states (Sol B = 2*alpha,
    /// SL(2,R) terminal point (0, 2*alpha)).
    double neighborhood_tol = 1e-2;
    /// |rhs| below this counts as zero drift (fixed points).
    double drift_tol = 1e-10;
};

struct VerificationReport {
    std::optional<Regime> predicted;
    std::optional<Regime> observed;
    bool observed_confirmed = false;
    std::optional<bool> agree;
    double t_end = 0.0;
    std::optional<double> singular_time;
    std::vector<double> terminal_state;
    std::string note;
};

/// Agreement between a theorem prediction and an observed outcome. The
/// exponential shrinker (Nil separatrix) and the finite-time shrinker are
/// observationally identical at any positive floor, and the SL(2,R)
/// non-pancake prediction deliberately covers both of its outcomes.
inline bool regimes_agree(Regime predicted, Regime observed) {
    if (predicted == observed) return true;
    auto is_shrinker = [](Regime r) {
        return r == Regime::shrinker_finite_time || r == Regime::shrinker_exponential;
    };
    if (is_shrinker(predicted) && is_shrinker(observed)) return true;
    if (predicted == Regime::sl2r_boundary_or_shrinker && is_shrinker(observed)) return true;
    return false;
}

/// Observed-outcome mapping of a finished trajectory. Ambiguous outcomes
/// leave `regime` empty with an explanatory note; trend-based outcomes have
/// confirmed = false.
struct Observation {
    std::optional<Regime> regime;
    bool confirmed = false;
    std::string note;
};

inline Observation observe_lrs(LrsFamily fam, const Trajectory& traj, double alpha,
                               const VerifyOptions& opt = {}) {
    const auto& yf = traj.final_state();
    const ReducedState sf(yf[0], yf[1]);
    const ReducedVelocity vf = reduced_rhs(fam, sf, alpha);
    const auto& comps = traj.termination.components;
    auto hit = [&comps](std::size_t i) {
        return std::find(comps.begin(), comps.end(), i) != comps.end();
    };
    const double two_alpha = 2.0 * alpha;
    auto near_two_alpha = [&](double v) {
        return std::abs(v - two_alpha) <= opt.neighborhood_tol * std::max(1.0, two_alpha);
    };

    switch (traj.termination.kind) {
        case TerminationKind::extinction:
            switch (fam) {
                case LrsFamily::su2_b_eq_c:
                    return {Regime::shrinker_finite_time, true, ""};
                case LrsFamily::nil_b_eq_c:
                    if (hit(0) && vf.dy > 0.0)
                        return {Regime::pancake_immortal, false,
                                "A at floor with B expanding (trend)"};
                    return {Regime::shrinker_finite_time, true, ""};
                case LrsFamily::sol_a_eq_c:
                    if (hit(0) && near_two_alpha(sf.y) && std::abs(vf.dy) <= 1.0)
                        return {Regime::sol_boundary, true, ""};
                    if (vf.dy < 0.0 || hit(1)) return {Regime::shrinker_finite_time, true, ""};
                    return {Regime::cigar_immortal, false, "A at floor with B expanding (trend)"};
                case LrsFamily::sl2r_a_eq_b:
                    if (hit(1)) return {Regime::shrinker_finite_time, true, ""};
                    if (near_two_alpha(sf.y))
                        return {Regime::sl2r_boundary_or_shrinker, false,
                                "approaches (0, 2*alpha); life span undetermined"};
                    if (vf.dy > 0.0) return {Regime::pancake_immortal, true, ""};
                    return {Regime::shrinker_finite_time, true, ""};
            }
            break;
        case TerminationKind::blowup:
            switch (fam) {
                case LrsFamily::nil_b_eq_c:
                    if (hit(1) && vf.dx < 0.0) return {Regime::pancake_immortal, true, ""};
                    break;
                case LrsFamily::sol_a_eq_c:
                    if (hit(1)) return {Regime::cigar_immortal, true, ""};
                    break;
                case LrsFamily::sl2r_a_eq_b:
                    if (hit(1)) return {Regime::pancake_immortal, true, ""};
                    break;
                case LrsFamily::su2_b_eq_c:
                    break;
            }
            return {std::nullopt, false, "unexpected blowup pattern"};
        case TerminationKind::reached_t_max:
            switch (fam) {
                case LrsFamily::su2_b_eq_c:
                    return {Regime::shrinker_finite_time, false, "asymptotic (unconfirmed)"};
                case LrsFamily::nil_b_eq_c:
                    if (vf.dy > 0.0)
                        return {Regime::pancake_immortal, false, "asymptotic (unconfirmed)"};
                    return {Regime::shrinker_finite_time, false, "asymptotic (unconfirmed)"};
                case LrsFamily::sol_a_eq_c:
                    if (std::abs(vf.dy) <= opt.drift_tol && near_two_alpha(sf.y))
                        return {Regime::sol_boundary, false, "asymptotic (unconfirmed)"};
                    if (vf.dy > 0.0)
                        return {Regime::cigar_immortal, false, "asymptotic (unconfirmed)"};
                    return {Regime::shrinker_finite_time, false, "asymptotic (unconfirmed)"};
                case LrsFamily::sl2r_a_eq_b:
                    if (sf.x <= opt.neighborhood_tol && near_two_alpha(sf.y))
                        return {Regime::sl2r_boundary_or_shrinker, false,
                                "approaches (0, 2*alpha); life span undetermined"};
                    if (vf.dy > 0.0)
                        return {Regime::pancake_immortal, false, "asymptotic (unconfirmed)"};
                    return {Regime::shrinker_finite_time, false, "asymptotic (unconfirmed)"};
            }
            break;
        case TerminationKind::step_failure:
            return {std::nullopt, false, "integration failed: " + traj.termination.note};
    }
    return {std::nullopt, false, "ambiguous outcome"};
}

/// Observed outcome of a full 3D Nil trajectory.
inline Observation observe_nil_full3d(const Trajectory& traj, double alpha,
                                      [[maybe_unused]] const VerifyOptions& opt = {}) {
    const auto& yf = traj.final_state();
    const MetricVelocity vf =
        rg2_rhs(families::nil, DiagonalMetric(yf[0], yf[1], yf[2]), CouplingParam(alpha));
    switch (traj.termination.kind) {
        case TerminationKind::extinction: {
            const auto& comps = traj.termination.components;
            const bool a_only = comps.size() == 1 && comps[0] == 0;
            if (a_only && vf.dB > 0.0 && vf.dC > 0.0)
                return {Regime::pancake_immortal, false, "A at floor with B, C expanding (trend)"};
            return {Regime::shrinker_finite_time, true, ""};
        }
        case TerminationKind::blowup:
            return {Regime::pancake_immortal, vf.dA < 0.0, ""};
        case TerminationKind::reached_t_max:
            if (vf.dB > 0.0 && vf.dC > 0.0)
                return {Regime::pancake_immortal, false, "asymptotic (unconfirmed)"};
            return {Regime::shrinker_finite_time, false, "asymptotic (unconfirmed)"};
        case TerminationKind::step_failure:
            return {std::nullopt, false, "integration failed: " + traj.termination.note};
    }
    return {std::nullopt, false, "ambiguous outcome"};
}

/// Observed outcome of a scalar constant-curvature trajectory.
inline Observation observe_constant_curvature(const Trajectory& traj,
                                              const ConstCurvatureParams& p,
                                              const VerifyOptions& opt = {}) {
    const double phi = traj.final_state()[0];
    const double dphi = const_curvature_rhs(p, phi);
    switch (traj.termination.kind) {
        case TerminationKind::extinction:
            return {Regime::contract_finite_time, true, ""};
        case TerminationKind::blowup:
            return {Regime::expand_immortal, true, ""};
        case TerminationKind::reached_t_max:
            if (std::abs(dphi) <= opt.drift_tol) return {Regime::fixed_point, true, ""};
            if (dphi > 0.0)
                return {Regime::expand_immortal, false, "asymptotic (unconfirmed)"};
            return {Regime::contract_finite_time, false, "asymptotic (unconfirmed)"};
        case TerminationKind::step_failure:
            return {std::nullopt, false, "integration failed: " + traj.termination.note};
    }
    return {std::nullopt, false, "ambiguous outcome"};
}

/// Integrate one reduced LRS flow and compare the observed outcome with the
/// theorem prediction. `sep` is required for SL(2,R) with alpha > 0.
inline VerificationReport verify_lrs(LrsFamily fam, const ReducedState& s0, double alpha,
                                     const IntegratorConfig& icfg,
                                     const SeparatrixCurve* sep = nullptr,
                                     const VerifyOptions& opt = {}) {
    VerificationReport rep;
    switch (fam) {
        case LrsFamily::su2_b_eq_c: rep.predicted = classify_su2(s0.x, s0.y, alpha); break;
        case LrsFamily::nil_b_eq_c: rep.predicted = classify_nil(s0.x, s0.y, s0.y, alpha); break;
        case LrsFamily::sol_a_eq_c: rep.predicted = classify_sol(s0.x, s0.y, alpha); break;
        case LrsFamily::sl2r_a_eq_b: rep.predicted = classify_sl2r(s0.x, s0.y, alpha, sep); break;
    }
    auto rhs = [fam, alpha](double, std::span<const double> y, std::span<double> dy) {
        const ReducedVelocity v = reduced_rhs(fam, ReducedState(y[0], y[1]), alpha);
        dy[0] = v.dx;
        dy[1] = v.dy;
    };
    const double y0[2] = {s0.x, s0.y};
    const Trajectory traj = integrate(rhs, std::span<const double>(y0, 2), icfg);
    const Observation obs = observe_lrs(fam, traj, alpha, opt);
    rep.observed = obs.regime;
    rep.observed_confirmed = obs.confirmed;
    rep.note = obs.note;
    rep.t_end = traj.t_end;
    rep.singular_time = estimate_singular_time(traj);
    rep.terminal_state = traj.final_state();
    if (rep.predicted && rep.observed) rep.agree = regimes_agree(*rep.predicted, *rep.observed);
    return rep;
}

/// Full 3D Nil verification against the corollary classification.
inline VerificationReport verify_nil_full3d(const DiagonalMetric& g0, double alpha,
                                            const IntegratorConfig& icfg,
                                            [[maybe_unused]] const VerifyOptions& opt = {}) {
    VerificationReport rep;
    rep.predicted = classify_nil(g0.A, g0.B, g0.C, alpha);
    auto rhs = [alpha](double, std::span<const double> y, std::span<double> dy) {
        const MetricVelocity v =
            rg2_rhs(families::nil, DiagonalMetric(y[0], y[1], y[2]), CouplingParam(alpha));
        dy[0] = v.dA;
        dy[1] = v.dB;
        dy[2] = v.dC;
    };
    const double y0[3] = {g0.A, g0.B, g0.C};
    const Trajectory traj = integrate(rhs, std::span<const double>(y0, 3), icfg);
    const Observation obs = observe_nil_full3d(traj, alpha, opt);
    rep.observed = obs.regime;
    rep.observed_confirmed = obs.confirmed;
    rep.note = obs.note;
    rep.t_end = traj.t_end;
    rep.singular_time = estimate_singular_time(traj);
    rep.terminal_state = traj.final_state();
    if (rep.predicted && rep.observed) rep.agree = regimes_agree(*rep.predicted, *rep.observed);
    return rep;
}

/// Constant-curvature verification (also serves the product geometries via
/// n = 2 and the unit factor curvature).
inline VerificationReport verify_constant_curvature(double K, int n, double alpha,
                                                    const IntegratorConfig& icfg,
                                                    const VerifyOptions& opt = {}) {
    VerificationReport rep;
    rep.predicted = classify_constant_curvature(K, alpha, n);
    const ConstCurvatureParams p(K, n, alpha);
    auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = const_curvature_rhs(p, y[0]);
    };
    const double y0[1] = {1.0};
    const Trajectory traj = integrate(rhs, std::span<const double>(y0, 1), icfg);
    const Observation obs = observe_constant_curvature(traj, p, opt);
    rep.observed = obs.regime;
    rep.observed_confirmed = obs.confirmed;
    rep.note = obs.note;
    rep.t_end = traj.t_end;
    rep.singular_time = estimate_singular_time(traj);
    rep.terminal_state = traj.final_state();
    if (rep.predicted && rep.observed) rep.agree = regimes_agree(*rep.predicted, *rep.observed);
    return rep;
}

}  // namespace rg2
