#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rg2 {

/// Tolerances and limits of the adaptive integrator. All values must be
/// positive and extinction_floor < 1 < blowup_cap.
struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double h_init = 1e-4;
    double t_max = 1e4;
    double extinction_floor = 1e-8;
    double blowup_cap = 1e8;
    long max_steps = 10'000'000;

    void validate() const {
        const bool ok = rel_tol > 0 && abs_tol > 0 && h_init > 0 && t_max > 0 &&
                        extinction_floor > 0 && blowup_cap > 0 && max_steps > 0 &&
                        extinction_floor < 1.0 && 1.0 < blowup_cap;
        if (!ok) throw std::invalid_argument("IntegratorConfig: invalid configuration");
    }
};

enum class TerminationKind { reached_t_max, extinction, blowup, step_failure };

inline const char* termination_name(TerminationKind k) {
    switch (k) {
        case TerminationKind::reached_t_max: return "reached_t_max";
        case TerminationKind::extinction: return "extinction";
        case TerminationKind::blowup: return "blowup";
        case TerminationKind::step_failure: return "step_failure";
    }
    return "?";
}

struct TerminationReason {
    TerminationKind kind = TerminationKind::reached_t_max;
    /// Indices of the components that hit the floor / cap.
    std::vector<std::size_t> components;
    /// Extrapolated singular-time estimate (extinction/blowup only). For
    /// blowup this is a lower bound: the cap-crossing time.
    std::optional<double> singular_time;
    std::string note;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    TerminationReason termination;
    double t_end = 0.0;

    const std::vector<double>& final_state() const { return states.back(); }
};

/// Refined singular-time estimate; empty unless the run ended in
/// extinction or blowup.
inline std::optional<double> estimate_singular_time(const Trajectory& traj) {
    if (traj.termination.kind == TerminationKind::extinction ||
        traj.termination.kind == TerminationKind::blowup)
        return traj.termination.singular_time;
    return std::nullopt;
}

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c2 = 1.0 / 5, dp_c3 = 3.0 / 10, dp_c4 = 4.0 / 5, dp_c5 = 8.0 / 9;
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15, dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33, dp_a63 = 46732.0 / 5247,
                        dp_a64 = 49.0 / 176, dp_a65 = -5103.0 / 18656;
inline constexpr double dp_a71 = 35.0 / 384, dp_a73 = 500.0 / 1113, dp_a74 = 125.0 / 192,
                        dp_a75 = -2187.0 / 6784, dp_a76 = 11.0 / 84;
// 5th-order minus 4th-order weights (error estimator).
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695, dp_e4 = 71.0 / 1920,
                        dp_e5 = -17253.0 / 339200, dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;
// Dense-output weights (4th-order continuous extension).
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0;
inline constexpr double dp_d3 = 87487479700.0 / 32700410799.0;
inline constexpr double dp_d4 = -10690763975.0 / 1880347072.0;
inline constexpr double dp_d5 = 701980252875.0 / 199316789632.0;
inline constexpr double dp_d6 = -1453857185.0 / 822651844.0;
inline constexpr double dp_d7 = 69997945.0 / 29380423.0;

/// Continuous extension of one accepted step on [t0, t0+h].
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> r1, r2, r3, r4, r5;

    void eval(double theta, std::vector<double>& out) const {
        const double th1 = 1.0 - theta;
        out.resize(r1.size());
        for (std::size_t i = 0; i < r1.size(); ++i)
            out[i] = r1[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
    }
};

struct EventBounds {
    double lo;
    double hi;
    bool require_positive;
};

template <class Rhs>
Trajectory integrate_core(Rhs&& rhs, std::span<const double> y0, const IntegratorConfig& cfg,
                          const EventBounds& bounds, std::span<const double> sample_times) {
    cfg.validate();
    const std::size_t n = y0.size();
    if (n == 0) throw std::invalid_argument("integrate: empty state");
    for (double v : y0) {
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite initial state");
        if (bounds.require_positive && !(v > 0.0))
            throw std::invalid_argument("integrate: initial state must be strictly positive");
    }

    Trajectory traj;
    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> y1(n), yerr(n), work(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    DenseStep dense;
    dense.r1.resize(n);
    dense.r2.resize(n);
    dense.r3.resize(n);
    dense.r4.resize(n);
    dense.r5.resize(n);

    double t = 0.0;
    double h = std::min(cfg.h_init, cfg.t_max);
    double fac_old = 1e-4;
    std::size_t next_sample = 0;
    const double eps = std::numeric_limits<double>::epsilon();

    traj.times.push_back(0.0);
    traj.states.push_back(y);
    while (next_sample < sample_times.size() && sample_times[next_sample] <= 0.0) ++next_sample;

    rhs(t, std::span<const double>(y), std::span<double>(k1));

    auto push_sample = [&](double ts, const std::vector<double>& ys) {
        if (ts > traj.times.back()) {
            traj.times.push_back(ts);
            traj.states.push_back(ys);
        }
    };

    auto finish = [&](TerminationKind kind, std::vector<std::size_t> comps,
                      std::optional<double> singular, std::string note) {
        traj.termination = {kind, std::move(comps), singular, std::move(note)};
        traj.t_end = traj.times.back();
        return traj;
    };

    // Minimal step below which the controller is considered stalled.
    auto h_min_at = [&](double tc) { return 32.0 * eps * std::max(std::abs(tc), 1e-12); };

    // When the step collapses, a component racing to the floor (or cap)
    // within a window unresolvable in double precision is an extinction
    // (blowup), not an integrator defect.
    auto stall_event = [&]() -> std::optional<TerminationReason> {
        rhs(t, std::span<const double>(y), std::span<double>(work));
        const double window = std::max(4096.0 * eps * std::max(std::abs(t), 1.0), 1e-12);
        double best_tau = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        TerminationKind kind = TerminationKind::extinction;
        for (std::size_t i = 0; i < n; ++i) {
            if (work[i] < 0.0) {
                const double tau = (y[i] - bounds.lo) / (-work[i]);
                if (tau < best_tau) { best_tau = tau; best_i = i; kind = TerminationKind::extinction; }
            } else if (work[i] > 0.0) {
                const double tau = (bounds.hi - y[i]) / work[i];
                if (tau < best_tau) { best_tau = tau; best_i = i; kind = TerminationKind::blowup; }
            }
        }
        if (best_tau <= window)
            return TerminationReason{kind, {best_i}, t + best_tau,
                                     "event resolved by extrapolation at vanishing timescale"};
        return std::nullopt;
    };

    long steps = 0;
    long consecutive_rejects = 0;
    while (true) {
        if (steps++ >= cfg.max_steps)
            return finish(TerminationKind::step_failure, {}, std::nullopt, "max_steps exceeded");

        bool last_step = false;
        if (t + h >= cfg.t_max) {
            h = cfg.t_max - t;
            last_step = true;
            if (h <= 0.0) return finish(TerminationKind::reached_t_max, {}, std::nullopt, "");
        }

        // Seven stages (FSAL: k1 holds f(t, y)). A stage state outside the
        // RHS domain (non-positive in positive mode, or an RHS throw) rejects
        // the step.
        bool bad_state = false;
        auto stage_ok = [&](const std::vector<double>& s) {
            for (double v : s)
                if (!std::isfinite(v) || (bounds.require_positive && !(v > 0.0))) return false;
            return true;
        };
        try {
            do {
                for (std::size_t i = 0; i < n; ++i) work[i] = y[i] + h * dp_a21 * k1[i];
                if (!stage_ok(work)) { bad_state = true; break; }
                rhs(t + dp_c2 * h, std::span<const double>(work), std::span<double>(k2));
                for (std::size_t i = 0; i < n; ++i)
                    work[i] = y[i] + h * (dp_a31 * k1[i] + dp_a32 * k2[i]);
                if (!stage_ok(work)) { bad_state = true; break; }
                rhs(t + dp_c3 * h, std::span<const double>(work), std::span<double>(k3));
                for (std::size_t i = 0; i < n; ++i)
                    work[i] = y[i] + h * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
                if (!stage_ok(work)) { bad_state = true; break; }
                rhs(t + dp_c4 * h, std::span<const double>(work), std::span<double>(k4));
                for (std::size_t i = 0; i < n; ++i)
                    work[i] = y[i] + h * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] +
                                          dp_a54 * k4[i]);
                if (!stage_ok(work)) { bad_state = true; break; }
                rhs(t + dp_c5 * h, std::span<const double>(work), std::span<double>(k5));
                for (std::size_t i = 0; i < n; ++i)
                    work[i] = y[i] + h * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                                          dp_a64 * k4[i] + dp_a65 * k5[i]);
                if (!stage_ok(work)) { bad_state = true; break; }
                rhs(t + h, std::span<const double>(work), std::span<double>(k6));
                for (std::size_t i = 0; i < n; ++i)
                    y1[i] = y[i] + h * (dp_a71 * k1[i] + dp_a73 * k3[i] + dp_a74 * k4[i] +
                                        dp_a75 * k5[i] + dp_a76 * k6[i]);
                if (!stage_ok(y1)) { bad_state = true; break; }
                rhs(t + h, std::span<const double>(y1), std::span<double>(k7));
            } while (false);
        } catch (const std::exception&) {
            bad_state = true;
        }

        double err = 0.0;
        if (!bad_state) {
            for (std::size_t i = 0; i < n; ++i) {
                yerr[i] = h * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] + dp_e5 * k5[i] +
                               dp_e6 * k6[i] + dp_e7 * k7[i]);
                const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
                const double q = yerr[i] / sc;
                err += q * q;
            }
            err = std::sqrt(err / static_cast<double>(n));
            if (!std::isfinite(err)) bad_state = true;
        }

        if (bad_state || err > 1.0) {
            // Rejected step.
            ++consecutive_rejects;
            const double shrink = bad_state ? 0.5
                                            : std::max(0.1, 0.9 * std::pow(err, -0.2));
            h *= std::min(shrink, 0.9);
            if (h < h_min_at(t) || consecutive_rejects > 200) {
                if (auto ev = stall_event()) {
                    traj.termination = *std::move(ev);
                    traj.t_end = traj.times.back();
                    return traj;
                }
                return finish(TerminationKind::step_failure, {}, std::nullopt,
                              "step size collapsed below the representable minimum");
            }
            continue;
        }
        consecutive_rejects = 0;

        // Accepted: build the dense interpolant for this step.
        dense.t0 = t;
        dense.h = h;
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            dense.r1[i] = y[i];
            dense.r2[i] = ydiff;
            dense.r3[i] = bspl;
            dense.r4[i] = ydiff - h * k7[i] - bspl;
            dense.r5[i] = h * (dp_d1 * k1[i] + dp_d3 * k3[i] + dp_d4 * k4[i] + dp_d5 * k5[i] +
                               dp_d6 * k6[i] + dp_d7 * k7[i]);
        }

        // End-of-step event detection, refined by bisection on the dense output.
        std::vector<std::size_t> lo_hits, hi_hits;
        for (std::size_t i = 0; i < n; ++i) {
            if (y1[i] < bounds.lo) lo_hits.push_back(i);
            if (y1[i] > bounds.hi) hi_hits.push_back(i);
        }
        if (!lo_hits.empty() || !hi_hits.empty()) {
            const bool lo_event = !lo_hits.empty();
            // Earliest crossing over the offending components.
            double theta_star = 1.0;
            auto refine = [&](std::size_t comp, double level, bool below) {
                double a = 0.0, b = 1.0;
                for (int it = 0; it < 80; ++it) {
                    const double m = 0.5 * (a + b);
                    dense.eval(m, work);
                    const bool crossed = below ? (work[comp] < level) : (work[comp] > level);
                    (crossed ? b : a) = m;
                }
                return b;
            };
            if (lo_event) {
                for (std::size_t c : lo_hits)
                    theta_star = std::min(theta_star, refine(c, bounds.lo, true));
            } else {
                for (std::size_t c : hi_hits)
                    theta_star = std::min(theta_star, refine(c, bounds.hi, false));
            }
            const double t_ev = t + theta_star * h;
            dense.eval(theta_star, work);
            // Emit requested samples that precede the event.
            while (next_sample < sample_times.size() && sample_times[next_sample] < t_ev) {
                dense.eval((sample_times[next_sample] - t) / h, y1);
                push_sample(sample_times[next_sample], y1);
                ++next_sample;
            }
            for (double& v : work) v = std::max(v, std::numeric_limits<double>::min());
            push_sample(t_ev, work);
            std::vector<std::size_t> comps = lo_event ? lo_hits : hi_hits;
            return finish(lo_event ? TerminationKind::extinction : TerminationKind::blowup,
                          std::move(comps), t_ev, "");
        }

        // Emit requested samples inside the accepted step.
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t + h) {
            dense.eval((sample_times[next_sample] - t) / h, work);
            push_sample(sample_times[next_sample], work);
            ++next_sample;
        }

        t += h;
        y.swap(y1);
        k1.swap(k7);  // FSAL
        push_sample(t, y);

        if (last_step || t >= cfg.t_max)
            return finish(TerminationKind::reached_t_max, {}, std::nullopt, "");

        // PI step-size controller.
        const double safe_err = std::max(err, 1e-10);
        double fac = std::pow(safe_err, 0.17) / std::pow(fac_old, 0.04);
        fac = std::clamp(fac / 0.9, 0.1, 5.0);
        fac_old = safe_err;
        h = h / fac;
    }
}

}  // namespace detail

/// Integrate y' = rhs(t, y) from strictly positive y0 at t = 0 until the
/// first of: t = t_max, a component falling below extinction_floor
/// (extinction) or climbing above blowup_cap (blowup), or stalled stepping.
/// `sample_times` (strictly increasing, optional) requests additional
/// interpolated samples at exact times via the dense output.
template <class Rhs>
Trajectory integrate(Rhs&& rhs, std::span<const double> y0, const IntegratorConfig& cfg,
                     std::span<const double> sample_times = {}) {
    detail::EventBounds bounds{cfg.extinction_floor, cfg.blowup_cap, true};
    return detail::integrate_core(rhs, y0, cfg, bounds, sample_times);
}

template <class Rhs>
Trajectory integrate(Rhs&& rhs, std::initializer_list<double> y0, const IntegratorConfig& cfg,
                     std::span<const double> sample_times = {}) {
    return integrate(rhs, std::span<const double>(y0.begin(), y0.size()), cfg, sample_times);
}

/// Integrate in log coordinates u_i = ln y_i. The rational flows here have
/// monomial denominators, so the approach to zero is linear in u; this is
/// the preferred mode for near-extinction refinement.
template <class Rhs>
Trajectory integrate_log(Rhs&& rhs, std::span<const double> y0, const IntegratorConfig& cfg,
                         std::span<const double> sample_times = {}) {
    const std::size_t n = y0.size();
    std::vector<double> u0(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(y0[i] > 0.0))
            throw std::invalid_argument("integrate_log: initial state must be strictly positive");
        u0[i] = std::log(y0[i]);
    }
    std::vector<double> yv(n), dyv(n);
    auto log_rhs = [&rhs, &yv, &dyv, n](double t, std::span<const double> u,
                                        std::span<double> dudt) {
        for (std::size_t i = 0; i < n; ++i) yv[i] = std::exp(u[i]);
        rhs(t, std::span<const double>(yv), std::span<double>(dyv));
        for (std::size_t i = 0; i < n; ++i) dudt[i] = dyv[i] / yv[i];
    };
    detail::EventBounds bounds{std::log(cfg.extinction_floor), std::log(cfg.blowup_cap), false};
    Trajectory traj = detail::integrate_core(log_rhs, std::span<const double>(u0), cfg, bounds,
                                             sample_times);
    for (auto& st : traj.states)
        for (double& v : st) v = std::exp(v);
    return traj;
}

template <class Rhs>
Trajectory integrate_log(Rhs&& rhs, std::initializer_list<double> y0, const IntegratorConfig& cfg,
                         std::span<const double> sample_times = {}) {
    return integrate_log(rhs, std::span<const double>(y0.begin(), y0.size()), cfg, sample_times);
}

}  // namespace rg2
