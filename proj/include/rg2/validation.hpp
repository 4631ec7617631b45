#pragma once

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rg2/classify.hpp"
#include "rg2/flows.hpp"
#include "rg2/geometry.hpp"
#include "rg2/integrate.hpp"
#include "rg2/oracles.hpp"
#include "rg2/roots.hpp"

namespace rg2 {

/// One named validation check: `measured` must stay below `threshold`.
struct ValidationCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ValidationOptions {
    /// Mutation-sanity hook: negate the quadratic-curvature term in the
    /// independently assembled right-hand side. With this set the assembly
    /// identity check must fail.
    bool flip_rm2_sign = false;
    unsigned seed = 20250801;
    /// Smaller sample counts for interactive runs.
    bool quick = false;
};

namespace detail {

class CheckRecorder {
  public:
    void add(std::string name, double measured, double threshold, std::string detail = "") {
        checks_.push_back({std::move(name), measured <= threshold && std::isfinite(measured),
                           measured, threshold, std::move(detail)});
    }
    void add_flag(std::string name, bool ok, std::string detail = "") {
        checks_.push_back({std::move(name), ok, ok ? 0.0 : 1.0, 0.5, std::move(detail)});
    }
    std::vector<ValidationCheck> take() { return std::move(checks_); }

  private:
    std::vector<ValidationCheck> checks_;
};

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

inline double rel_diff(double a, double b, double floor_scale = 1e-3) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor_scale});
}

/// Independent assembly of the flow right-hand side through the orthonormal
/// sectional curvatures (the paper's route), used to cross-check rg2_rhs.
inline MetricVelocity rhs_via_sectional(const StructureConstants& sc, const DiagonalMetric& g,
                                        double alpha, double rm2_sign) {
    const SectionalCurvatures on = detail::orthonormal_sectional(sc, g);
    const RicciDiagonal r = ricci_diagonal(sc, g);
    const double s = rm2_sign * alpha;
    return {-2.0 * r.r11 - s * g.A * (on.k12 * on.k12 + on.k31 * on.k31),
            -2.0 * r.r22 - s * g.B * (on.k12 * on.k12 + on.k23 * on.k23),
            -2.0 * r.r33 - s * g.C * (on.k31 * on.k31 + on.k23 * on.k23)};
}

inline const std::vector<StructureConstants>& preset_families() {
    static const std::vector<StructureConstants> fams = {
        families::su2, families::nil, families::sol, families::sl2r, families::r3};
    return fams;
}

inline const std::vector<LrsFamily>& lrs_families() {
    static const std::vector<LrsFamily> fams = {LrsFamily::su2_b_eq_c, LrsFamily::nil_b_eq_c,
                                                LrsFamily::sol_a_eq_c, LrsFamily::sl2r_a_eq_b};
    return fams;
}

// ---- geometry ----

inline void check_geometry(CheckRecorder& rec, const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    const int sweeps = opt.quick ? 100 : 1000;
    const double alphas[] = {0.0, 0.1, 1.0, 10.0};

    double worst_assembly = 0.0, worst_ricci = 0.0, worst_rm2 = 0.0, worst_sect = 0.0;
    double worst_flat = 0.0, worst_lrs = 0.0, worst_nil_ratio = 0.0;
    const double sign = opt.flip_rm2_sign ? -1.0 : 1.0;

    for (int i = 0; i < sweeps; ++i) {
        StructureConstants sc = preset_families()[static_cast<std::size_t>(i) % 5];
        if (i % 7 == 6) {  // arbitrary exploratory triple
            std::uniform_real_distribution<double> u(-3.0, 3.0);
            sc = StructureConstants(u(rng), u(rng), u(rng));
        }
        const DiagonalMetric g(log_uniform(rng, 0.1, 10.0), log_uniform(rng, 0.1, 10.0),
                               log_uniform(rng, 0.1, 10.0));
        const double alpha = alphas[static_cast<std::size_t>(i) % 4];

        const MetricVelocity v = rg2_rhs(sc, g, CouplingParam(alpha));
        const MetricVelocity w = rhs_via_sectional(sc, g, 0.5 * alpha, sign);
        worst_assembly = std::max({worst_assembly, rel_diff(v.dA, w.dA), rel_diff(v.dB, w.dB),
                                   rel_diff(v.dC, w.dC)});

        const double c = log_uniform(rng, 0.2, 5.0);
        const DiagonalMetric gc = g.scaled(c);
        const RicciDiagonal r = ricci_diagonal(sc, g), rc = ricci_diagonal(sc, gc);
        worst_ricci = std::max({worst_ricci, rel_diff(r.r11, rc.r11), rel_diff(r.r22, rc.r22),
                                rel_diff(r.r33, rc.r33)});
        const Rm2Diagonal q = rm2_diagonal(sc, g), qc = rm2_diagonal(sc, gc);
        worst_rm2 = std::max({worst_rm2, rel_diff(q.rm2_11 / c, qc.rm2_11),
                              rel_diff(q.rm2_22 / c, qc.rm2_22), rel_diff(q.rm2_33 / c, qc.rm2_33)});
        const SectionalCurvatures k = sectional_curvatures(sc, g),
                                  kc = sectional_curvatures(sc, gc);
        worst_sect = std::max({worst_sect, rel_diff(c * k.k23, kc.k23), rel_diff(c * k.k31, kc.k31),
                               rel_diff(c * k.k12, kc.k12)});

        const CurvatureSummary flat = curvature_summary(families::r3, g);
        for (double f : {flat.k23, flat.k31, flat.k12, flat.r11, flat.r22, flat.r33, flat.rm2_11,
                         flat.rm2_22, flat.rm2_33})
            worst_flat = std::max(worst_flat, std::abs(f));

        // LRS preservation at the right-hand-side level.
        {
            const double x = log_uniform(rng, 0.1, 10.0), y = log_uniform(rng, 0.1, 10.0);
            const MetricVelocity su2v =
                rg2_rhs(families::su2, DiagonalMetric(x, y, y), CouplingParam(alpha));
            const MetricVelocity nilv =
                rg2_rhs(families::nil, DiagonalMetric(x, y, y), CouplingParam(alpha));
            const MetricVelocity solv =
                rg2_rhs(families::sol, DiagonalMetric(x, y, x), CouplingParam(alpha));
            const MetricVelocity slv =
                rg2_rhs(families::sl2r, DiagonalMetric(y, y, x), CouplingParam(alpha));
            worst_lrs = std::max({worst_lrs, rel_diff(su2v.dB, su2v.dC), rel_diff(nilv.dB, nilv.dC),
                                  rel_diff(solv.dA, solv.dC), rel_diff(slv.dA, slv.dB)});
        }

        // Nil ratio identity C*dB - B*dC = 0 for arbitrary (A,B,C).
        {
            const MetricVelocity nv = rg2_rhs(families::nil, g, CouplingParam(alpha));
            const double lhs = g.C * nv.dB, rhsv = g.B * nv.dC;
            worst_nil_ratio = std::max(worst_nil_ratio, rel_diff(lhs, rhsv));
        }
    }
    rec.add("geometry.assembly_identity", worst_assembly, 1e-12,
            "rg2_rhs vs orthonormal-sectional assembly");
    rec.add("geometry.ricci_scale_invariance", worst_ricci, 1e-12);
    rec.add("geometry.rm2_scaling", worst_rm2, 1e-12);
    rec.add("geometry.sectional_scaling", worst_sect, 1e-12);
    rec.add("geometry.flat_fixed_point", worst_flat, 0.0, "all curvature of (0,0,0) is zero");
    rec.add("geometry.lrs_preservation", worst_lrs, 1e-13);
    rec.add("geometry.nil_ratio_identity", worst_nil_ratio, 1e-12, "C*dB - B*dC = 0");
}

// ---- flows ----

inline void check_flows(CheckRecorder& rec, const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed + 1);
    const int sweeps = opt.quick ? 100 : 1000;
    const double alphas[] = {0.0, 0.1, 1.0, 10.0};

    double worst_consistency = 0.0, worst_conserved = 0.0, worst_iso = 0.0, worst_ratio = 0.0;
    bool monotone_ok = true, xi_ok = true;

    for (int i = 0; i < sweeps; ++i) {
        const double alpha = alphas[static_cast<std::size_t>(i) % 4];
        const ReducedState s(log_uniform(rng, 0.1, 10.0), log_uniform(rng, 0.1, 10.0));

        for (LrsFamily fam : lrs_families()) {
            const ReducedVelocity v = reduced_rhs(fam, s, alpha);
            const MetricVelocity w =
                rg2_rhs(lrs_structure_constants(fam), embed_lrs(fam, s), CouplingParam(alpha));
            const double f = lrs_assembly_factor(fam);
            double wx = w.dA, wy = w.dB;
            if (fam == LrsFamily::sl2r_a_eq_b) {
                wx = w.dC;
                wy = w.dA;
            }
            worst_consistency = std::max(
                {worst_consistency, rel_diff(f * v.dx, wx), rel_diff(f * v.dy, wy)});

            // monotone coordinate
            if (fam == LrsFamily::sol_a_eq_c) {
                if (alpha > 0.0 ? !(v.dx < 0.0) : v.dx != 0.0) monotone_ok = false;
            } else if (!(v.dx < 0.0)) {
                monotone_ok = false;
            }

            // trajectory derivative vs velocity ratio
            if (fam != LrsFamily::sol_a_eq_c && std::abs(v.dx) > 1e-12) {
                const double tr = trajectory_rhs(fam, s, alpha);
                worst_ratio = std::max(worst_ratio, rel_diff(tr, v.dy / v.dx));
            }
        }

        // Sol conserved quantity at the RHS level
        {
            const ReducedVelocity v = reduced_rhs(LrsFamily::sol_a_eq_c, s, alpha);
            const double t1 = v.dx * (1.0 - 2.0 * alpha / s.y);
            const double t2 = s.x * (2.0 * alpha / (s.y * s.y)) * v.dy;
            const double scale = std::max({std::abs(t1), std::abs(t2), 1e-3});
            worst_conserved = std::max(worst_conserved, std::abs(t1 + t2) / scale);
        }

        // SU2 isotropy line dA = dB at A = B
        {
            const ReducedState iso(s.x, s.x);
            const ReducedVelocity v = reduced_rhs(LrsFamily::su2_b_eq_c, iso, alpha);
            worst_iso = std::max(worst_iso, rel_diff(v.dx, v.dy));
        }

        // Nil xi-diagnostic below the separatrix (A/B^2 > 2/(3 alpha))
        if (alpha > 0.0) {
            const double B = s.y;
            std::uniform_real_distribution<double> u(1e-6, 3.0);
            const double A = (2.0 / (3.0 * alpha)) * B * B * (1.0 + u(rng));
            const double paper_expr =
                (8.0 * std::pow(B, 4) - alpha * B * B * A - 34.0 * alpha * alpha * A * A) * 8.0 *
                std::pow(A, 3) / std::pow(B, 8);
            const double true_dxi = -8.0 * std::pow(A, 3) * (2.0 * alpha * A + B * B) *
                                    (17.0 * alpha * A - 8.0 * B * B) / std::pow(B, 8);
            if (!(paper_expr < 0.0) || !(true_dxi < 0.0)) xi_ok = false;
        }
    }
    rec.add("flows.reduced_consistency", worst_consistency, 1e-12,
            "reduced systems vs general assembly (Sol carries its half-speed factor)");
    rec.add("flows.sol_conserved_rhs", worst_conserved, 1e-12, "d/dt[A(1-2a/B)] = 0");
    rec.add_flag("flows.monotonicity", monotone_ok,
                 "dA < 0 for SU2/Nil, dC < 0 for SL2R, Sol dA sign by alpha");
    rec.add("flows.su2_isotropy_line", worst_iso, 1e-13);
    rec.add("flows.trajectory_ratio", worst_ratio, 1e-12);
    rec.add_flag("flows.nil_xi_diagnostic", xi_ok, "dxi/dt < 0 below the separatrix");
}

// ---- integrate ----

inline double const_curv_error_at(double rel_tol, double abs_tol) {
    // alpha = 1, K = 1, n = 3; reference from the implicit solution.
    const ConstCurvatureParams p(1.0, 3, 1.0);
    IntegratorConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    cfg.t_max = 0.1;
    auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = const_curvature_rhs(p, y[0]);
    };
    const double y0[1] = {1.0};
    const Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg);
    const double phi_ref = find_root_bisect(
        [](double phi) { return const_curv_implicit_residual(1.0, 1.0, 0.1, phi).value; }, 1e-9,
        1.0);
    return std::abs(tr.final_state()[0] - phi_ref);
}

inline void check_integrate(CheckRecorder& rec, const ValidationOptions& opt) {
    // Exactness on the constant-RHS Ricci problem (K=1, n=3, alpha=0).
    {
        const ConstCurvatureParams p(1.0, 3, 0.0);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-6;
        cfg.abs_tol = 1e-9;
        cfg.t_max = 0.2;
        auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = const_curvature_rhs(p, y[0]);
        };
        const double y0[1] = {1.0};
        const Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg);
        rec.add("integrate.ricci_linear_exact", std::abs(tr.final_state()[0] - (1.0 - 4.0 * 0.2)),
                1e-12, "phi = 1 - 4t integrated exactly");
    }
    // Tolerance convergence on the non-degenerate alpha = 1 problem.
    {
        const double e1 = const_curv_error_at(1e-6, 1e-9);
        const double e2 = const_curv_error_at(1e-8, 1e-11);
        const double ratio = e2 > 0.0 ? e1 / e2 : 1e9;
        std::ostringstream os;
        os << "errors " << e1 << " -> " << e2;
        rec.add("integrate.convergence_order", 16.0 / std::max(ratio, 1e-30), 1.0, os.str());
    }
    // Positivity of every sample across near-extinction runs.
    {
        bool positive = true;
        IntegratorConfig cfg;
        auto run = [&](LrsFamily fam, double x0, double y0v, double alpha) {
            auto rhs = [fam, alpha](double, std::span<const double> y, std::span<double> dy) {
                const ReducedVelocity v = reduced_rhs(fam, ReducedState(y[0], y[1]), alpha);
                dy[0] = v.dx;
                dy[1] = v.dy;
            };
            const double y0[2] = {x0, y0v};
            const Trajectory tr = integrate(rhs, std::span<const double>(y0, 2), cfg);
            for (const auto& st : tr.states)
                for (double v : st)
                    if (!(v > 0.0)) positive = false;
        };
        run(LrsFamily::su2_b_eq_c, 1.0, 1.0, 0.0);
        run(LrsFamily::su2_b_eq_c, 0.5, 2.0, 1.0);
        run(LrsFamily::nil_b_eq_c, 1.0, 1.0, 1.0);
        run(LrsFamily::sol_a_eq_c, 1.0, 1.0, 1.0);
        rec.add_flag("integrate.positivity", positive, "no sampled state is non-positive");
    }
    // Bitwise determinism within one build.
    {
        IntegratorConfig cfg;
        cfg.t_max = 2.0;
        auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
            const ReducedVelocity v =
                reduced_rhs(LrsFamily::nil_b_eq_c, ReducedState(y[0], y[1]), 0.7);
            dy[0] = v.dx;
            dy[1] = v.dy;
        };
        const double y0[2] = {1.3, 0.9};
        const Trajectory a = integrate(rhs, std::span<const double>(y0, 2), cfg);
        const Trajectory b = integrate(rhs, std::span<const double>(y0, 2), cfg);
        bool same = a.times == b.times && a.states.size() == b.states.size();
        if (same)
            for (std::size_t i = 0; i < a.states.size(); ++i)
                if (a.states[i] != b.states[i]) same = false;
        rec.add_flag("integrate.determinism", same, "identical runs are bit-identical");
    }
    (void)opt;
}

// ---- oracles ----

inline void check_oracles(CheckRecorder& rec, const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed + 2);
    const int pts = opt.quick ? 25 : 100;

    // Finite-difference self-consistency of each closed-form oracle.
    {
        double worst = 0.0;
        for (int i = 0; i < pts; ++i) {
            // Nil Ricci explicit vs its ODEs
            {
                const double A0 = log_uniform(rng, 0.3, 3.0), B0 = log_uniform(rng, 0.3, 3.0);
                const double t = log_uniform(rng, 0.01, 5.0);
                const double h = 1e-6 * std::max(1.0, t);
                const NilRicciState sp = nil_ricci_explicit(A0, B0, t + h);
                const NilRicciState sm = nil_ricci_explicit(A0, B0, t - h);
                const NilRicciState s0 = nil_ricci_explicit(A0, B0, t);
                worst = std::max(worst, rel_diff((sp.A - sm.A) / (2 * h),
                                                 -4.0 * s0.A * s0.A / (s0.B * s0.B)));
                worst = std::max(worst, rel_diff((sp.B - sm.B) / (2 * h), 4.0 * s0.A / s0.B));
            }
            // SU2 Ricci mu(A) vs dmu/dA = mu(3A+2mu)/A^2
            {
                const double A0 = log_uniform(rng, 0.5, 2.0);
                std::uniform_real_distribution<double> um(-0.5 * A0, 2.0 * A0);
                double mu0 = um(rng);
                if (std::abs(mu0) < 1e-3) mu0 = 1e-3;
                const double A = A0 * log_uniform(rng, 0.2, 0.9);
                const double h = 1e-6 * A;
                const double fd = (su2_ricci_trajectory_mu(A + h, A0, mu0) -
                                   su2_ricci_trajectory_mu(A - h, A0, mu0)) /
                                  (2 * h);
                const double mu = su2_ricci_trajectory_mu(A, A0, mu0);
                worst = std::max(worst, rel_diff(fd, mu * (3.0 * A + 2.0 * mu) / (A * A)));
            }
            // Sol time relation vs dt/dB = 1/(8 - 16 alpha / B)
            {
                const double alpha = log_uniform(rng, 0.2, 2.0);
                const double B0 = 2.0 * alpha * log_uniform(rng, 1.2, 3.0);
                const double B = B0 * log_uniform(rng, 1.05, 3.0);
                const double h = 1e-6 * B;
                const double fd =
                    (sol_rg2_time_of_B(B + h, B0, alpha) - sol_rg2_time_of_B(B - h, B0, alpha)) /
                    (2 * h);
                worst = std::max(worst, rel_diff(fd, 1.0 / (8.0 - 16.0 * alpha / B)));
            }
            // SL2R Ricci A(C) vs dA/dC = (-2A^2 - AC)/C^2
            {
                const double C0 = log_uniform(rng, 0.5, 2.0), A0 = log_uniform(rng, 0.5, 2.0);
                const double cbar = sl2r_ricci_climit(C0, A0);
                std::uniform_real_distribution<double> uc(1.05 * cbar, C0);
                const double C = uc(rng);
                const double h = 1e-7 * C;
                const double fd = (sl2r_ricci_trajectory(C + h, C0, A0) -
                                   sl2r_ricci_trajectory(C - h, C0, A0)) /
                                  (2 * h);
                const double A = sl2r_ricci_trajectory(C, C0, A0);
                worst = std::max(worst, rel_diff(fd, (-2.0 * A * A - A * C) / (C * C)));
            }
        }
        rec.add("oracles.fd_consistency", worst, 1e-6,
                "finite differences along each oracle curve match its ODE");
    }

    // Oracle vs integrator at 20 checkpoints per family.
    {
        IntegratorConfig cfg;
        double worst = 0.0;
        // constant curvature, K=1, alpha=1: implicit residual along phi(t)
        {
            const ConstCurvatureParams p(1.0, 3, 1.0);
            std::vector<double> ts;
            for (int i = 1; i <= 20; ++i) ts.push_back(0.1 * i / 20.0);
            IntegratorConfig c2 = cfg;
            c2.t_max = 0.1;
            auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
                dy[0] = const_curvature_rhs(p, y[0]);
            };
            const double y0[1] = {1.0};
            const Trajectory tr =
                integrate(rhs, std::span<const double>(y0, 1), c2, std::span<const double>(ts));
            for (std::size_t i = 0; i < tr.times.size(); ++i)
                worst = std::max(worst, std::abs(const_curv_implicit_residual(
                                                     1.0, 1.0, tr.times[i], tr.states[i][0])
                                                     .value));
        }
        // Nil Ricci from (1,1)
        {
            std::vector<double> ts;
            for (int i = 1; i <= 20; ++i) ts.push_back(5.0 * i / 20.0);
            IntegratorConfig c2 = cfg;
            c2.t_max = 5.0;
            auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
                const ReducedVelocity v =
                    reduced_rhs(LrsFamily::nil_b_eq_c, ReducedState(y[0], y[1]), 0.0);
                dy[0] = v.dx;
                dy[1] = v.dy;
            };
            const double y0[2] = {1.0, 1.0};
            const Trajectory tr =
                integrate(rhs, std::span<const double>(y0, 2), c2, std::span<const double>(ts));
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                const NilRicciState ex = nil_ricci_explicit(1.0, 1.0, tr.times[i]);
                worst = std::max(
                    {worst, rel_diff(tr.states[i][0], ex.A), rel_diff(tr.states[i][1], ex.B)});
            }
        }
        // SL2R Ricci from (C,A) = (1,1)
        {
            std::vector<double> ts;
            for (int i = 1; i <= 20; ++i) ts.push_back(2.0 * i / 20.0);
            IntegratorConfig c2 = cfg;
            c2.t_max = 2.0;
            auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
                const ReducedVelocity v =
                    reduced_rhs(LrsFamily::sl2r_a_eq_b, ReducedState(y[0], y[1]), 0.0);
                dy[0] = v.dx;
                dy[1] = v.dy;
            };
            const double y0[2] = {1.0, 1.0};
            const Trajectory tr =
                integrate(rhs, std::span<const double>(y0, 2), c2, std::span<const double>(ts));
            for (std::size_t i = 1; i < tr.times.size(); ++i)
                worst = std::max(worst, rel_diff(tr.states[i][1],
                                                 sl2r_ricci_trajectory(tr.states[i][0], 1.0, 1.0)));
        }
        rec.add("oracles.vs_integrator", worst, 1e-7, "20 checkpoints per family");
    }

    // Extinction-time formula vs brute-force integration (K=1, n=3).
    {
        const ConstCurvatureParams p(1.0, 3, 1.0);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        cfg.t_max = 1.0;
        auto rhs = [&p](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = const_curvature_rhs(p, y[0]);
        };
        const double y0[1] = {1.0};
        const Trajectory tr = integrate(rhs, std::span<const double>(y0, 1), cfg);
        const double T = const_curv_extinction_time(1.0, 1.0, 3);
        const double measured =
            tr.termination.singular_time ? std::abs(*tr.termination.singular_time - T) : 1e9;
        rec.add("oracles.extinction_time_bruteforce", measured, 1e-5,
                "T(K=1,alpha=1,n=3) = 0.25 + 0.125 ln(1/3)");
        rec.add_flag("oracles.extinction_time_monotone",
                     const_curv_extinction_time(1.0, 1.0, 3) < const_curv_extinction_time(1.0, 0.0, 3),
                     "RG-2 shortens the time to the singularity");
    }
}

// ---- classify ----

inline void check_classify(CheckRecorder& rec, const ValidationOptions& opt) {
    std::mt19937_64 rng(opt.seed + 3);

    // Nil separatrix invariance: B^2 = (3a/2) A and exponential decay.
    {
        const double alpha = 1.0;
        const double A0 = 1.0, B0 = std::sqrt(1.5 * alpha * A0);
        IntegratorConfig cfg;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        cfg.t_max = 3.0;
        auto rhs = [alpha](double, std::span<const double> y, std::span<double> dy) {
            const ReducedVelocity v =
                reduced_rhs(LrsFamily::nil_b_eq_c, ReducedState(y[0], y[1]), alpha);
            dy[0] = v.dx;
            dy[1] = v.dy;
        };
        const double y0[2] = {A0, B0};
        const Trajectory tr = integrate(rhs, std::span<const double>(y0, 2), cfg);
        double worst_rel = 0.0, worst_exp = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const double A = tr.states[i][0], B = tr.states[i][1];
            worst_rel = std::max(worst_rel, std::abs(B * B - 1.5 * alpha * A) / (B * B));
            const double expected = A0 * std::exp(-32.0 * tr.times[i] / (9.0 * alpha));
            worst_exp = std::max(worst_exp, std::abs(A - expected) / expected);
        }
        rec.add("classify.nil_separatrix_relation", worst_rel, 1e-6, "B^2 = (3a/2) A along the flow");
        rec.add("classify.nil_separatrix_decay", worst_exp, 1e-6, "A(t) = A0 exp(-32 t/(9a))");
    }

    // Sol threshold sharpness around B = 2 alpha.
    {
        bool ok = true;
        IntegratorConfig cfg;
        cfg.t_max = 2000.0;
        for (double B0 : {1.9, 1.95, 2.05, 2.1}) {
            const VerificationReport rep =
                verify_lrs(LrsFamily::sol_a_eq_c, ReducedState(1.0, B0), 1.0, cfg);
            if (!rep.agree || !*rep.agree) ok = false;
        }
        rec.add_flag("classify.sol_threshold_sharpness", ok, "B0 in {1.9,1.95,2.05,2.1}, alpha=1");
    }

    // Sol classification depends only on B0/alpha.
    {
        bool ok = true;
        for (int i = 0; i < (opt.quick ? 50 : 400); ++i) {
            const double B0 = log_uniform(rng, 0.05, 20.0);
            const double alpha = log_uniform(rng, 0.05, 20.0);
            const double s = log_uniform(rng, 0.1, 10.0);
            const double A0 = log_uniform(rng, 0.1, 10.0);
            if (classify_sol(A0, B0, alpha) != classify_sol(A0, s * B0, s * alpha)) ok = false;
        }
        rec.add_flag("classify.sol_alpha_scaling", ok, "classification is a function of B0/alpha");
    }

    // SL2R separatrix: ODE self-consistency, lower limit, side partition.
    {
        const double alpha = 1.0;
        const SeparatrixCurve sep = build_sl2r_separatrix(alpha, 3.0, 1e-6);
        double worst_slope = 0.0;
        for (std::size_t i = 1; i + 1 < sep.c.size(); i += 7) {
            const double fd = (sep.a[i + 1] - sep.a[i - 1]) / (sep.c[i + 1] - sep.c[i - 1]);
            const double f =
                trajectory_rhs(LrsFamily::sl2r_a_eq_b, ReducedState(sep.c[i], sep.a[i]), alpha);
            if (std::abs(f) > 1e-3) worst_slope = std::max(worst_slope, rel_diff(fd, f, 1.0));
        }
        rec.add("classify.sl2r_separatrix_ode", worst_slope, 1e-3,
                "centered differences along the curve vs the trajectory ODE");
        rec.add("classify.sl2r_lower_limit", std::abs(sep.lower_limit - 2.0 * alpha), 1e-5 * 10,
                "phi(C) -> 2 alpha as C -> 0");

        bool sides_ok = true;
        IntegratorConfig cfg;
        cfg.t_max = 1e4;
        const int pts = opt.quick ? 4 : 10;
        for (int i = 0; i < pts; ++i) {
            const double C0 = log_uniform(rng, 0.05, 2.5);
            const double phi = sep.value_at(C0);
            for (double factor : {1.05, 0.5}) {
                const double A0 = factor * phi;
                auto rhs = [alpha](double, std::span<const double> y, std::span<double> dy) {
                    const ReducedVelocity v =
                        reduced_rhs(LrsFamily::sl2r_a_eq_b, ReducedState(y[0], y[1]), alpha);
                    dy[0] = v.dx;
                    dy[1] = v.dy;
                };
                const double y0[2] = {C0, A0};
                const Trajectory tr = integrate(rhs, std::span<const double>(y0, 2), cfg);
                const double band = 2e-3;
                int sign0 = factor > 1.0 ? 1 : -1;
                for (std::size_t j = 0; j < tr.times.size(); ++j) {
                    const double c = tr.states[j][0], a = tr.states[j][1];
                    if (c < sep.min_c() || c > sep.max_c()) continue;
                    const double side = sep.side(c, a);
                    if (std::abs(side) <= band * std::max(1.0, a)) continue;
                    if ((side > 0 ? 1 : -1) != sign0) sides_ok = false;
                }
            }
        }
        rec.add_flag("classify.sl2r_partition", sides_ok,
                     "no integrated trajectory crosses the separatrix");
    }
}

}  // namespace detail

/// Run the full validation suite: every oracle check and every testable
/// module invariant, with measured errors against pinned thresholds.
inline std::vector<ValidationCheck> run_validation(const ValidationOptions& opt = {}) {
    detail::CheckRecorder rec;
    detail::check_geometry(rec, opt);
    detail::check_flows(rec, opt);
    detail::check_integrate(rec, opt);
    detail::check_oracles(rec, opt);
    detail::check_classify(rec, opt);
    return rec.take();
}

inline bool all_passed(const std::vector<ValidationCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

}  // namespace rg2
