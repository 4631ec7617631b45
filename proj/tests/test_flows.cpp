#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rg2/flows.hpp"
#include "rg2/geometry.hpp"

using namespace rg2;

namespace {
double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}
}  // namespace

TEST_CASE("reduced systems at the spec's sample points") {
    // Sol Ricci: dA = 0, dB = 8 for any state
    const ReducedVelocity sol = reduced_rhs(LrsFamily::sol_a_eq_c, ReducedState(2.3, 0.7), 0.0);
    CHECK(sol.dx == 0.0);
    CHECK(sol.dy == 8.0);

    // Nil at (1,1), alpha = 1
    const ReducedVelocity nil = reduced_rhs(LrsFamily::nil_b_eq_c, ReducedState(1, 1), 1.0);
    CHECK(nil.dx == Catch::Approx(-6.0).margin(1e-14));
    CHECK(nil.dy == Catch::Approx(-6.0).margin(1e-14));

    // SU2 at A = B = 1, alpha = 0
    const ReducedVelocity su2 = reduced_rhs(LrsFamily::su2_b_eq_c, ReducedState(1, 1), 0.0);
    CHECK(su2.dx == Catch::Approx(-4.0).margin(1e-14));
    CHECK(su2.dy == Catch::Approx(-4.0).margin(1e-14));
}

TEST_CASE("reduced systems agree with the general assembly") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    const double alphas[] = {0.0, 0.1, 1.0, 10.0};
    const LrsFamily fams[] = {LrsFamily::su2_b_eq_c, LrsFamily::nil_b_eq_c, LrsFamily::sol_a_eq_c,
                              LrsFamily::sl2r_a_eq_b};
    for (int i = 0; i < 1000; ++i) {
        const ReducedState s(std::exp(u(rng)), std::exp(u(rng)));
        for (double al : alphas) {
            for (LrsFamily fam : fams) {
                const ReducedVelocity v = reduced_rhs(fam, s, al);
                const MetricVelocity w =
                    rg2_rhs(lrs_structure_constants(fam), embed_lrs(fam, s), CouplingParam(al));
                const double f = lrs_assembly_factor(fam);
                double wx = w.dA, wy = w.dB;
                if (fam == LrsFamily::sl2r_a_eq_b) {
                    wx = w.dC;
                    wy = w.dA;
                }
                CHECK(rel(f * v.dx, wx) < 1e-12);
                CHECK(rel(f * v.dy, wy) < 1e-12);
            }
        }
    }
}

TEST_CASE("monotone coordinates") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(std::log(0.05), std::log(20.0));
    for (int i = 0; i < 500; ++i) {
        const ReducedState s(std::exp(u(rng)), std::exp(u(rng)));
        const double al = (i % 2) ? 0.0 : std::exp(u(rng));
        CHECK(reduced_rhs(LrsFamily::su2_b_eq_c, s, al).dx < 0.0);
        CHECK(reduced_rhs(LrsFamily::nil_b_eq_c, s, al).dx < 0.0);
        CHECK(reduced_rhs(LrsFamily::sl2r_a_eq_b, s, al).dx < 0.0);
        const double sol_dx = reduced_rhs(LrsFamily::sol_a_eq_c, s, al).dx;
        if (al > 0.0)
            CHECK(sol_dx < 0.0);
        else
            CHECK(sol_dx == 0.0);
    }
}

TEST_CASE("SU2 isotropy line is invariant") {
    for (double a : {0.5, 1.7, 3.0}) {
        for (double al : {0.0, 0.4, 2.0}) {
            const ReducedVelocity v = reduced_rhs(LrsFamily::su2_b_eq_c, ReducedState(a, a), al);
            CHECK(rel(v.dx, v.dy) < 1e-13);
        }
    }
}

TEST_CASE("trajectory derivative equals the velocity ratio") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    const LrsFamily fams[] = {LrsFamily::su2_b_eq_c, LrsFamily::nil_b_eq_c,
                              LrsFamily::sl2r_a_eq_b};
    for (int i = 0; i < 500; ++i) {
        const ReducedState s(std::exp(u(rng)), std::exp(u(rng)));
        const double al = (i % 2) ? 0.0 : std::exp(u(rng));
        for (LrsFamily fam : fams) {
            const ReducedVelocity v = reduced_rhs(fam, s, al);
            if (std::abs(v.dx) < 1e-12) continue;
            CHECK(rel(trajectory_rhs(fam, s, al), v.dy / v.dx) < 1e-12);
        }
    }
}

TEST_CASE("trajectory derivative sample values") {
    // Nil on the separatrix with alpha = 2/3: B = sqrt(A), slope 1/2 at A = 1
    CHECK(trajectory_rhs(LrsFamily::nil_b_eq_c, ReducedState(1, 1), 2.0 / 3.0) ==
          Catch::Approx(0.5).margin(1e-14));
    // Nil Ricci at (1,1): B(-2B^2)/(A 2B^2) = -1
    CHECK(trajectory_rhs(LrsFamily::nil_b_eq_c, ReducedState(1, 1), 0.0) ==
          Catch::Approx(-1.0).margin(1e-14));
    // Sol has no trajectory ODE
    CHECK_THROWS_AS(trajectory_rhs(LrsFamily::sol_a_eq_c, ReducedState(1, 1), 1.0),
                    std::invalid_argument);
}

TEST_CASE("Sol conserved quantity vanishes at the RHS level") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    for (int i = 0; i < 500; ++i) {
        const ReducedState s(std::exp(u(rng)), std::exp(u(rng)));
        const double al = std::exp(u(rng));
        const ReducedVelocity v = reduced_rhs(LrsFamily::sol_a_eq_c, s, al);
        const double t1 = v.dx * (1.0 - 2.0 * al / s.y);
        const double t2 = s.x * (2.0 * al / (s.y * s.y)) * v.dy;
        CHECK(std::abs(t1 + t2) <= 1e-12 * std::max({std::abs(t1), std::abs(t2), 1e-3}));
    }
}

TEST_CASE("Nil xi-diagnostic is negative below the separatrix") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> margin(1e-9, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double B = std::exp(u(rng));
        const double al = std::exp(u(rng));
        const double A = (2.0 / (3.0 * al)) * B * B * (1.0 + margin(rng));
        const double paper_expr =
            (8.0 * std::pow(B, 4) - al * B * B * A - 34.0 * al * al * A * A) * 8.0 *
            std::pow(A, 3) / std::pow(B, 8);
        CHECK(paper_expr < 0.0);
        // the actual derivative of xi along the flow has the same sign there
        const double true_dxi = -8.0 * std::pow(A, 3) * (2.0 * al * A + B * B) *
                                (17.0 * al * A - 8.0 * B * B) / std::pow(B, 8);
        CHECK(true_dxi < 0.0);
    }
}

TEST_CASE("constant-curvature scalar flow") {
    // flat fixed point
    for (double phi : {0.2, 1.0, 7.0})
        CHECK(const_curvature_rhs(ConstCurvatureParams(0.0, 3, 2.0), phi) == 0.0);
    // Ricci, K = 1, n = 3: dphi = -4
    CHECK(const_curvature_rhs(ConstCurvatureParams(1.0, 3, 0.0), 1.0) == -4.0);
    // RG-2 hyperbolic with small curvature expands: 4 - 2 = 2
    CHECK(const_curvature_rhs(ConstCurvatureParams(-1.0, 3, 1.0), 1.0) ==
          Catch::Approx(2.0).margin(1e-14));
    // product-geometry factor equation: n = 2, unit sphere
    CHECK(const_curvature_rhs(ConstCurvatureParams(1.0, 2, 0.0), 1.0) == -2.0);
    CHECK_THROWS_AS(const_curvature_rhs(ConstCurvatureParams(1.0, 3, 0.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConstCurvatureParams(1.0, 4, 0.0), std::invalid_argument);
}

TEST_CASE("reduced state validation") {
    CHECK_THROWS_AS(ReducedState(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ReducedState(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(reduced_rhs(LrsFamily::nil_b_eq_c, ReducedState(1, 1), -0.1),
                    std::invalid_argument);
}
