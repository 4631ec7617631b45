#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rg2/geometry.hpp"

using namespace rg2;

namespace {

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3});
}

// Hand-transcribed full SU(2) system (lambda = mu = nu = -2), used as an
// independent route against the curvature assembly.
MetricVelocity su2_full_reference(const DiagonalMetric& g, double al) {
    const double A = g.A, B = g.B, C = g.C;
    auto sq = [](double v) { return v * v; };
    const double dA = (4 * sq(C - B) - 4 * A * A) / (B * C) -
                      al / (A * B * B) * sq(sq(B - A) / C + 2 * A + 2 * B - 3 * C) -
                      al / (A * C * C) * sq(sq(A - C) / B + 2 * C + 2 * A - 3 * B);
    const double dB = (4 * sq(A - C) - 4 * B * B) / (A * C) -
                      al / (A * A * B) * sq(sq(B - A) / C + 2 * A + 2 * B - 3 * C) -
                      al / (C * C * B) * sq(sq(C - B) / A + 2 * B + 2 * C - 3 * A);
    const double dC = (4 * sq(B - A) - 4 * C * C) / (A * B) -
                      al / (A * A * C) * sq(sq(A - C) / B + 2 * C + 2 * A - 3 * B) -
                      al / (B * B * C) * sq(sq(C - B) / A + 2 * B + 2 * C - 3 * A);
    return {dA, dB, dC};
}

// Full Nil system (lambda = -2, mu = nu = 0).
MetricVelocity nil_full_reference(const DiagonalMetric& g, double al) {
    const double A = g.A, B = g.B, C = g.C;
    auto sq = [](double v) { return v * v; };
    return {-4 * A * A / (B * C) - al / (A * B * B) * sq(A * A / C) -
                al / (A * C * C) * sq(A * A / B),
            4 * A / C - 10 * al * A * A / (B * C * C),
            4 * A / B - 10 * al * A * A / (B * B * C)};
}

// Full Sol system (lambda = -2, mu = 0, nu = 2).
MetricVelocity sol_full_reference(const DiagonalMetric& g, double al) {
    const double A = g.A, B = g.B, C = g.C;
    auto sq = [](double v) { return v * v; };
    return {-4 * (A * A - C * C) / (B * C) -
                2 * al * sq(A + C) * (A * A - 2 * A * C + 5 * C * C) / (A * B * B * C * C),
            4 * sq(A + C) / (A * C) -
                2 * al * sq(A + C) * (5 * A * A - 6 * A * C + 5 * C * C) / (A * A * B * C * C),
            -4 * (C * C - A * A) / (A * B) -
                2 * al * sq(C + A) * (C * C - 2 * A * C + 5 * A * A) / (A * A * B * B * C)};
}

}  // namespace

TEST_CASE("flat structure constants give zero curvature for any metric") {
    const DiagonalMetric g(1.0, 2.0, 3.0);
    const CurvatureSummary s = curvature_summary(families::r3, g);
    CHECK(s.k23 == 0.0);
    CHECK(s.k31 == 0.0);
    CHECK(s.k12 == 0.0);
    CHECK(s.r11 == 0.0);
    CHECK(s.r22 == 0.0);
    CHECK(s.r33 == 0.0);
    CHECK(s.rm2_11 == 0.0);
    CHECK(s.rm2_22 == 0.0);
    CHECK(s.rm2_33 == 0.0);

    const MetricVelocity v = rg2_rhs(families::r3, g, CouplingParam(3.7));
    CHECK(v.dA == 0.0);
    CHECK(v.dB == 0.0);
    CHECK(v.dC == 0.0);
}

TEST_CASE("round SU(2) at the unit metric") {
    const DiagonalMetric g(1.0, 1.0, 1.0);
    const SectionalCurvatures k = sectional_curvatures(families::su2, g);
    CHECK(k.k23 == Catch::Approx(1.0).margin(1e-14));
    CHECK(k.k31 == Catch::Approx(1.0).margin(1e-14));
    CHECK(k.k12 == Catch::Approx(1.0).margin(1e-14));

    const RicciDiagonal r = ricci_diagonal(families::su2, g);
    CHECK(r.r11 == Catch::Approx(2.0).margin(1e-14));
    CHECK(r.r22 == Catch::Approx(2.0).margin(1e-14));
    CHECK(r.r33 == Catch::Approx(2.0).margin(1e-14));

    const Rm2Diagonal q = rm2_diagonal(families::su2, g);
    CHECK(q.rm2_11 == Catch::Approx(4.0).margin(1e-14));
    CHECK(q.rm2_22 == Catch::Approx(4.0).margin(1e-14));
    CHECK(q.rm2_33 == Catch::Approx(4.0).margin(1e-14));

    const MetricVelocity v0 = rg2_rhs(families::su2, g, CouplingParam(0.0));
    CHECK(v0.dA == Catch::Approx(-4.0).margin(1e-14));
    CHECK(v0.dB == Catch::Approx(-4.0).margin(1e-14));
    CHECK(v0.dC == Catch::Approx(-4.0).margin(1e-14));
}

TEST_CASE("Nil unit metric under RG-2 with alpha = 1") {
    const MetricVelocity v = rg2_rhs(families::nil, DiagonalMetric(1, 1, 1), CouplingParam(1.0));
    CHECK(v.dA == Catch::Approx(-6.0).margin(1e-14));
    CHECK(v.dB == Catch::Approx(-6.0).margin(1e-14));
    CHECK(v.dC == Catch::Approx(-6.0).margin(1e-14));
}

TEST_CASE("scaling laws of the curvature quantities") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    const StructureConstants fams[] = {families::su2, families::nil, families::sol,
                                       families::sl2r};
    for (int i = 0; i < 200; ++i) {
        const StructureConstants& sc = fams[i % 4];
        const DiagonalMetric g(u(rng), u(rng), u(rng));
        const double c = u(rng);
        const DiagonalMetric gc = g.scaled(c);

        const RicciDiagonal r = ricci_diagonal(sc, g), rc = ricci_diagonal(sc, gc);
        CHECK(rel(r.r11, rc.r11) < 1e-13);
        CHECK(rel(r.r22, rc.r22) < 1e-13);
        CHECK(rel(r.r33, rc.r33) < 1e-13);
        // 7.3 is the spec's sample factor for Ricci scale invariance
        const RicciDiagonal r73 = ricci_diagonal(sc, g.scaled(7.3));
        CHECK(rel(r.r11, r73.r11) < 1e-13);

        const Rm2Diagonal q = rm2_diagonal(sc, g), qc = rm2_diagonal(sc, gc);
        CHECK(rel(q.rm2_11 / c, qc.rm2_11) < 1e-13);
        CHECK(rel(q.rm2_22 / c, qc.rm2_22) < 1e-13);
        CHECK(rel(q.rm2_33 / c, qc.rm2_33) < 1e-13);

        const SectionalCurvatures k = sectional_curvatures(sc, g),
                                  kc = sectional_curvatures(sc, gc);
        CHECK(rel(c * k.k23, kc.k23) < 1e-13);
        CHECK(rel(c * k.k31, kc.k31) < 1e-13);
        CHECK(rel(c * k.k12, kc.k12) < 1e-13);
    }
    // rm2 halves when the metric doubles
    const Rm2Diagonal q1 = rm2_diagonal(families::su2, DiagonalMetric(1, 1, 1));
    const Rm2Diagonal q2 = rm2_diagonal(families::su2, DiagonalMetric(2, 2, 2));
    CHECK(q2.rm2_11 == Catch::Approx(q1.rm2_11 / 2.0));
}

TEST_CASE("assembly matches the hand-transcribed full systems") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    const double alphas[] = {0.0, 0.1, 1.0, 10.0};
    for (int i = 0; i < 400; ++i) {
        const DiagonalMetric g(u(rng), u(rng), u(rng));
        const double al = alphas[i % 4];
        const CouplingParam cp(al);

        const MetricVelocity su2 = rg2_rhs(families::su2, g, cp);
        const MetricVelocity su2_ref = su2_full_reference(g, al);
        CHECK(rel(su2.dA, su2_ref.dA) < 1e-12);
        CHECK(rel(su2.dB, su2_ref.dB) < 1e-12);
        CHECK(rel(su2.dC, su2_ref.dC) < 1e-12);

        const MetricVelocity nil = rg2_rhs(families::nil, g, cp);
        const MetricVelocity nil_ref = nil_full_reference(g, al);
        CHECK(rel(nil.dA, nil_ref.dA) < 1e-12);
        CHECK(rel(nil.dB, nil_ref.dB) < 1e-12);
        CHECK(rel(nil.dC, nil_ref.dC) < 1e-12);

        const MetricVelocity sol = rg2_rhs(families::sol, g, cp);
        const MetricVelocity sol_ref = sol_full_reference(g, al);
        CHECK(rel(sol.dA, sol_ref.dA) < 1e-12);
        CHECK(rel(sol.dB, sol_ref.dB) < 1e-12);
        CHECK(rel(sol.dC, sol_ref.dC) < 1e-12);
    }
}

TEST_CASE("LRS identifications are preserved at the RHS level") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng);
        const double al = (i % 3) * 0.7;
        const MetricVelocity su2 = rg2_rhs(families::su2, DiagonalMetric(x, y, y), CouplingParam(al));
        CHECK(rel(su2.dB, su2.dC) < 1e-13);
        const MetricVelocity nil = rg2_rhs(families::nil, DiagonalMetric(x, y, y), CouplingParam(al));
        CHECK(rel(nil.dB, nil.dC) < 1e-13);
        const MetricVelocity sol = rg2_rhs(families::sol, DiagonalMetric(x, y, x), CouplingParam(al));
        CHECK(rel(sol.dA, sol.dC) < 1e-13);
        const MetricVelocity sl = rg2_rhs(families::sl2r, DiagonalMetric(y, y, x), CouplingParam(al));
        CHECK(rel(sl.dA, sl.dB) < 1e-13);
    }
}

TEST_CASE("Nil ratio identity C dB = B dC for arbitrary data") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int i = 0; i < 200; ++i) {
        const DiagonalMetric g(u(rng), u(rng), u(rng));
        const double al = (i % 4) * 0.9;
        const MetricVelocity v = rg2_rhs(families::nil, g, CouplingParam(al));
        CHECK(rel(g.C * v.dB, g.B * v.dC) < 1e-12);
    }
}

TEST_CASE("constructors reject invalid data") {
    CHECK_THROWS_AS(DiagonalMetric(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DiagonalMetric(1.0, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CouplingParam(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(StructureConstants(1.0, std::nan(""), 0.0), std::invalid_argument);
}
