#pragma once

#include <cmath>
#include <stdexcept>

namespace rg2 {

/// Structure constants (lambda, mu, nu) = (c^1_23, c^2_31, c^3_12) of a
/// unimodular 3D Lie algebra in a Milnor frame. The five classical families
/// are provided as presets; arbitrary finite triples are accepted for
/// exploratory use.
struct StructureConstants {
    double lambda = 0.0;
    double mu = 0.0;
    double nu = 0.0;

    constexpr StructureConstants() = default;
    StructureConstants(double l, double m, double n) : lambda(l), mu(m), nu(n) {
        if (!std::isfinite(l) || !std::isfinite(m) || !std::isfinite(n))
            throw std::invalid_argument("StructureConstants: values must be finite");
    }
};

namespace families {
inline const StructureConstants su2{-2.0, -2.0, -2.0};
inline const StructureConstants nil{-2.0, 0.0, 0.0};
inline const StructureConstants sol{-2.0, 0.0, 2.0};
inline const StructureConstants sl2r{-2.0, -2.0, 2.0};
inline const StructureConstants r3{0.0, 0.0, 0.0};
}  // namespace families

/// Diagonal metric coefficients (A, B, C) in the fixed left-invariant frame.
struct DiagonalMetric {
    double A;
    double B;
    double C;

    DiagonalMetric(double a, double b, double c) : A(a), B(b), C(c) {
        if (!(A > 0.0) || !(B > 0.0) || !(C > 0.0) || !std::isfinite(A) ||
            !std::isfinite(B) || !std::isfinite(C))
            throw std::invalid_argument("DiagonalMetric: coefficients must be positive and finite");
    }

    DiagonalMetric scaled(double c) const { return DiagonalMetric(c * A, c * B, c * C); }
};

/// RG coupling constant; alpha = 0 selects Ricci flow.
struct CouplingParam {
    double alpha;

    CouplingParam(double a = 0.0) : alpha(a) {  // NOLINT: implicit by design
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("CouplingParam: alpha must be finite and >= 0");
    }
};

/// Sectional curvatures of the frame planes, K_ij = K(f_i ^ f_j).
struct SectionalCurvatures {
    double k23;
    double k31;
    double k12;
};

struct RicciDiagonal {
    double r11;
    double r22;
    double r33;
};

struct Rm2Diagonal {
    double rm2_11;
    double rm2_22;
    double rm2_33;
};

struct CurvatureSummary {
    double k23, k31, k12;
    double r11, r22, r33;
    double rm2_11, rm2_22, rm2_33;
};

/// Time derivative (dA/dt, dB/dt, dC/dt) of the metric coefficients.
struct MetricVelocity {
    double dA;
    double dB;
    double dC;
};

namespace detail {
/// Orthonormal-frame sectional curvatures (K(e2^e3), K(e3^e1), K(e1^e2)).
inline SectionalCurvatures orthonormal_sectional(const StructureConstants& sc,
                                                 const DiagonalMetric& g) {
    const double l = sc.lambda, m = sc.mu, n = sc.nu;
    const double A = g.A, B = g.B, C = g.C;
    const double k23 = (m * B - n * C) * (m * B - n * C) / (4.0 * A * B * C) +
                       l * (2.0 * m * B + 2.0 * n * C - 3.0 * l * A) / (4.0 * B * C);
    const double k31 = (n * C - l * A) * (n * C - l * A) / (4.0 * A * B * C) +
                       m * (2.0 * n * C + 2.0 * l * A - 3.0 * m * B) / (4.0 * A * C);
    const double k12 = (l * A - m * B) * (l * A - m * B) / (4.0 * A * B * C) +
                       n * (2.0 * l * A + 2.0 * m * B - 3.0 * n * C) / (4.0 * A * B);
    return {k23, k31, k12};
}
}  // namespace detail

inline SectionalCurvatures sectional_curvatures(const StructureConstants& sc,
                                                const DiagonalMetric& g) {
    const SectionalCurvatures on = detail::orthonormal_sectional(sc, g);
    return {g.B * g.C * on.k23, g.A * g.C * on.k31, g.A * g.B * on.k12};
}

inline RicciDiagonal ricci_diagonal(const StructureConstants& sc, const DiagonalMetric& g) {
    const double l = sc.lambda, m = sc.mu, n = sc.nu;
    const double A = g.A, B = g.B, C = g.C;
    const double r11 = ((l * A) * (l * A) - (m * B - n * C) * (m * B - n * C)) / (2.0 * B * C);
    const double r22 = ((m * B) * (m * B) - (n * C - l * A) * (n * C - l * A)) / (2.0 * A * C);
    const double r33 = ((n * C) * (n * C) - (l * A - m * B) * (l * A - m * B)) / (2.0 * A * B);
    return {r11, r22, r33};
}

inline Rm2Diagonal rm2_diagonal(const StructureConstants& sc, const DiagonalMetric& g) {
    const SectionalCurvatures k = sectional_curvatures(sc, g);
    const double A = g.A, B = g.B, C = g.C;
    const double rm11 = 2.0 / (A * B * B) * k.k12 * k.k12 + 2.0 / (A * C * C) * k.k31 * k.k31;
    const double rm22 = 2.0 / (A * A * B) * k.k12 * k.k12 + 2.0 / (C * C * B) * k.k23 * k.k23;
    const double rm33 = 2.0 / (A * A * C) * k.k31 * k.k31 + 2.0 / (B * B * C) * k.k23 * k.k23;
    return {rm11, rm22, rm33};
}

inline CurvatureSummary curvature_summary(const StructureConstants& sc, const DiagonalMetric& g) {
    const SectionalCurvatures k = sectional_curvatures(sc, g);
    const RicciDiagonal r = ricci_diagonal(sc, g);
    const Rm2Diagonal q = rm2_diagonal(sc, g);
    return {k.k23, k.k31, k.k12, r.r11, r.r22, r.r33, q.rm2_11, q.rm2_22, q.rm2_33};
}

/// Right-hand side of the RG-2 flow, dg/dt = -2 Ric - (alpha/2) Rm^2,
/// restricted to diagonal left-invariant metrics. alpha = 0 is Ricci flow.
inline MetricVelocity rg2_rhs(const StructureConstants& sc, const DiagonalMetric& g,
                              const CouplingParam& alpha) {
    const RicciDiagonal r = ricci_diagonal(sc, g);
    const Rm2Diagonal q = rm2_diagonal(sc, g);
    const double a = alpha.alpha;
    return {-2.0 * r.r11 - 0.5 * a * q.rm2_11,
            -2.0 * r.r22 - 0.5 * a * q.rm2_22,
            -2.0 * r.r33 - 0.5 * a * q.rm2_33};
}

}  // namespace rg2
