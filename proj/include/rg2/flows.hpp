#pragma once

#include <cmath>
#include <stdexcept>

#include "rg2/geometry.hpp"

namespace rg2 {

/// Locally rotationally symmetric reductions. Each tag fixes which pair of
/// metric coefficients is identified and which two coordinates (x, y) span
/// the reduced phase plane:
///   su2_b_eq_c : B = C, plane (A, B)
///   nil_b_eq_c : B = C, plane (A, B)
///   sol_a_eq_c : A = C, plane (A, B)
///   sl2r_a_eq_b: A = B, plane (C, A)
enum class LrsFamily { su2_b_eq_c, nil_b_eq_c, sol_a_eq_c, sl2r_a_eq_b };

inline const char* lrs_family_name(LrsFamily f) {
    switch (f) {
        case LrsFamily::su2_b_eq_c: return "su2";
        case LrsFamily::nil_b_eq_c: return "nil";
        case LrsFamily::sol_a_eq_c: return "sol";
        case LrsFamily::sl2r_a_eq_b: return "sl2r";
    }
    return "?";
}

struct ReducedState {
    double x;
    double y;

    ReducedState(double x_, double y_) : x(x_), y(y_) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("ReducedState: coordinates must be positive and finite");
    }
};

struct ReducedVelocity {
    double dx;
    double dy;
};

/// Map a reduced phase-plane point onto the full diagonal metric.
inline DiagonalMetric embed_lrs(LrsFamily fam, const ReducedState& s) {
    switch (fam) {
        case LrsFamily::su2_b_eq_c: return DiagonalMetric(s.x, s.y, s.y);
        case LrsFamily::nil_b_eq_c: return DiagonalMetric(s.x, s.y, s.y);
        case LrsFamily::sol_a_eq_c: return DiagonalMetric(s.x, s.y, s.x);
        case LrsFamily::sl2r_a_eq_b: return DiagonalMetric(s.y, s.y, s.x);
    }
    throw std::invalid_argument("embed_lrs: bad family");
}

inline StructureConstants lrs_structure_constants(LrsFamily fam) {
    switch (fam) {
        case LrsFamily::su2_b_eq_c: return families::su2;
        case LrsFamily::nil_b_eq_c: return families::nil;
        case LrsFamily::sol_a_eq_c: return families::sol;
        case LrsFamily::sl2r_a_eq_b: return families::sl2r;
    }
    throw std::invalid_argument("lrs_structure_constants: bad family");
}

/// Ratio between the full-metric flow velocity and the reduced system.
/// The Sol reduced system carries the conventional half-speed
/// parametrization of its closed-form solutions (B = 8t + B0 for alpha = 0),
/// which is exactly half of the general diagonal-flow right-hand side at
/// A = C; the other reductions match the full flow identically.
inline constexpr double lrs_assembly_factor(LrsFamily fam) {
    return fam == LrsFamily::sol_a_eq_c ? 2.0 : 1.0;
}

/// Reduced two-dimensional RG-2 systems.
inline ReducedVelocity reduced_rhs(LrsFamily fam, const ReducedState& s, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("reduced_rhs: alpha must be finite and >= 0");
    switch (fam) {
        case LrsFamily::su2_b_eq_c: {
            const double A = s.x, B = s.y;
            const double dA = -(4.0 * A * A * B * B + 2.0 * alpha * A * A * A) / (B * B * B * B);
            const double dB = (4.0 * A * B * B - 8.0 * B * B * B - 10.0 * alpha * A * A -
                               16.0 * alpha * B * B + 24.0 * alpha * A * B) /
                              (B * B * B);
            return {dA, dB};
        }
        case LrsFamily::nil_b_eq_c: {
            const double A = s.x, B = s.y;
            const double dA = -4.0 * A * A / (B * B) - 2.0 * alpha * A * A * A / (B * B * B * B);
            const double dB = 4.0 * A / B - 10.0 * alpha * A * A / (B * B * B);
            return {dA, dB};
        }
        case LrsFamily::sol_a_eq_c: {
            const double A = s.x, B = s.y;
            return {-16.0 * alpha * A / (B * B), 8.0 - 16.0 * alpha / B};
        }
        case LrsFamily::sl2r_a_eq_b: {
            const double C = s.x, A = s.y;
            const double dC = -4.0 * C * C / (A * A) - 2.0 * alpha * C * C * C / (A * A * A * A);
            const double dA = 8.0 + 4.0 * C / A -
                              alpha * (16.0 * A * A + 24.0 * A * C + 10.0 * C * C) / (A * A * A);
            return {dC, dA};
        }
    }
    throw std::invalid_argument("reduced_rhs: bad family");
}

/// Phase-plane trajectory derivative dy/dx obtained by eliminating time
/// through the sign-definite coordinate (dB/dA for SU2 and Nil, dA/dC for
/// SL(2,R)). Sol is excluded: its solutions are known in closed form.
inline double trajectory_rhs(LrsFamily fam, const ReducedState& s, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("trajectory_rhs: alpha must be finite and >= 0");
    switch (fam) {
        case LrsFamily::su2_b_eq_c: {
            const double A = s.x, B = s.y;
            return (4.0 * B * B * B * B - 2.0 * A * B * B * B +
                    alpha * (5.0 * A * A * B - 12.0 * A * B * B + 8.0 * B * B * B)) /
                   (2.0 * A * A * B * B + alpha * A * A * A);
        }
        case LrsFamily::nil_b_eq_c: {
            const double A = s.x, B = s.y;
            return B * (5.0 * alpha * A - 2.0 * B * B) / (A * (2.0 * B * B + alpha * A));
        }
        case LrsFamily::sl2r_a_eq_b: {
            const double C = s.x, A = s.y;
            return -A *
                   (4.0 * A * A * A + 2.0 * A * A * C - 8.0 * alpha * A * A -
                    12.0 * alpha * A * C - 5.0 * alpha * C * C) /
                   (C * C * (2.0 * A * A + alpha * C));
        }
        case LrsFamily::sol_a_eq_c:
            throw std::invalid_argument("trajectory_rhs: Sol has closed-form solutions");
    }
    throw std::invalid_argument("trajectory_rhs: bad family");
}

/// Parameters of the constant-curvature scalar flow dphi/dt.
/// For the product geometries SO(3)xR and H(2)xR the evolving factor
/// coefficient E obeys this equation with n = 2, K = +1 (sphere) or
/// K = -1 (hyperbolic plane) and phi = E; the flat factor is constant.
struct ConstCurvatureParams {
    double K;
    int n;
    double alpha;

    ConstCurvatureParams(double K_, int n_, double alpha_) : K(K_), n(n_), alpha(alpha_) {
        if (n != 2 && n != 3)
            throw std::invalid_argument("ConstCurvatureParams: n must be 2 or 3");
        if (!(alpha >= 0.0) || !std::isfinite(alpha) || !std::isfinite(K))
            throw std::invalid_argument("ConstCurvatureParams: bad K or alpha");
    }
};

inline double const_curvature_rhs(const ConstCurvatureParams& p, double phi) {
    if (!(phi > 0.0)) throw std::invalid_argument("const_curvature_rhs: phi must be positive");
    const double nm1 = static_cast<double>(p.n - 1);
    return -2.0 * p.K * nm1 - p.alpha * p.K * p.K * nm1 / phi;
}

}  // namespace rg2
