#pragma once

#include <cmath>
#include <stdexcept>

namespace rg2 {

/// Residual of an implicit relation; zero along exact solutions.
struct ImplicitResidual {
    double value;
};

/// Residual of the implicit constant-curvature RG-2 solution (n = 3,
/// normalized to phi(0) = 1):
///   phi = -2K(n-1) t + 1 + (alpha K / 2) ln|(2 phi + alpha K)/(2 + alpha K)|.
inline ImplicitResidual const_curv_implicit_residual(double K, double alpha, double t,
                                                     double phi) {
    if (!(phi > 0.0))
        throw std::invalid_argument("const_curv_implicit_residual: phi must be positive");
    const double den = 2.0 + alpha * K;
    const double num = 2.0 * phi + alpha * K;
    if (den == 0.0 || num == 0.0)
        throw std::domain_error("const_curv_implicit_residual: log-domain violation");
    const double rhs = -4.0 * K * t + 1.0 + 0.5 * alpha * K * std::log(std::abs(num / den));
    return {phi - rhs};
}

/// Extinction time of the positive constant-curvature flow (phi(0) = 1):
///   T = 1/(2K(n-1)) + (alpha/(4(n-1))) ln|alpha K / (2 + alpha K)|.
/// The alpha -> 0 limit of the second term is 0.
inline double const_curv_extinction_time(double K, double alpha, int n) {
    if (!(K > 0.0)) throw std::invalid_argument("const_curv_extinction_time: K must be positive");
    if (n < 2) throw std::invalid_argument("const_curv_extinction_time: n must be >= 2");
    const double nm1 = static_cast<double>(n - 1);
    const double lead = 1.0 / (2.0 * K * nm1);
    if (alpha * K == 0.0) return lead;
    return lead + alpha / (4.0 * nm1) * std::log(std::abs(alpha * K / (2.0 + alpha * K)));
}

struct NilRicciState {
    double A;
    double B;
};

/// Explicit Ricci-flow (alpha = 0) solution for the reduced Nil system:
///   A = (k1/12)(k1 t + k2)^(-1/3),  B = (k1 t + k2)^(1/3),
/// with k1 = 12 A0 B0 and k2 = B0^3 fixed by the initial data.
inline NilRicciState nil_ricci_explicit(double A0, double B0, double t) {
    if (!(A0 > 0.0) || !(B0 > 0.0))
        throw std::invalid_argument("nil_ricci_explicit: initial data must be positive");
    if (t < 0.0) throw std::invalid_argument("nil_ricci_explicit: t must be >= 0");
    const double k1 = 12.0 * A0 * B0;
    const double k2 = B0 * B0 * B0;
    const double w = std::cbrt(k1 * t + k2);
    return {k1 / 12.0 / w, w};
}

/// Explicit Ricci-flow SU(2) trajectory mu(A) = -A^3/(A^2 - k) with the
/// constant k fixed by mu(A0) = mu0 (mu := B - A).
inline double su2_ricci_trajectory_mu(double A, double A0, double mu0) {
    if (!(A > 0.0) || !(A0 > 0.0))
        throw std::invalid_argument("su2_ricci_trajectory_mu: A values must be positive");
    if (!(mu0 > -A0))
        throw std::invalid_argument("su2_ricci_trajectory_mu: mu0 must exceed -A0");
    if (mu0 == 0.0) return 0.0;  // isotropic line
    const double k = A0 * A0 + A0 * A0 * A0 / mu0;
    const double den = A * A - k;
    if (std::abs(den) < 1e-300 * std::abs(A * A * A))
        throw std::domain_error("su2_ricci_trajectory_mu: pole A^2 = k");
    return -A * A * A / den;
}

/// Conserved quantity of the reduced Sol RG-2 flow, A (1 - 2 alpha / B).
inline double sol_rg2_invariant(double A, double B, double alpha) {
    if (B == 0.0) throw std::invalid_argument("sol_rg2_invariant: B must be nonzero");
    return A * (1.0 - 2.0 * alpha / B);
}

/// Time at which the reduced Sol flow started at B0 reaches B:
///   8 t = B - B0 + 2 alpha ln|(B - 2 alpha)/(B0 - 2 alpha)|.
/// B and B0 must lie on the same side of 2 alpha.
inline double sol_rg2_time_of_B(double B, double B0, double alpha) {
    if (!(B > 0.0) || !(B0 > 0.0))
        throw std::invalid_argument("sol_rg2_time_of_B: B values must be positive");
    const double d = B - 2.0 * alpha;
    const double d0 = B0 - 2.0 * alpha;
    if (d == 0.0 || d0 == 0.0 || (d > 0.0) != (d0 > 0.0))
        throw std::invalid_argument("sol_rg2_time_of_B: B and B0 must be on the same side of 2*alpha");
    return (B - B0 + 2.0 * alpha * std::log(std::abs(d / d0))) / 8.0;
}

/// Explicit Ricci-flow SL(2,R) trajectory
///   A(C) = C0^2 A0 C / (C^2 (A0 + C0) - C0^2 A0),
/// valid for C above the limit value returned by sl2r_ricci_climit.
inline double sl2r_ricci_trajectory(double C, double C0, double A0) {
    if (!(C > 0.0) || !(C0 > 0.0) || !(A0 > 0.0))
        throw std::invalid_argument("sl2r_ricci_trajectory: arguments must be positive");
    const double den = C * C * (A0 + C0) - C0 * C0 * A0;
    if (!(den > 0.0))
        throw std::domain_error("sl2r_ricci_trajectory: C at or below the limit value");
    return C0 * C0 * A0 * C / den;
}

/// Limit value of C along the Ricci-flow SL(2,R) trajectory,
///   Cbar = (C0^2 A0 / (A0 + C0))^(1/2)  (< C0).
inline double sl2r_ricci_climit(double C0, double A0) {
    if (!(C0 > 0.0) || !(A0 > 0.0))
        throw std::invalid_argument("sl2r_ricci_climit: arguments must be positive");
    return std::sqrt(C0 * C0 * A0 / (A0 + C0));
}

}  // namespace rg2
