#pragma once

#include "feshbach/model.hpp"

#include <array>

namespace feshbach::friedrichs {

/// Scalar model: A0 = multiplication by mu on L2(-alpha, alpha), A1 = a1, (B u)(mu) = b u.
struct Params {
    double alpha = 1.0;
    double a1 = 0.0;
    double b = 0.0;
};

inline void validate(const Params& p) {
    require(p.alpha > 0.0 && std::isfinite(p.alpha), "friedrichs: alpha must be positive");
    require(std::abs(p.a1) < p.alpha, "friedrichs: a1 must lie in (-alpha, alpha)");
    require(p.b >= 0.0 && std::isfinite(p.b), "friedrichs: b must be nonnegative");
}

/// The equivalent SpectralModel (m = n = 1, constant coupling).
inline SpectralModel to_model(const Params& p) {
    validate(p);
    CMatrix a1(1, 1), b(1, 1);
    a1(0, 0) = p.a1;
    b(0, 0) = p.b;
    return build_model({-p.alpha, p.alpha}, a1, MatrixPolynomial::constant(b));
}

/// Unique positive root of  y = 2 b^2 arctan(alpha / y)  (a1 = 0).
/// f(y) = y - 2 b^2 arctan(alpha/y) is increasing with f(0+) < 0 < f(pi b^2),
/// so Newton is safeguarded by that bracket.
inline double solve_y(double alpha, double b) {
    require(alpha > 0.0, "solve_y: alpha must be positive");
    require(b > 0.0, "solve_y: b must be positive");
    const double b2 = b * b;
    auto f = [&](double y) { return y - 2.0 * b2 * std::atan(alpha / y); };
    auto df = [&](double y) { return 1.0 + 2.0 * b2 * alpha / (alpha * alpha + y * y); };
    double lo = 0.0, hi = pi * b2;
    double y = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        const double fy = f(y);
        if (fy == 0.0) return y;
        (fy < 0.0 ? lo : hi) = y;
        double next = y - fy / df(y);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - y) <= 1e-17 * std::max(1.0, y)) return next;
        y = next;
    }
    return y;
}

/// M1(z) = a1 - z + b^2 Log((alpha - z)/(-alpha - z)), cut exactly on [-alpha, alpha].
inline cplx closed_m1(const Params& p, cplx z) {
    if (z.imag() == 0.0 && std::abs(z.real()) <= p.alpha)
        fail(ErrorKind::invalid_input, "closed_m1: z lies on the cut [-alpha, alpha]");
    return p.a1 - z + p.b * p.b * std::log((p.alpha - z) / (-p.alpha - z));
}

/// Number of zeros of M1 inside the rectangle [-3a, 3a] x side*[eps, 3a] by
/// accumulated argument increments along its boundary.
inline int winding_count(const Params& p, int side, int nodes = 10000, double eps_rel = 1e-4) {
    const double a = p.alpha, eps = eps_rel * a;
    const std::array<cplx, 5> corners{cplx{-3 * a, side * eps}, cplx{3 * a, side * eps}, cplx{3 * a, side * 3 * a},
                                      cplx{-3 * a, side * 3 * a}, cplx{-3 * a, side * eps}};
    const int per_edge = nodes / 4;
    double total = 0.0;
    cplx prev = closed_m1(p, corners[0]);
    for (int e = 0; e < 4; ++e)
        for (int k = 1; k <= per_edge; ++k) {
            const cplx z = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(k) / per_edge);
            const cplx cur = closed_m1(p, z);
            total += std::arg(cur / prev);
            prev = cur;
        }
    // the rectangle is traversed counter-clockwise for side = +1, clockwise for side = -1
    return static_cast<int>(std::lround(side * total / (2.0 * pi)));
}

struct OracleSolution {
    double y = 0.0;
    cplx z_plus;   ///< root for l = +1 (lower half-plane)
    cplx z_minus;  ///< root for l = -1 (upper half-plane)
    double y_norm = 0.0;
    double m1y1_residual = 0.0;  ///< |1 - b^2 int dmu/(mu^2 + y^2)|
    Params params;

    /// y-function of the angular operator: -b / (mu + l i y).
    cplx y_function(double mu, int side) const { return -params.b / (mu + static_cast<double>(side) * y * I); }
};

inline OracleSolution oracle_solution(const Params& p) {
    validate(p);
    require(p.a1 == 0.0, "oracle_solution: closed forms require a1 = 0");
    require(p.b > 0.0, "oracle_solution: b must be positive");
    OracleSolution o;
    o.params = p;
    o.y = solve_y(p.alpha, p.b);
    o.z_plus = cplx{0.0, -o.y};
    o.z_minus = cplx{0.0, o.y};
    const double integral = 2.0 * std::atan(p.alpha / o.y) / o.y;  // int_{-a}^{a} dmu/(mu^2+y^2)
    o.y_norm = p.b * std::sqrt(integral);
    o.m1y1_residual = std::abs(1.0 - p.b * p.b * integral);
    return o;
}

}  // namespace feshbach::friedrichs
