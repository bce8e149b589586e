#pragma once

#include "feshbach/rootsolver.hpp"

#include <functional>

namespace feshbach {

/// Angular operator Y: (Y u)(mu) = y(mu) u  with  y(mu) = b(mu) (Z - mu)^{-1}  on delta0.
/// Kept symbolically as (b, Z); the integrals below are computed by adaptive quadrature.
struct RiccatiSolution {
    int side = -1;
    Interval delta0;
    MatrixPolynomial b;
    CMatrix z_op;
    CMatrix gram;            ///< Y*Y
    RVector gram_eigenvalues;
    double y_norm = 0.0;
    CMatrix bstar_y;         ///< B*Y  = int K'_B(mu) (Z - mu)^{-1} dmu
    CMatrix ytilde_b;        ///< Y*B  = int (Z* - mu)^{-1} K'_B(mu) dmu
    double ysn_bound = 0.0;  ///< int ||K'_B(mu)|| ||(Z - mu)^{-1}||^2 dmu
    std::vector<double> breaks;

    CMatrix y_at(double mu) const {
        if (b.is_zero()) return CMatrix::Zero(b.rows(), b.cols());
        return b(mu) * shifted_inverse(z_op, mu);
    }
};

inline constexpr double default_quad_tol = 1e-11;

/// Builds Y^(l) from a solved root. Requires spec(Z) to stay off the closed
/// l-side half-plane and away from delta0 (the deformation of Gamma onto delta0).
inline RiccatiSolution compute_Y(const SpectralModel& model, const RootSolution& sol,
                                 double quad_tol = default_quad_tol) {
    const auto n = model.dim();
    RiccatiSolution r;
    r.side = sol.side;
    r.delta0 = model.delta0;
    r.b = model.b;
    r.z_op = sol.z_op;
    if (model.zero_coupling()) {
        r.gram = CMatrix::Zero(n, n);
        r.gram_eigenvalues = RVector::Zero(n);
        r.bstar_y = r.ytilde_b = CMatrix::Zero(n, n);
        return r;
    }
    const double guard = 10.0 * std::sqrt(quad_tol);
    for (cplx ev : sorted_eigenvalues(sol.z_op)) {
        if (sol.side * ev.imag() > 0.0)
            fail(ErrorKind::numerical, "compute_Y: spectrum of Z lies in the continuation domain D^l");
        const double dist = model.delta0.contains(ev.real())
                                ? std::abs(ev.imag())
                                : std::min(std::abs(ev - model.delta0.lo), std::abs(ev - model.delta0.hi));
        if (dist <= guard) fail(ErrorKind::numerical, "compute_Y: spectrum of Z is too close to delta0");
        if (model.delta0.interior(ev.real())) r.breaks.push_back(ev.real());
    }
    const auto& d = model.delta0;
    const CMatrix& z = sol.z_op;
    r.gram = hermitian_part(quad::integrate_adaptive(
        [&](double mu) -> CMatrix {
            const CMatrix res = shifted_inverse(z, mu);
            return res.adjoint() * model.kprime(mu) * res;
        },
        d.lo, d.hi, r.breaks, quad_tol));
    r.bstar_y = quad::integrate_adaptive(
        [&](double mu) -> CMatrix { return model.kprime(mu) * shifted_inverse(z, mu); }, d.lo, d.hi, r.breaks,
        quad_tol);
    r.ytilde_b = quad::integrate_adaptive(
        [&](double mu) -> CMatrix { return shifted_inverse(z.adjoint(), mu) * model.kprime(mu); }, d.lo, d.hi,
        r.breaks, quad_tol);
    r.ysn_bound = quad::integrate_adaptive(
        [&](double mu) {
            const double rn = norm2(shifted_inverse(z, mu));
            return norm2(model.kprime(mu)) * rn * rn;
        },
        d.lo, d.hi, r.breaks, quad_tol);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r.gram, Eigen::EigenvaluesOnly);
    r.gram_eigenvalues = es.eigenvalues();
    r.y_norm = std::sqrt(std::max(0.0, r.gram_eigenvalues(n - 1)));
    return r;
}

/// ||A1 - B*Y - Z||.
inline double check_ZAY(const SpectralModel& model, const RootSolution& sol, const RiccatiSolution& ric) {
    return norm2(model.a1 - ric.bstar_y - sol.z_op);
}

/// max_mu || mu y(mu) - y(mu) A1 + y(mu) (B*Y) + b(mu) ||   (A0 Y - Y A1 + Y B* Y = -B pointwise).
inline double riccati_residual(const SpectralModel& model, const RiccatiSolution& ric, const std::vector<double>& mus) {
    double worst = 0.0;
    for (double mu : mus) {
        require(model.delta0.contains(mu), "riccati_residual: sample outside delta0");
        const CMatrix y = ric.y_at(mu);
        worst = std::max(worst, norm2(mu * y - y * model.a1 + y * ric.bstar_y + model.b(mu)));
    }
    return worst;
}

/// Dual equation for Y~ = Y*:  Y~ A0 - A1 Y~ + Y~ B Y~ = -B*, in kernel form with
/// kernel y(mu)* and the independently integrated Y~B.
inline double adjoint_riccati_residual(const SpectralModel& model, const RiccatiSolution& ric,
                                       const std::vector<double>& mus) {
    double worst = 0.0;
    for (double mu : mus) {
        require(model.delta0.contains(mu), "adjoint_riccati_residual: sample outside delta0");
        const CMatrix yt = ric.y_at(mu).adjoint();
        worst = std::max(worst, norm2(yt * mu - model.a1 * yt + ric.ytilde_b * yt + model.b(mu).adjoint()));
    }
    return worst;
}

/// A pair x = x0 (+) Y~ x0 in G(Y~) and y = Y x1 (+) x1 in G(Y).
struct TrialPair {
    std::function<CVector(double)> x0;  ///< C^m-valued function on delta0
    CVector x1;                         ///< vector in C^n
    std::vector<double> breaks;         ///< extra panel boundaries for x0
};

/// max |[Jx, y]| = max | <x0, Y x1>_{L2} - <Y~ x0, x1> | over the trials.
inline double j_orthogonality(const RiccatiSolution& ric, const std::vector<TrialPair>& trials,
                              double quad_tol = default_quad_tol) {
    double worst = 0.0;
    const auto& d = ric.delta0;
    for (const auto& tr : trials) {
        auto breaks = ric.breaks;
        breaks.insert(breaks.end(), tr.breaks.begin(), tr.breaks.end());
        const cplx lhs = quad::integrate_adaptive(
            [&](double mu) -> cplx { return (ric.y_at(mu) * tr.x1).dot(tr.x0(mu)); }, d.lo, d.hi, breaks, quad_tol);
        const CVector ytx0 = quad::integrate_adaptive(
            [&](double mu) -> CVector { return ric.y_at(mu).adjoint() * tr.x0(mu); }, d.lo, d.hi, breaks, quad_tol);
        const cplx rhs = tr.x1.dot(ytx0);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

struct OmegaOperator {
    int side = -1;
    CMatrix omega;
    double norm = 0.0;
    double bound = 0.0;  ///< V0 / (d^2/4)
    bool bound_ok = false;
};

/// Omega^(l) = int_{Gamma^l} (Z^(-l)* - mu)^{-1} K'_B(mu) (Z^(l) - mu)^{-1} dmu.
inline OmegaOperator compute_Omega(const SpectralModel& model, const Contour& contour, const RootSolution& sol_l,
                                   const RootSolution& sol_minus_l) {
    require(sol_l.side == contour.side && sol_minus_l.side == -contour.side,
            "compute_Omega: solutions must be on sides l and -l of the contour");
    const CMatrix zm_adj = sol_minus_l.z_op.adjoint();
    for (const auto* m : {&sol_l.z_op, &zm_adj})
        for (cplx ev : sorted_eigenvalues(*m)) {
            const auto [dist, spacing] = contour.nearest_node(ev);
            if (dist < 2.0 * spacing) fail(ErrorKind::numerical, "compute_Omega: spectrum meets the contour");
        }
    const auto n = model.dim();
    OmegaOperator out;
    out.side = contour.side;
    out.omega = CMatrix::Zero(n, n);
    for (const auto& node : contour.nodes)
        out.omega += node.weight * (shifted_inverse(zm_adj, node.point) * model.kprime(node.point) *
                                    shifted_inverse(sol_l.z_op, node.point));
    const auto rep = admissibility(model, contour);
    out.norm = norm2(out.omega);
    out.bound = rep.variation / (0.25 * rep.distance * rep.distance);
    out.bound_ok = out.norm < out.bound || (out.bound == 0.0 && out.norm == 0.0);
    return out;
}

/// The same Omega with Gamma deformed onto delta0; legitimate only when neither
/// spec(Z^(l)) nor spec(Z^(-l)*) lies on the l side.
inline CMatrix compute_Omega_on_interval(const SpectralModel& model, const RootSolution& sol_l,
                                         const RootSolution& sol_minus_l, double quad_tol = default_quad_tol) {
    if (model.zero_coupling()) return CMatrix::Zero(model.dim(), model.dim());
    const int l = sol_l.side;
    const CMatrix zm_adj = sol_minus_l.z_op.adjoint();
    std::vector<double> breaks;
    for (const auto* m : {&sol_l.z_op, &zm_adj})
        for (cplx ev : sorted_eigenvalues(*m)) {
            if (l * ev.imag() >= 0.0)
                fail(ErrorKind::numerical, "compute_Omega_on_interval: a pole lies between delta0 and Gamma");
            breaks.push_back(ev.real());
        }
    return quad::integrate_adaptive(
        [&](double mu) -> CMatrix {
            return shifted_inverse(zm_adj, mu) * model.kprime(mu) * shifted_inverse(sol_l.z_op, mu);
        },
        model.delta0.lo, model.delta0.hi, breaks, quad_tol);
}

struct F1Result {
    CMatrix f1;
    double condition = 0.0;
    bool in_half_neighborhood = false;  ///< dist(z, sigma1) <= d/2
};

/// F1(z, Gamma) = I + int_Gamma K'_B(mu) (Z - mu)^{-1} (mu - z)^{-1} dmu, so that
/// M1(z, Gamma) = F1(z, Gamma) (Z - z).
inline F1Result factor_F1(const SpectralModel& model, const Contour& contour, const RootSolution& sol, cplx z) {
    if (!contour.resolves(z)) fail(ErrorKind::invalid_input, "factor_F1: z is too close to the contour");
    const auto n = model.dim();
    F1Result out;
    out.f1 = CMatrix::Identity(n, n);
    for (const auto& node : contour.nodes)
        out.f1 += (node.weight / (node.point - z)) * (model.kprime(node.point) * shifted_inverse(sol.z_op, node.point));
    out.condition = condition_number(out.f1);
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.sigma1.size(); ++i) dist = std::min(dist, std::abs(z - model.sigma1(i)));
    out.in_half_neighborhood = dist <= 0.5 * distance_to_sigma1(model, contour);
    return out;
}

struct Circle {
    cplx center;
    double radius = 0.0;
};

struct Reconstruction {
    CMatrix h0;  ///< -(1/2 pi i) \oint [M1(z, Gamma)]^{-1} dz
    CMatrix h1;  ///< -(1/2 pi i) \oint z [M1(z, Gamma)]^{-1} dz
    CMatrix z_reconstructed;
    std::vector<Circle> circles;
};

namespace detail {

inline double dist_to_sigma1(const SpectralModel& model, cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.sigma1.size(); ++i) d = std::min(d, std::abs(z - model.sigma1(i)));
    return d;
}

}  // namespace detail

/// Default enclosing curve: one circle per cluster of sigma1 (eigenvalues closer
/// than d/2 share a cluster), centred at the cluster midpoint, with radius midway
/// between the farthest enclosed eigenvalue of Z and the largest radius that keeps
/// the circle inside O_{d/2}(sigma1).
inline std::vector<Circle> default_gamma(const SpectralModel& model, const Contour& contour, const RootSolution& sol) {
    const double d = distance_to_sigma1(model, contour);
    std::vector<std::pair<double, double>> clusters;  // [lo, hi] spans of sigma1
    for (Eigen::Index i = 0; i < model.sigma1.size(); ++i) {
        const double s = model.sigma1(i);
        if (!clusters.empty() && s - clusters.back().second <= 0.5 * d)
            clusters.back().second = s;
        else
            clusters.emplace_back(s, s);
    }
    std::vector<double> need(clusters.size(), 0.0);
    for (cplx ev : sorted_eigenvalues(sol.z_op)) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            const double dist = std::abs(ev - 0.5 * (clusters[c].first + clusters[c].second));
            if (dist < bd) {
                bd = dist;
                best = c;
            }
        }
        need[best] = std::max(need[best], bd);
    }
    std::vector<Circle> out;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const double span = clusters[c].second - clusters[c].first;
        const double cap = std::sqrt(std::max(0.0, 0.25 * d * d - 0.25 * span * span));
        if (!(need[c] < cap))
            fail(ErrorKind::invalid_input, "default_gamma: cannot fit an enclosing circle inside O_{d/2}(sigma1)");
        out.push_back({cplx{0.5 * (clusters[c].first + clusters[c].second), 0.0}, 0.5 * (need[c] + cap)});
    }
    for (std::size_t a = 0; a + 1 < out.size(); ++a) {
        const double gap = std::abs(out[a + 1].center - out[a].center);
        if (out[a].radius + out[a + 1].radius >= gap) {
            const double shrink = 0.999 * gap / (out[a].radius + out[a + 1].radius);
            out[a].radius *= shrink;
            out[a + 1].radius *= shrink;
            if (out[a].radius <= need[a] || out[a + 1].radius <= need[a + 1])
                fail(ErrorKind::invalid_input, "default_gamma: enclosing circles would overlap");
        }
    }
    return out;
}

/// Contour-integral reconstruction of (I - Omega)^{-1} and Z from [M1(z, Gamma)]^{-1}
/// on positively oriented circles (trapezoidal rule).
inline Reconstruction reconstruct_from_contour(const SpectralModel& model, const Contour& contour,
                                               const RootSolution& sol, std::vector<Circle> circles = {},
                                               int nodes_per_circle = 512) {
    if (circles.empty()) circles = default_gamma(model, contour, sol);
    const double d = distance_to_sigma1(model, contour);
    const auto spec = sorted_eigenvalues(sol.z_op);
    for (cplx ev : spec) {
        int inside = 0;
        for (const auto& c : circles) inside += std::abs(ev - c.center) < c.radius ? 1 : 0;
        if (inside != 1)
            fail(ErrorKind::invalid_input, "reconstruct_from_contour: every eigenvalue of Z must be enclosed once");
    }
    for (const auto& c : circles)
        for (int k = 0; k < 1024; ++k) {
            const cplx p = c.center + std::polar(c.radius, 2.0 * pi * k / 1024);
            if (detail::dist_to_sigma1(model, p) > 0.5 * d)
                fail(ErrorKind::invalid_input, "reconstruct_from_contour: circle leaves O_{d/2}(sigma1)");
        }
    const auto n = model.dim();
    const auto dens = density_at_nodes(model, contour);
    Reconstruction out;
    out.circles = circles;
    out.h0 = CMatrix::Zero(n, n);
    out.h1 = CMatrix::Zero(n, n);
    for (const auto& c : circles)
        for (int k = 0; k < nodes_per_circle; ++k) {
            const cplx e = std::polar(1.0, 2.0 * pi * k / nodes_per_circle);
            const cplx z = c.center + c.radius * e;
            const cplx dz = I * c.radius * e * (2.0 * pi / nodes_per_circle);
            Eigen::PartialPivLU<CMatrix> lu(m1_continued(model, contour, dens, z));
            const CMatrix inv = lu.inverse();
            out.h0 += dz * inv;
            out.h1 += (z * dz) * inv;
        }
    out.h0 *= -1.0 / (2.0 * pi * I);
    out.h1 *= -1.0 / (2.0 * pi * I);
    Eigen::PartialPivLU<CMatrix> lu(out.h0);
    if (!(lu.rcond() > 1e-14)) fail(ErrorKind::numerical, "reconstruct_from_contour: h0 is singular");
    out.z_reconstructed = out.h1 * lu.inverse();
    return out;
}

struct OneInSpectrum {
    double min_distance = 0.0;  ///< min_i |lambda_i(Y*Y) - 1|
    bool present = false;
    bool subspaces_intersect = false;  ///< graph subspaces of Y and Y* meet nontrivially
};

inline OneInSpectrum check_one_in_spectrum(const RiccatiSolution& ric, double tol = 1e-8) {
    OneInSpectrum out;
    out.min_distance = (ric.gram_eigenvalues.array() - 1.0).abs().minCoeff();
    out.present = out.min_distance <= tol;
    out.subspaces_intersect = out.present;
    return out;
}

}  // namespace feshbach
