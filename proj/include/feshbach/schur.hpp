#pragma once

#include "feshbach/contour.hpp"

namespace feshbach {

namespace detail {

/// log(1 + w) on the principal branch, accurate for small |w|.
inline cplx log1p(cplx w) {
    const cplx u = 1.0 + w;
    if (u == cplx{1.0}) return w;
    return std::log(u) * w / (u - 1.0);
}

/// Moments  I_k(z) = int_lo^hi mu^k / (mu - z) dmu,  k = 0..degree.
/// `log_term` is the k = 0 value; the rest follows from
/// I_k = (hi^k - lo^k)/k + z I_{k-1}.
inline std::vector<cplx> cauchy_moments(const Interval& d, cplx z, cplx log_term, std::size_t degree) {
    std::vector<cplx> m(degree + 1);
    m[0] = log_term;
    double plo = 1.0, phi = 1.0;
    for (std::size_t k = 1; k <= degree; ++k) {
        plo *= d.lo;
        phi *= d.hi;
        m[k] = (phi - plo) / static_cast<double>(k) + z * m[k - 1];
    }
    return m;
}

inline CMatrix combine(const MatrixPolynomial& p, const std::vector<cplx>& moments) {
    CMatrix acc = CMatrix::Zero(p.rows(), p.cols());
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) acc += p.coefficients()[k] * moments[k];
    return acc;
}

}  // namespace detail

/// W1(z) = int_delta0 K'_B(mu) (mu - z)^{-1} dmu on the physical sheet, in closed form.
/// The logarithm is Log((hi - z)/(lo - z)); its cut is exactly delta0.
inline CMatrix w1_physical(const SpectralModel& model, cplx z) {
    const auto& d = model.delta0;
    if (z.imag() == 0.0 && d.contains(z.real()))
        fail(ErrorKind::invalid_input, "w1_physical: z lies on the cut; use w1_boundary");
    const cplx log_term = detail::log1p(d.length() / (d.lo - z));
    const auto& kp = model.density.kprime;
    return detail::combine(kp, detail::cauchy_moments(d, z, log_term, kp.degree()));
}

/// Boundary values W1(lambda +- i0) = PV int K'_B(mu)/(mu - lambda) dmu  +-  i pi K'_B(lambda).
inline CMatrix w1_boundary(const SpectralModel& model, double lambda, int approach) {
    const auto& d = model.delta0;
    require(approach == 1 || approach == -1, "w1_boundary: approach must be +1 or -1");
    require(d.interior(lambda), "w1_boundary: lambda must lie strictly inside delta0");
    const cplx log_term{std::log((d.hi - lambda) / (lambda - d.lo)), 0.0};
    const auto& kp = model.density.kprime;
    CMatrix pv = detail::combine(kp, detail::cauchy_moments(d, cplx{lambda, 0.0}, log_term, kp.degree()));
    return pv + static_cast<double>(approach) * I * pi * model.kprime(lambda);
}

/// M1(z) = A1 - z + W1(z).
inline CMatrix m1_physical(const SpectralModel& model, cplx z) {
    return model.a1 - z * CMatrix::Identity(model.dim(), model.dim()) + w1_physical(model, z);
}

/// Continued Schur complement M1(z, Gamma) = A1 - z + int_Gamma K'_B(mu) (mu - z)^{-1} dmu,
/// by quadrature on the contour nodes.
inline CMatrix m1_continued(const SpectralModel& model, const Contour& contour, cplx z) {
    if (!contour.resolves(z)) fail(ErrorKind::invalid_input, "m1_continued: z is too close to the contour");
    const auto n = model.dim();
    CMatrix w = CMatrix::Zero(n, n);
    for (const auto& node : contour.nodes) w += model.kprime(node.point) * (node.weight / (node.point - z));
    return model.a1 - z * CMatrix::Identity(n, n) + w;
}

/// Same as m1_continued with the densities at the nodes precomputed.
inline CMatrix m1_continued(const SpectralModel& model, const Contour& contour,
                            const std::vector<CMatrix>& node_density, cplx z) {
    if (!contour.resolves(z)) fail(ErrorKind::invalid_input, "m1_continued: z is too close to the contour");
    const auto n = model.dim();
    CMatrix w = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < contour.nodes.size(); ++k)
        w += node_density[k] * (contour.nodes[k].weight / (contour.nodes[k].point - z));
    return model.a1 - z * CMatrix::Identity(n, n) + w;
}

inline std::vector<CMatrix> density_at_nodes(const SpectralModel& model, const Contour& contour) {
    std::vector<CMatrix> out;
    out.reserve(contour.size());
    for (const auto& node : contour.nodes) out.push_back(model.kprime(node.point));
    return out;
}

/// Unphysical-sheet value inside the lens: M1(z) - 2 pi i l K'_B(z).
inline CMatrix sheets_value(const SpectralModel& model, const Contour& contour, cplx z) {
    if (!contour.in_lens(z)) fail(ErrorKind::invalid_input, "sheets_value: z is outside the lens region");
    return m1_physical(model, z) - 2.0 * pi * I * static_cast<double>(contour.side) * model.kprime(z);
}

}  // namespace feshbach
