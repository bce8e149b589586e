#pragma once

#include "feshbach/schur.hpp"

#include <numeric>

namespace feshbach {

/// Solution of  X = t^2 W1(A1 + X, Gamma)  and the operator root Z = A1 + X.
struct RootSolution {
    int side = -1;
    CMatrix x;
    CMatrix z_op;
    double coupling_scale = 1.0;
    int iterations = 0;
    double final_step_norm = 0.0;
    double residual = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    std::vector<double> step_norms;
};

struct SolverOptions {
    double tol = 1e-12;
    int max_iter = 500;
};

/// Transformator  W1(Z, Gamma) = -int_Gamma K'_B(mu) (Z - mu)^{-1} dmu.
inline CMatrix transformator(const Contour& contour, const std::vector<CMatrix>& node_density, const CMatrix& zmat) {
    const CVector spec = eigenvalues(zmat);
    // closer than two node spacings the rule is no longer trustworthy
    for (Eigen::Index i = 0; i < spec.size(); ++i) {
        const auto [dist, spacing] = contour.nearest_node(spec(i));
        if (dist < 2.0 * spacing) fail(ErrorKind::numerical, "transformator: spectrum of Z meets the contour");
    }
    CMatrix acc = CMatrix::Zero(zmat.rows(), zmat.cols());
    for (std::size_t k = 0; k < contour.nodes.size(); ++k)
        acc -= contour.nodes[k].weight * (node_density[k] * shifted_inverse(zmat, contour.nodes[k].point));
    return acc;
}

inline CMatrix transformator(const SpectralModel& model, const Contour& contour, const CMatrix& zmat) {
    require(zmat.rows() == model.dim() && zmat.cols() == model.dim(), "transformator: Z has the wrong shape");
    return transformator(contour, density_at_nodes(model, contour), zmat);
}

namespace detail {

inline RootSolution solve_from(const SpectralModel& model, const Contour& contour,
                               const std::vector<CMatrix>& dens, double t, const CMatrix& x0,
                               const SolverOptions& opt) {
    require(t >= 0.0 && t <= 1.0, "solve_basic: coupling scale must lie in [0, 1]");
    const auto rep = admissibility(model, contour, t);
    if (!rep.admissible) {
        std::ostringstream msg;
        msg << "solve_basic: contour is inadmissible at coupling scale " << t << " (V0 = " << rep.variation
            << ", d^2/4 = " << 0.25 * rep.distance * rep.distance << ")";
        fail(ErrorKind::inadmissible, msg.str());
    }
    RootSolution s;
    s.side = contour.side;
    s.coupling_scale = t;
    s.r_min = *rep.r_min;
    s.r_max = *rep.r_max;
    const double t2 = t * t;
    CMatrix x = x0;
    for (int k = 1; k <= opt.max_iter; ++k) {
        CMatrix next = t2 * transformator(contour, dens, model.a1 + x);
        const double step = norm2(next - x);
        const double size = norm2(x);
        s.step_norms.push_back(step);
        x = std::move(next);
        s.iterations = k;
        if (norm2(x) >= s.r_max)
            fail(ErrorKind::numerical, "solve_basic: iterate escaped the r_max ball");
        if (step <= opt.tol * std::max(1.0, size)) {
            s.x = x;
            s.z_op = model.a1 + x;
            s.final_step_norm = step;
            s.residual = norm2(x - t2 * transformator(contour, dens, s.z_op));
            if (norm2(x) > s.r_min + 1e-9)
                fail(ErrorKind::numerical, "solve_basic: solution lies outside the r_min ball");
            return s;
        }
    }
    fail(ErrorKind::numerical, "solve_basic: max_iter exceeded");
}

}  // namespace detail

/// Picard iteration from X = 0; converges geometrically when t^2 V0 < d^2/4.
inline RootSolution solve_basic(const SpectralModel& model, const Contour& contour, double t = 1.0,
                                const SolverOptions& opt = {}) {
    return detail::solve_from(model, contour, density_at_nodes(model, contour), t,
                              CMatrix::Zero(model.dim(), model.dim()), opt);
}

/// Warm-started variant (x0 must lie in the contraction ball).
inline RootSolution solve_basic(const SpectralModel& model, const Contour& contour, double t, const CMatrix& x0,
                                const SolverOptions& opt = {}) {
    return detail::solve_from(model, contour, density_at_nodes(model, contour), t, x0, opt);
}

enum class SpectralLabel { real, resonance, physical_complex };

inline std::string to_string(SpectralLabel l) {
    switch (l) {
        case SpectralLabel::real: return "real";
        case SpectralLabel::resonance: return "resonance";
        case SpectralLabel::physical_complex: return "physical-complex";
    }
    return "?";
}

struct SpectralEntry {
    cplx eigenvalue;
    int multiplicity = 1;
    SpectralLabel label = SpectralLabel::real;
    /// Smallest singular value of M1(lambda) on the physical sheet (physical-complex only).
    double m1_min_singular = 0.0;
    bool verified = true;
};

struct SpectrumClassification {
    std::vector<SpectralEntry> entries;
    double tau_real = 0.0;

    int count(SpectralLabel l) const {
        int c = 0;
        for (const auto& e : entries)
            if (e.label == l) c += e.multiplicity;
        return c;
    }
};

inline double default_tau_real(const SpectralModel& model) { return 1e-8 * model.scale(); }

inline SpectralLabel label_for(cplx lambda, int side, double tau_real) {
    if (std::abs(lambda.imag()) <= tau_real) return SpectralLabel::real;
    return (lambda.imag() > 0 ? 1 : -1) == side ? SpectralLabel::resonance : SpectralLabel::physical_complex;
}

/// Eigenvalues of Z, grouped into clusters of radius 1e-8 scale, labelled by half-plane.
inline SpectrumClassification classify(const SpectralModel& model, const RootSolution& sol, double tau_real) {
    SpectrumClassification out;
    out.tau_real = tau_real;
    const double radius = 1e-8 * model.scale();
    for (cplx ev : sorted_eigenvalues(sol.z_op)) {
        auto it = std::find_if(out.entries.begin(), out.entries.end(),
                               [&](const SpectralEntry& e) { return std::abs(e.eigenvalue - ev) <= radius; });
        if (it != out.entries.end()) {
            it->eigenvalue = (it->eigenvalue * static_cast<double>(it->multiplicity) + ev) /
                             static_cast<double>(it->multiplicity + 1);
            ++it->multiplicity;
            continue;
        }
        out.entries.push_back({ev, 1, SpectralLabel::real, 0.0, true});
    }
    for (auto& e : out.entries) {
        e.label = label_for(e.eigenvalue, sol.side, tau_real);
        if (e.label == SpectralLabel::physical_complex) {
            e.m1_min_singular = min_singular_value(m1_physical(model, e.eigenvalue));
            e.verified = e.m1_min_singular <= 1e-6 * model.scale();
        }
    }
    return out;
}

inline SpectrumClassification classify(const SpectralModel& model, const RootSolution& sol) {
    return classify(model, sol, default_tau_real(model));
}

struct HomotopyPoint {
    double t = 0.0;
    RootSolution solution;
    SpectrumClassification classification;
    std::vector<cplx> eigenvalues;  ///< indexed by trajectory id
};

struct HomotopyPath {
    std::vector<HomotopyPoint> points;
    bool continuous = true;          ///< every paired jump within the Lipschitz allowance
    bool pairing_ambiguous = false;  ///< two eigenvalues within the clustering radius at some t
    bool crosses_real_band = false;  ///< some eigenvalue with |Im| <= tau_real at t > 0
    std::vector<std::string> notes;
};

namespace detail {

/// Assignment of `next` to the previous trajectory points minimising total distance
/// (exhaustive for small n, greedy otherwise).
inline std::vector<cplx> pair_nearest(const std::vector<cplx>& prev, std::vector<cplx> next) {
    const std::size_t n = prev.size();
    std::vector<cplx> out(n);
    if (n <= 7) {
        std::vector<std::size_t> perm(n), best;
        std::iota(perm.begin(), perm.end(), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += std::abs(prev[i] - next[perm[i]]);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (std::size_t i = 0; i < n; ++i) out[i] = next[best[i]];
        return out;
    }
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j_best = 0;
        double d_best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (!used[j] && std::abs(prev[i] - next[j]) < d_best) {
                d_best = std::abs(prev[i] - next[j]);
                j_best = j;
            }
        used[j_best] = true;
        out[i] = next[j_best];
    }
    return out;
}

}  // namespace detail

/// Solves X = t^2 W1(A1 + X, Gamma) along an increasing t grid with warm starts
/// and tracks eigenvalue trajectories by nearest-neighbour pairing.
inline HomotopyPath homotopy_path(const SpectralModel& model, const Contour& contour, const std::vector<double>& t_grid,
                                  const SolverOptions& opt = {}) {
    require(!t_grid.empty(), "homotopy_path: empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require(t_grid[i] >= 0.0 && t_grid[i] <= 1.0, "homotopy_path: t outside [0, 1]");
        if (i > 0) require(t_grid[i] > t_grid[i - 1], "homotopy_path: t grid must be increasing");
    }
    const auto top = admissibility(model, contour, t_grid.back());
    if (!top.admissible) fail(ErrorKind::inadmissible, "homotopy_path: contour inadmissible at the largest t");

    const auto dens = density_at_nodes(model, contour);
    const double tau = default_tau_real(model);
    const double cluster = 1e-8 * model.scale();
    const double v0 = variation(model, contour);
    const double d = top.distance;

    HomotopyPath path;
    CMatrix x = CMatrix::Zero(model.dim(), model.dim());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        HomotopyPoint p;
        p.t = t;
        p.solution = detail::solve_from(model, contour, dens, t, x, opt);
        p.classification = classify(model, p.solution, tau);
        x = p.solution.x;
        auto ev = sorted_eigenvalues(p.solution.z_op);
        for (std::size_t a = 0; a < ev.size(); ++a)
            for (std::size_t b = a + 1; b < ev.size(); ++b)
                if (std::abs(ev[a] - ev[b]) <= cluster) {
                    path.pairing_ambiguous = true;
                    path.notes.push_back("eigenvalues within clustering radius at t = " + std::to_string(t));
                }
        if (i == 0) {
            p.eigenvalues = ev;
        } else {
            const auto& prev = path.points.back();
            p.eigenvalues = detail::pair_nearest(prev.eigenvalues, ev);
            // ||dX/dt|| <= 2t ||W|| / (1 - q) with ||W|| <= V0/(d - r) and q = t^2 V0/(d - r)^2;
            // eigenvalue motion is further amplified by the eigenvector condition number.
            const double r = p.solution.r_min;
            const double q = t * t * v0 / ((d - r) * (d - r));
            const double lip = 2.0 * t * v0 / (d - r) / (1.0 - q);
            Eigen::ComplexEigenSolver<CMatrix> es(p.solution.z_op);
            const double kappa = condition_number(es.eigenvectors());
            const double allowance = 10.0 * (t - prev.t) * lip * kappa + 1e-12;
            for (std::size_t k = 0; k < ev.size(); ++k)
                if (std::abs(p.eigenvalues[k] - prev.eigenvalues[k]) > allowance) {
                    path.continuous = false;
                    path.notes.push_back("trajectory " + std::to_string(k) + " jumps at t = " + std::to_string(t));
                }
        }
        if (t > 0.0)
            for (cplx e : p.eigenvalues)
                if (std::abs(e.imag()) <= tau) path.crosses_real_band = true;
        path.points.push_back(std::move(p));
    }
    return path;
}

}  // namespace feshbach
