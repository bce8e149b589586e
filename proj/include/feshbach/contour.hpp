#pragma once

#include "feshbach/model.hpp"
#include "feshbach/quadrature.hpp"

#include <optional>

namespace feshbach {

enum class ContourKind { semicircle, rectangle };

inline std::string to_string(ContourKind k) { return k == ContourKind::semicircle ? "semicircle" : "rectangle"; }

inline ContourKind parse_contour_kind(const std::string& s) {
    if (s == "semicircle") return ContourKind::semicircle;
    if (s == "rectangle") return ContourKind::rectangle;
    fail(ErrorKind::invalid_input, "unsupported contour kind '" + s + "'");
}

struct QuadNode {
    cplx point;
    cplx weight;     ///< d(mu) weight; |weight| is the arclength weight
    double spacing;  ///< distance to the nearest neighbouring node
};

/// Deformation of delta0 into the half-plane of `side`, oriented from the left
/// endpoint to the right endpoint, discretised by Gauss-Legendre on each smooth piece.
struct Contour {
    int side = -1;
    ContourKind kind = ContourKind::semicircle;
    double depth = 0.0;
    Interval ends;
    std::vector<QuadNode> nodes;

    std::size_t size() const { return nodes.size(); }

    double arclength() const {
        double s = 0.0;
        for (const auto& n : nodes) s += std::abs(n.weight);
        return s;
    }

    /// Open region between delta0 and the contour.
    bool in_lens(cplx z) const {
        const double h = side * z.imag();
        if (!(h > 0.0)) return false;
        if (kind == ContourKind::semicircle) return std::abs(z - ends.midpoint()) < 0.5 * ends.length();
        return z.real() > ends.lo && z.real() < ends.hi && h < depth;
    }

    /// Distance from z to the nearest node together with that node's spacing.
    std::pair<double, double> nearest_node(cplx z) const {
        double best = std::numeric_limits<double>::infinity(), spacing = 0.0;
        for (const auto& n : nodes) {
            const double d = std::abs(z - n.point);
            if (d < best) {
                best = d;
                spacing = n.spacing;
            }
        }
        return {best, spacing};
    }

    /// True when z is far enough from the nodes for the quadrature to be trusted.
    bool resolves(cplx z) const {
        const auto [dist, spacing] = nearest_node(z);
        return dist >= 10.0 * spacing;
    }

    /// Exact distance from a point to the geometric curve.
    double distance_to_curve(cplx p) const {
        if (kind == ContourKind::semicircle) {
            const double r = 0.5 * ends.length();
            const cplx c = ends.midpoint();
            const cplx q = p - c;
            // nearest point on the full circle, restricted to the half of `side`
            if (q != cplx{0.0} && side * q.imag() >= 0.0) return std::abs(std::abs(q) - r);
            if (q == cplx{0.0}) return r;
            return std::min(std::abs(p - ends.lo), std::abs(p - ends.hi));
        }
        const cplx a{ends.lo, 0.0}, b{ends.lo, side * depth}, c{ends.hi, side * depth}, d{ends.hi, 0.0};
        auto seg = [&](cplx u, cplx v) {
            const cplx e = v - u;
            const double t = std::clamp(std::real((p - u) * std::conj(e)) / std::norm(e), 0.0, 1.0);
            return std::abs(p - (u + t * e));
        };
        return std::min({seg(a, b), seg(b, c), seg(c, d)});
    }
};

namespace detail {

inline int panel_nodes(double length, int nodes_per_unit) {
    return std::max(200, static_cast<int>(std::ceil(nodes_per_unit * length)));
}

inline void append_segment(std::vector<QuadNode>& out, cplx from, cplx to, int n) {
    const auto rule = quad::gauss_legendre(n);
    const cplx half = 0.5 * (to - from), mid = 0.5 * (from + to);
    for (int k = 0; k < n; ++k) out.push_back({mid + half * rule.nodes[k], half * rule.weights[k], 0.0});
}

inline void fill_spacing(std::vector<QuadNode>& nodes) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        double s = std::numeric_limits<double>::infinity();
        if (k > 0) s = std::min(s, std::abs(nodes[k].point - nodes[k - 1].point));
        if (k + 1 < nodes.size()) s = std::min(s, std::abs(nodes[k].point - nodes[k + 1].point));
        nodes[k].spacing = s;
    }
}

}  // namespace detail

/// Semicircle: the half circle through both endpoints (depth must equal the
/// half-length). Rectangle: down/across/up polyline at depth h.
inline Contour make_contour(const SpectralModel& model, int side, ContourKind kind, double depth,
                            int nodes_per_unit = 200) {
    require(side == 1 || side == -1, "make_contour: side must be +1 or -1");
    require(depth > 0.0 && std::isfinite(depth), "make_contour: depth must be positive");
    require(nodes_per_unit > 0, "make_contour: nodes_per_unit must be positive");
    Contour c;
    c.side = side;
    c.kind = kind;
    c.depth = depth;
    c.ends = model.delta0;
    const double lo = c.ends.lo, hi = c.ends.hi;
    if (kind == ContourKind::semicircle) {
        const double r = 0.5 * c.ends.length();
        require(std::abs(depth - r) <= 1e-12 * r, "make_contour: semicircle depth must equal the half-length of delta0");
        const int n = detail::panel_nodes(pi * r, nodes_per_unit);
        const auto rule = quad::gauss_legendre(n);
        const cplx center = c.ends.midpoint();
        // theta runs from pi to pi - side*pi, i.e. left endpoint to right endpoint through C^side.
        const double dtheta = -side * pi;
        for (int k = 0; k < n; ++k) {
            const double s = 0.5 * (rule.nodes[k] + 1.0);
            const double theta = pi + dtheta * s;
            const cplx e = std::polar(1.0, theta);
            c.nodes.push_back({center + r * e, I * r * e * dtheta * 0.5 * rule.weights[k], 0.0});
        }
    } else {
        const cplx a{lo, 0.0}, b{lo, side * depth}, cc{hi, side * depth}, d{hi, 0.0};
        detail::append_segment(c.nodes, a, b, detail::panel_nodes(depth, nodes_per_unit));
        detail::append_segment(c.nodes, b, cc, detail::panel_nodes(hi - lo, nodes_per_unit));
        detail::append_segment(c.nodes, cc, d, detail::panel_nodes(depth, nodes_per_unit));
    }
    detail::fill_spacing(c.nodes);
    return c;
}

/// V0(B, Gamma) = int_Gamma |dmu| ||K'_B(mu)||.
/// Integrated adaptively on the geometric curve rather than on the solver nodes:
/// the spectral norm has kinks where singular values cross.
inline double variation(const SpectralModel& model, const Contour& contour) {
    if (model.zero_coupling()) return 0.0;
    auto nk = [&](cplx mu) { return norm2(model.kprime(mu)); };
    const double lo = contour.ends.lo, hi = contour.ends.hi;
    constexpr double rel = 1e-12;
    if (contour.kind == ContourKind::semicircle) {
        const double r = 0.5 * contour.ends.length();
        const cplx c = contour.ends.midpoint();
        return r * quad::integrate_adaptive([&](double th) { return nk(c + std::polar(r, contour.side * th)); }, 0.0,
                                            pi, {}, rel);
    }
    const double h = contour.depth, l = contour.side;
    auto side = [&](double x) {
        return quad::integrate_adaptive([&](double y) { return nk(cplx{x, l * y}); }, 0.0, h, {}, rel);
    };
    return side(lo) + side(hi) +
           quad::integrate_adaptive([&](double x) { return nk(cplx{x, l * h}); }, lo, hi, {}, rel);
}

/// d(Gamma) = dist(sigma1, Gamma), exact for both supported kinds.
inline double distance_to_sigma1(const SpectralModel& model, const Contour& contour) {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.sigma1.size(); ++i)
        d = std::min(d, contour.distance_to_curve(cplx{model.sigma1(i), 0.0}));
    return d;
}

struct AdmissibilityReport {
    double variation = 0.0;
    double distance = 0.0;
    double omega = 0.0;  ///< d^2 - 4 V0
    bool admissible = false;
    std::optional<double> r_min;
    std::optional<double> r_max;
};

inline AdmissibilityReport admissibility_from(double v0, double d) {
    AdmissibilityReport r;
    r.variation = v0;
    r.distance = d;
    r.omega = d * d - 4.0 * v0;
    r.admissible = v0 < 0.25 * d * d;
    if (r.admissible) {
        r.r_min = 0.5 * d - std::sqrt(0.25 * d * d - v0);
        r.r_max = d - std::sqrt(v0);
    }
    return r;
}

/// Admissibility for the coupling t*B (the variation scales with t^2).
inline AdmissibilityReport admissibility(const SpectralModel& model, const Contour& contour,
                                         double coupling_scale = 1.0) {
    return admissibility_from(coupling_scale * coupling_scale * variation(model, contour),
                              distance_to_sigma1(model, contour));
}

struct ContourFamily {
    ContourKind kind = ContourKind::rectangle;
    double depth_lo = 0.0;
    double depth_hi = 0.0;
    int nodes_per_unit = 200;
};

struct R0Result {
    Contour contour;
    double depth = 0.0;
    double r0 = 0.0;
    int probes = 0;
    double worst_probe_r_min = 0.0;  ///< largest r_min among admissible probes (r0 <= all of them)
};

/// Minimises r_min(Gamma_h) over the depth family: coarse scan for the
/// admissible sub-range, then golden-section refinement around the best sample.
inline R0Result optimize_r0(const SpectralModel& model, int side, const ContourFamily& family) {
    auto r_min_at = [&](double h) -> std::optional<double> {
        const auto c = make_contour(model, side, family.kind, h, family.nodes_per_unit);
        return admissibility(model, c).r_min;
    };
    R0Result out;
    if (family.kind == ContourKind::semicircle) {
        const double h = 0.5 * model.delta0.length();
        out.contour = make_contour(model, side, family.kind, h, family.nodes_per_unit);
        const auto rep = admissibility(model, out.contour);
        if (!rep.admissible) fail(ErrorKind::inadmissible, "optimize_r0: no admissible contour in family");
        out.depth = h;
        out.r0 = out.worst_probe_r_min = *rep.r_min;
        out.probes = 1;
        return out;
    }
    require(family.depth_lo > 0.0 && family.depth_hi > family.depth_lo, "optimize_r0: invalid depth range");

    constexpr int scan = 41;
    std::vector<double> hs(scan);
    std::vector<std::optional<double>> rs(scan);
    int best = -1;
    for (int i = 0; i < scan; ++i) {
        hs[i] = family.depth_lo + (family.depth_hi - family.depth_lo) * i / (scan - 1);
        rs[i] = r_min_at(hs[i]);
        ++out.probes;
        if (rs[i]) {
            out.worst_probe_r_min = std::max(out.worst_probe_r_min, *rs[i]);
            if (best < 0 || *rs[i] < *rs[best]) best = i;
        }
    }
    if (best < 0) fail(ErrorKind::inadmissible, "optimize_r0: no admissible contour in family");

    const double big = std::numeric_limits<double>::infinity();
    double best_h = hs[best], best_r = *rs[best];
    auto objective = [&](double h) {
        ++out.probes;
        const auto r = r_min_at(h);
        if (!r) return big;
        out.worst_probe_r_min = std::max(out.worst_probe_r_min, *r);
        if (*r < best_r) {
            best_r = *r;
            best_h = h;
        }
        return *r;
    };
    double a = hs[std::max(best - 1, 0)], b = hs[std::min(best + 1, scan - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    while (b - a > 1e-11 * std::max(1.0, b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = objective(x2);
        }
    }
    out.depth = best_h;
    out.r0 = best_r;
    out.contour = make_contour(model, side, family.kind, best_h, family.nodes_per_unit);
    return out;
}

}  // namespace feshbach
