#pragma once

#include "feshbach/core.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <queue>

namespace feshbach::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on the three-term recurrence.
inline Rule gauss_legendre(int n) {
    require(n >= 1, "gauss_legendre: n must be positive");
    // Returns (P_n(x), P_n'(x)).
    auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) return std::pair<double, double>{x, 1.0};
        return std::pair<double, double>{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(cplx v) { return std::abs(v); }
template <class Derived>
double value_norm(const Eigen::MatrixBase<Derived>& m) {
    return m.cwiseAbs().maxCoeff();
}

/// Adaptive 15-point Gauss-Kronrod integration over [a, b] for scalar or
/// Eigen-matrix valued integrands. `breaks` are interior points that are
/// always used as panel boundaries (e.g. real parts of nearby poles).
/// Panels are bisected in order of largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |I|).
template <class F>
auto integrate_adaptive(F&& f, double a, double b, std::vector<double> breaks = {},
                        double rel_tol = 1e-11, double abs_tol = 1e-15, int max_panels = 20000) {
    using T = std::decay_t<decltype(f(a))>;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();

    struct Panel {
        double lo, hi;
        T value;
        double err;
    };
    auto eval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        // boost stores abscissae ascending from 0: xk[0] = 0, odd entries are Gauss nodes.
        T f0 = f(c);
        T kron = f0 * wk[0];
        T gauss = f0 * wg[0];
        for (std::size_t j = 1; j < xk.size(); ++j) {
            T fs = f(c - h * xk[j]) + f(c + h * xk[j]);
            kron = kron + fs * wk[j];
            if (j % 2 == 0) gauss = gauss + fs * wg[j / 2];
        }
        kron = kron * h;
        gauss = gauss * h;
        return Panel{lo, hi, kron, value_norm(kron - gauss)};
    };

    std::vector<double> cuts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks)
        if (x > a && x < b && x - cuts.back() > 1e-12 * (b - a)) cuts.push_back(x);
    cuts.push_back(b);

    auto cmp = [](const Panel& p, const Panel& q) { return p.err < q.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
    T sum{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = eval(cuts[i], cuts[i + 1]);
        sum = i == 0 ? p.value : T(sum + p.value);
        err += p.err;
        queue.push(std::move(p));
    }

    int panels = static_cast<int>(queue.size());
    while (err > std::max(abs_tol, rel_tol * value_norm(sum))) {
        if (panels >= max_panels) fail(ErrorKind::numerical, "adaptive quadrature did not converge");
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left = eval(worst.lo, mid), right = eval(mid, worst.hi);
        sum = sum - worst.value + left.value + right.value;
        err += left.err + right.err - worst.err;
        queue.push(std::move(left));
        queue.push(std::move(right));
        ++panels;
    }

    // Final reduction in panel order so the result does not depend on queue history.
    std::vector<Panel> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.lo < q.lo; });
    T out = all.front().value;
    for (std::size_t i = 1; i < all.size(); ++i) out = out + all[i].value;
    return out;
}

}  // namespace feshbach::quad
