#pragma once
// Reference computations for the test suites. Deliberately crude and
// independent of the library's quadrature, contour and solver code.

#include "feshbach/model.hpp"

#include <functional>
#include <random>

namespace oracle {

using feshbach::cplx;
using feshbach::CMatrix;
using feshbach::CVector;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx I{0.0, 1.0};

/// Composite Simpson on [a, b] with n (even) panels.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    using T = std::decay_t<decltype(f(a))>;
    T acc = f(a);
    acc += f(b);
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    acc *= h / 3.0;
    return acc;
}

/// Simpson along a parametrised path gamma(s), s in [0, 1]: integral of f(gamma) gamma'(s) ds.
template <class F>
CMatrix path_integral(F&& f, const std::function<cplx(double)>& gamma, const std::function<cplx(double)>& dgamma,
                      int n) {
    return simpson([&](double s) -> CMatrix { return f(gamma(s)) * dgamma(s); }, 0.0, 1.0, n);
}

/// Plain bisection for a scalar root in [lo, hi].
inline double bisect(const std::function<double(double)>& g, double lo, double hi, int iters = 200) {
    double glo = g(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm > 0) == (glo > 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// y with y = 2 b^2 arctan(alpha / y), by bisection.
inline double friedrichs_y(double alpha, double b) {
    return bisect([&](double y) { return y - 2.0 * b * b * std::atan(alpha / y); }, 1e-300, pi * b * b + 1.0);
}

/// K'(mu) = b(mu)^sharp b(mu) evaluated from raw coefficients (real-axis adjoint, analytic continuation).
inline CMatrix kprime(const std::vector<CMatrix>& coeffs, cplx mu) {
    CMatrix b = CMatrix::Zero(coeffs.front().rows(), coeffs.front().cols());
    CMatrix bs = CMatrix::Zero(coeffs.front().cols(), coeffs.front().rows());
    cplx p = 1.0;
    for (const auto& c : coeffs) {
        b += p * c;
        bs += p * c.adjoint();
        p *= mu;
    }
    return bs * b;
}

inline CMatrix kprime(const feshbach::SpectralModel& m, cplx mu) { return kprime(m.b.coefficients(), mu); }

/// W1(z) by dense Simpson on the real interval; only for z well off the axis.
inline CMatrix w1_dense(const feshbach::SpectralModel& m, cplx z, int n = 200000) {
    return simpson([&](double mu) -> CMatrix { return kprime(m, mu) / (mu - z); }, m.delta0.lo, m.delta0.hi, n);
}

/// W1 on the unphysical sheet reached from side -l: Simpson along a test-local
/// half-ellipse of half-height `depth` in the l half-plane.
inline CMatrix w1_deformed(const feshbach::SpectralModel& m, int l, double depth, cplx z, int n = 40000) {
    const double c = m.delta0.midpoint(), r = 0.5 * m.delta0.length();
    auto g = [&](double s) { const double th = pi * (1.0 - s); return cplx{c + r * std::cos(th), l * depth * std::sin(th)}; };
    auto dg = [&](double s) { const double th = pi * (1.0 - s); return cplx{r * std::sin(th) * pi, -l * depth * std::cos(th) * pi}; };
    return path_integral([&](cplx mu) -> CMatrix { return kprime(m, mu) / (mu - z); }, g, dg, n);
}

/// Boundary value W1(lambda + a i0) via subtraction of the singularity.
inline CMatrix w1_boundary(const feshbach::SpectralModel& m, double lam, int a, int n = 20000) {
    const CMatrix k0 = kprime(m, lam);
    const double lo = m.delta0.lo, hi = m.delta0.hi;
    auto f = [&](double mu) -> CMatrix {
        if (std::abs(mu - lam) < 1e-7) {
            const double h = 1e-5;  // central difference for the removable point
            return (kprime(m, lam + h) - kprime(m, lam - h)) / (2.0 * h);
        }
        return (kprime(m, mu) - k0) / (mu - lam);
    };
    CMatrix pv = simpson(f, lo, lam, n) + simpson(f, lam, hi, n);
    pv += k0 * std::log((hi - lam) / (lam - lo));
    return pv + static_cast<double>(a) * pi * I * k0;
}

/// Distance from a point to a curve by dense sampling.
inline double sampled_distance(cplx p, const std::function<cplx(double)>& curve, int n = 200000) {
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) d = std::min(d, std::abs(p - curve(double(k) / n)));
    return d;
}

inline double norm2(const CMatrix& m) { return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0); }

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, bool real = true) {
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = real ? cplx{g(rng), 0.0} : cplx{g(rng), g(rng)};
    return m;
}

/// Random Feshbach model on [-1, 1]: Hermitian a1 with spectrum in [-0.25, 0.25],
/// linear coupling b = B0 + B1 mu, scaled down until both the semicircle and the
/// depth 0.5 rectangle satisfy V0 < d^2/4 with a margin.
struct RandomModel {
    feshbach::SpectralModel model;
    std::uint64_t seed = 0;
};

inline double variation_dense(const feshbach::SpectralModel& m, int l, bool rectangle, double depth) {
    // arclength integral of ||K'|| along the test-local parametrisation
    const double lo = m.delta0.lo, hi = m.delta0.hi;
    auto nk = [&](cplx mu) { return norm2(kprime(m, mu)); };
    if (!rectangle) {
        const double c = m.delta0.midpoint(), r = 0.5 * m.delta0.length();
        return simpson([&](double th) { return nk(c + std::polar(r, l * th)) * r; }, 0.0, pi, 4000);
    }
    const double side = simpson([&](double s) { return nk(cplx{lo, l * s}); }, 0.0, depth, 2000) +
                        simpson([&](double s) { return nk(cplx{hi, l * s}); }, 0.0, depth, 2000);
    return side + simpson([&](double x) { return nk(cplx{x, l * depth}); }, lo, hi, 4000);
}

inline double distance_dense(const feshbach::SpectralModel& m, bool rectangle, double depth) {
    const double lo = m.delta0.lo, hi = m.delta0.hi, c = m.delta0.midpoint(), r = 0.5 * m.delta0.length();
    std::function<cplx(double)> curve;
    if (rectangle)
        curve = [=](double s) {
            const double total = 2 * depth + (hi - lo);
            double t = s * total;
            if (t < depth) return cplx{lo, t};
            t -= depth;
            if (t < hi - lo) return cplx{lo + t, depth};
            return cplx{hi, depth - (t - (hi - lo))};
        };
    else
        curve = [=](double s) { return c + std::polar(r, pi * s); };
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m.sigma1.size(); ++i) d = std::min(d, sampled_distance(m.sigma1(i), curve, 20000));
    return d;
}

inline RandomModel random_feshbach(std::uint64_t seed, Eigen::Index n = 2, Eigen::Index m = 2, bool real = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    const CMatrix q = random_matrix(rng, n, n, real).householderQr().householderQ();
    CVector ev(n);
    for (Eigen::Index i = 0; i < n; ++i) ev(i) = u(rng);
    CMatrix a1 = q * ev.asDiagonal() * q.adjoint();
    a1 = 0.5 * (a1 + a1.adjoint()).eval();
    if (real) a1 = a1.real().cast<cplx>();
    CMatrix e = CMatrix::Identity(m, n);
    const CMatrix r0 = random_matrix(rng, m, n, real), r1 = random_matrix(rng, m, n, real);
    double s = 0.12;
    for (;;) {
        const CMatrix b0 = s * (e + 0.3 * r0), b1 = 0.3 * s * r1;
        auto model = feshbach::build_model({-1.0, 1.0}, a1, feshbach::MatrixPolynomial(m, n, {b0, b1}));
        bool ok = true;
        for (int l : {1, -1}) {
            for (bool rect : {false, true}) {
                const double d = distance_dense(model, rect, 0.5);
                ok = ok && variation_dense(model, l, rect, 0.5) < 0.2 * d * d;
            }
        }
        if (ok) return {model, seed};
        s *= 0.8;
    }
}

}  // namespace oracle
