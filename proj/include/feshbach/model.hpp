#pragma once

#include "feshbach/core.hpp"

#include <optional>

namespace feshbach {

/// Matrix-valued polynomial  p(mu) = sum_k C_k mu^k  with C_k of shape rows x cols.
class MatrixPolynomial {
public:
    MatrixPolynomial() = default;

    MatrixPolynomial(Eigen::Index rows, Eigen::Index cols, std::vector<CMatrix> coefficients)
        : rows_(rows), cols_(cols), coeffs_(std::move(coefficients)) {
        require(rows > 0 && cols > 0, "MatrixPolynomial: shape must be positive");
        if (coeffs_.empty()) coeffs_.push_back(CMatrix::Zero(rows, cols));
        for (const auto& c : coeffs_)
            require(c.rows() == rows && c.cols() == cols,
                    "MatrixPolynomial: coefficient shape does not match declared shape");
    }

    static MatrixPolynomial constant(const CMatrix& c) { return {c.rows(), c.cols(), {c}}; }

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    const std::vector<CMatrix>& coefficients() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const CMatrix& c) { return c.isZero(0.0); });
    }

    bool has_real_coefficients() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const CMatrix& c) { return c.imag().isZero(0.0); });
    }

    /// Horner evaluation.
    CMatrix operator()(cplx mu) const {
        CMatrix acc = coeffs_.back();
        for (auto k = coeffs_.size() - 1; k-- > 0;) acc = acc * mu + coeffs_[k];
        return acc;
    }

    /// Coefficient-wise adjoint: p#(mu) = (p(conj mu))*.
    MatrixPolynomial sharp() const {
        std::vector<CMatrix> c;
        c.reserve(coeffs_.size());
        for (const auto& m : coeffs_) c.push_back(m.adjoint());
        return {cols_, rows_, std::move(c)};
    }

    MatrixPolynomial scaled(double s) const {
        std::vector<CMatrix> c;
        for (const auto& m : coeffs_) c.push_back(s * m);
        return {rows_, cols_, std::move(c)};
    }

    friend MatrixPolynomial operator*(const MatrixPolynomial& p, const MatrixPolynomial& q) {
        require(p.cols_ == q.rows_, "MatrixPolynomial product: inner dimensions differ");
        std::vector<CMatrix> c(p.coeffs_.size() + q.coeffs_.size() - 1, CMatrix::Zero(p.rows_, q.cols_));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
        return {p.rows_, q.cols_, std::move(c)};
    }

    /// Integral of p over [a, x] by the exact antiderivative.
    CMatrix integral(double a, double x) const {
        CMatrix acc = CMatrix::Zero(rows_, cols_);
        double pa = a, px = x;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            acc += coeffs_[k] * ((px - pa) / static_cast<double>(k + 1));
            pa *= a;
            px *= x;
        }
        return acc;
    }

private:
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    std::vector<CMatrix> coeffs_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool interior(double x) const { return x > lo && x < hi; }
};

/// The continued coupling density  K'_B(mu) = b#(mu) b(mu)  (n x n, entire).
struct CouplingDensity {
    MatrixPolynomial kprime;
    CMatrix operator()(cplx mu) const { return kprime(mu); }
};

/// Block operator model in the multiplication realization: A0 is multiplication
/// by mu on L2(delta0; C^m), A1 is a Hermitian n x n matrix and B is
/// multiplication by the m x n polynomial b(mu).
struct SpectralModel {
    Interval delta0;
    CMatrix a1;
    MatrixPolynomial b;
    RVector sigma1;      ///< eigenvalues of a1, ascending
    bool feshbach = false;
    CouplingDensity density;

    Eigen::Index dim() const { return a1.rows(); }
    CMatrix kprime(cplx mu) const { return density(mu); }
    bool zero_coupling() const { return b.is_zero(); }
    double scale() const { return 1.0 + norm2(a1); }
};

inline CouplingDensity kprime_of(const SpectralModel& model) { return {model.b.sharp() * model.b}; }

inline SpectralModel build_model(Interval delta0, const CMatrix& a1, const MatrixPolynomial& b) {
    require(std::isfinite(delta0.lo) && std::isfinite(delta0.hi), "build_model: interval must be finite");
    require(delta0.lo < delta0.hi, "build_model: degenerate interval");
    require(a1.rows() > 0 && a1.rows() == a1.cols(), "build_model: a1 must be square");
    require(b.cols() == a1.rows(), "build_model: coupling columns must equal dim(a1)");
    require(a1.allFinite(), "build_model: a1 has non-finite entries");
    for (const auto& c : b.coefficients()) require(c.allFinite(), "build_model: coupling has non-finite entries");
    const double skew = norm2(a1 - a1.adjoint());
    require(skew <= 1e-12 * norm2(a1), "build_model: a1 is not Hermitian");

    SpectralModel m;
    m.delta0 = delta0;
    m.a1 = hermitian_part(a1);
    m.b = b;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.a1, Eigen::EigenvaluesOnly);
    m.sigma1 = es.eigenvalues();
    m.feshbach = std::all_of(m.sigma1.data(), m.sigma1.data() + m.sigma1.size(),
                             [&](double s) { return delta0.interior(s); });
    m.density = kprime_of(m);
    return m;
}

/// K_B(mu) = int_{lo}^{mu} K'_B(nu) dnu.
inline CMatrix kb_cumulative(const SpectralModel& model, double mu) {
    require(model.delta0.contains(mu), "kb_cumulative: mu outside delta0");
    return model.density.kprime.integral(model.delta0.lo, mu);
}

struct SemiboundedVerdict {
    bool pass = false;
    double min_eigenvalue = 0.0;
    double argmin = 0.0;
};

/// Checks lambda_min(K'_B(mu)) >= c0 at every sample point.
inline SemiboundedVerdict check_semibounded_density(const SpectralModel& model, const std::vector<double>& region,
                                                    double c0) {
    require(!region.empty(), "check_semibounded_density: empty region");
    require(c0 > 0.0, "check_semibounded_density: c0 must be positive");
    SemiboundedVerdict v{true, std::numeric_limits<double>::infinity(), region.front()};
    for (double mu : region) {
        require(model.delta0.contains(mu), "check_semibounded_density: sample outside delta0");
        const double lmin = min_hermitian_eigenvalue(model.kprime(mu));
        if (lmin < v.min_eigenvalue) {
            v.min_eigenvalue = lmin;
            v.argmin = mu;
        }
    }
    v.pass = v.min_eigenvalue >= c0;
    return v;
}

/// Uniform grid on delta0 intersected with the closed r-neighbourhood of sigma1
/// (`per_component` points on each connected piece).
inline std::vector<double> neighborhood_grid(const SpectralModel& model, double r, int per_component = 201) {
    std::vector<std::pair<double, double>> pieces;
    for (Eigen::Index i = 0; i < model.sigma1.size(); ++i) {
        const double lo = std::max(model.delta0.lo, model.sigma1(i) - r);
        const double hi = std::min(model.delta0.hi, model.sigma1(i) + r);
        if (lo > hi) continue;
        if (!pieces.empty() && lo <= pieces.back().second)
            pieces.back().second = std::max(pieces.back().second, hi);
        else
            pieces.emplace_back(lo, hi);
    }
    std::vector<double> grid;
    for (auto [lo, hi] : pieces) {
        if (hi == lo) {
            grid.push_back(lo);
            continue;
        }
        for (int k = 0; k < per_component; ++k) grid.push_back(lo + (hi - lo) * k / (per_component - 1));
    }
    return grid;
}

}  // namespace feshbach
