#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace feshbach {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    invalid_input,  ///< malformed model, shape mismatch, bad argument
    inadmissible,   ///< contraction condition V0 < d^2/4 fails
    numerical       ///< iteration or quadrature failure, violated hypothesis
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::invalid_input, what);
}

/// Spectral (operator 2-) norm.
inline double norm2(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 || m.cols() == 1) return m.norm();
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

inline double min_singular_value(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double condition_number(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// (m - m*) / (2i): the "imaginary part" of a square matrix.
inline CMatrix imaginary_part(const CMatrix& m) { return (m - m.adjoint()) / (2.0 * I); }

/// Smallest eigenvalue of the Hermitian part of m.
inline double min_hermitian_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline CVector eigenvalues(const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    return es.eigenvalues();
}

/// Inverse of (z - mu I), throwing when the shifted matrix is numerically singular.
inline CMatrix shifted_inverse(const CMatrix& z, cplx mu) {
    const auto n = z.rows();
    CMatrix shifted = z - mu * CMatrix::Identity(n, n);
    Eigen::PartialPivLU<CMatrix> lu(shifted);
    if (!(lu.rcond() > 1e-14))
        fail(ErrorKind::numerical, "resolvent is singular at a quadrature node");
    return lu.inverse();
}

/// Eigenvalues sorted by real part, then imaginary part.
inline std::vector<cplx> sorted_eigenvalues(const CMatrix& m) {
    CVector ev = eigenvalues(m);
    std::vector<cplx> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

}  // namespace feshbach
