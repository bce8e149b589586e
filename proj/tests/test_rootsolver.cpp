#include "feshbach/friedrichs.hpp"
#include "feshbach/rootsolver.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace feshbach;

namespace {

SpectralModel closed_form(double b = 0.2) { return friedrichs::to_model({1.0, 0.0, b}); }

Contour semicircle(const SpectralModel& m, int l) { return make_contour(m, l, ContourKind::semicircle, 1.0); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::invalid_input;
}

}  // namespace

TEST(Transformator, ZeroCoupling) {
    const auto m = closed_form(0.0);
    EXPECT_EQ(oracle::norm2(transformator(m, semicircle(m, 1), CMatrix::Constant(1, 1, cplx{0.1, 0.1}))), 0.0);
}

TEST(Transformator, ScalarLogRatio) {
    const auto m = closed_form();
    for (int l : {1, -1}) {
        const auto c = semicircle(m, l);
        // outside the lens: physical value; inside: shifted by -2 pi i l b^2
        const cplx out{0.1, -0.3 * l}, in{0.1, 0.3 * l};
        const auto log_ratio = [](cplx z) { return 0.04 * std::log((1.0 - z) / (-1.0 - z)); };
        EXPECT_LT(std::abs(transformator(m, c, CMatrix::Constant(1, 1, out))(0, 0) - log_ratio(out)), 1e-12);
        EXPECT_LT(std::abs(transformator(m, c, CMatrix::Constant(1, 1, in))(0, 0) -
                           (log_ratio(in) - 2.0 * oracle::pi * oracle::I * 0.04 * double(l))),
                  1e-12);
    }
}

TEST(Transformator, MatrixArgumentMatchesPathOracle) {
    const auto rm = oracle::random_feshbach(21).model;
    std::mt19937_64 rng(5);
    for (int l : {1, -1}) {
        const auto c = semicircle(rm, l);
        const CMatrix z = rm.a1 + 0.05 * oracle::random_matrix(rng, 2, 2, false);
        const double r = 1.0;
        auto g = [&](double s) { return std::polar(r, oracle::pi * (1.0 - s) * (l > 0 ? 1.0 : -1.0)); };
        auto dg = [&](double s) { return -oracle::I * oracle::pi * double(l) * std::polar(r, oracle::pi * (1.0 - s) * l); };
        const CMatrix ref = oracle::path_integral(
            [&](cplx mu) -> CMatrix {
                return oracle::kprime(rm, mu) * (mu * CMatrix::Identity(2, 2) - z).inverse();
            },
            g, dg, 200000);
        EXPECT_LT(oracle::norm2(transformator(rm, c, z) - ref), 1e-10);
    }
}

TEST(Transformator, RefusesSpectrumOnTheContour) {
    const auto m = closed_form();
    EXPECT_THROW(transformator(m, semicircle(m, 1), CMatrix::Constant(1, 1, std::polar(1.0, 0.7))), Error);
}

TEST(SolveBasic, ZeroCouplingScaleGivesA1) {
    const auto m = oracle::random_feshbach(3).model;
    const auto s = solve_basic(m, semicircle(m, 1), 0.0);
    EXPECT_EQ(s.iterations, 1);
    EXPECT_EQ(oracle::norm2(s.x), 0.0);
    EXPECT_LT(oracle::norm2(s.z_op - m.a1), 1e-15);
}

TEST(SolveBasic, ClosedFormRoots) {
    const auto m = closed_form();
    const double y = oracle::friedrichs_y(1.0, 0.2);
    EXPECT_NEAR(y, 0.1164, 1e-4);
    for (int l : {1, -1}) {
        const auto s = solve_basic(m, semicircle(m, l));
        EXPECT_LT(std::abs(s.z_op(0, 0) - cplx{0.0, -l * y}), 1e-9);
        EXPECT_LE(oracle::norm2(s.x), s.r_min + 1e-9);
        EXPECT_LE(s.residual, 1e-12);
        EXPECT_LT(s.final_step_norm, 1e-12);
        // geometric convergence
        for (std::size_t k = 2; k < s.step_norms.size(); ++k) EXPECT_LT(s.step_norms[k], s.step_norms[k - 1]);
    }
}

TEST(SolveBasic, SecondOrderPicardAgreement) {
    // b = eps I: one Picard step X1 = eps^2 sum_i P_i (log((1 - s_i)/(1 + s_i)) - i pi l) agrees to O(eps^4)
    CMatrix a1(2, 2);
    a1 << -0.1, 0.05, 0.05, 0.2;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a1);
    auto err = [&](double eps, int l) {
        const auto m = build_model({-1, 1}, a1, MatrixPolynomial::constant(eps * CMatrix::Identity(2, 2)));
        const auto s = solve_basic(m, semicircle(m, l));
        CMatrix x1 = CMatrix::Zero(2, 2);
        for (int i = 0; i < 2; ++i) {
            const double si = es.eigenvalues()(i);
            const CVector v = es.eigenvectors().col(i);
            x1 += eps * eps * (std::log((1.0 - si) / (1.0 + si)) - oracle::I * oracle::pi * double(l)) * v * v.adjoint();
        }
        return oracle::norm2(s.x - x1);
    };
    for (int l : {1, -1}) {
        const double e1 = err(0.1, l), e2 = err(0.05, l);
        EXPECT_GT(e2 / e1, 1.0 / 20.0);
        EXPECT_LT(e2 / e1, 1.0 / 12.0);
        EXPECT_LT(e1, 1e-3);
    }
}

TEST(SolveBasic, ContourIndependence) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto m = oracle::random_feshbach(seed).model;
        for (int l : {1, -1}) {
            const auto a = solve_basic(m, semicircle(m, l));
            const auto b = solve_basic(m, make_contour(m, l, ContourKind::rectangle, 0.5));
            EXPECT_LT(oracle::norm2(a.x - b.x), 1e-8);
        }
    }
}

TEST(SolveBasic, ConjugateSymmetryOnRealModels) {
    for (std::uint64_t seed : {4u, 5u}) {
        const auto m = oracle::random_feshbach(seed).model;
        const auto p = solve_basic(m, semicircle(m, 1)), q = solve_basic(m, semicircle(m, -1));
        EXPECT_LT(oracle::norm2(q.x - p.x.conjugate()), 1e-12);
        // the Hermitian adjoint coincides only when the data commute
        EXPECT_GT(oracle::norm2(q.x - p.x.adjoint()), 1e-6);
    }
    const auto m = closed_form();
    const auto p = solve_basic(m, semicircle(m, 1)), q = solve_basic(m, semicircle(m, -1));
    EXPECT_LT(oracle::norm2(q.x - p.x.adjoint()), 1e-12);
    CMatrix a1 = CMatrix::Zero(2, 2);
    a1(0, 0) = -0.2;
    a1(1, 1) = 0.3;
    const auto d = build_model({-1, 1}, a1, MatrixPolynomial::constant(0.15 * CMatrix::Identity(2, 2)));
    const auto pd = solve_basic(d, semicircle(d, 1)), qd = solve_basic(d, semicircle(d, -1));
    EXPECT_LT(oracle::norm2(qd.x - pd.x.adjoint()), 1e-12);
}

TEST(SolveBasic, Errors) {
    const auto bad = closed_form(std::sqrt(0.1));
    EXPECT_EQ(kind_of([&] { solve_basic(bad, semicircle(bad, 1)); }), ErrorKind::inadmissible);
    const auto m = closed_form();
    EXPECT_EQ(kind_of([&] { solve_basic(m, semicircle(m, 1), 1.0, SolverOptions{1e-12, 2}); }), ErrorKind::numerical);
    EXPECT_EQ(kind_of([&] { solve_basic(m, semicircle(m, 1), 1.5); }), ErrorKind::invalid_input);
    // coupling scale shrinks V0 by t^2, so the beyond-contraction model is solvable at small t
    EXPECT_NO_THROW(solve_basic(bad, semicircle(bad, 1), 0.5));
}

TEST(SolveBasic, WarmStartReachesSameRoot) {
    const auto m = oracle::random_feshbach(8).model;
    const auto c = semicircle(m, -1);
    const auto cold = solve_basic(m, c);
    const auto warm = solve_basic(m, c, 1.0, cold.x + 1e-3 * CMatrix::Identity(2, 2));
    EXPECT_LT(oracle::norm2(cold.x - warm.x), 1e-11);
}

TEST(Classify, ClosedFormPhysicalComplex) {
    const auto m = closed_form();
    const double y = oracle::friedrichs_y(1.0, 0.2);
    const auto cl = classify(m, solve_basic(m, semicircle(m, 1)));
    ASSERT_EQ(cl.entries.size(), 1u);
    EXPECT_LT(std::abs(cl.entries[0].eigenvalue - cplx{0.0, -y}), 1e-9);
    EXPECT_EQ(cl.entries[0].label, SpectralLabel::physical_complex);
    EXPECT_TRUE(cl.entries[0].verified);
    EXPECT_EQ(to_string(cl.entries[0].label), "physical-complex");
}

TEST(Classify, ZeroScaleAllReal) {
    const auto m = oracle::random_feshbach(2).model;
    const auto cl = classify(m, solve_basic(m, semicircle(m, 1), 0.0));
    EXPECT_EQ(cl.count(SpectralLabel::real), 2);
}

TEST(Classify, FeshbachModelsHaveNoRealOrResonance) {
    for (std::uint64_t seed = 30; seed < 36; ++seed) {
        const auto m = oracle::random_feshbach(seed).model;
        for (int l : {1, -1}) {
            const auto cl = classify(m, solve_basic(m, semicircle(m, l)));
            EXPECT_EQ(cl.count(SpectralLabel::real), 0);
            EXPECT_EQ(cl.count(SpectralLabel::resonance), 0);
            for (const auto& e : cl.entries) EXPECT_TRUE(e.verified);
        }
    }
}

TEST(Classify, LabelRule) {
    EXPECT_EQ(label_for({0.0, 1e-9}, 1, 1e-8), SpectralLabel::real);
    EXPECT_EQ(label_for({0.0, 1e-3}, 1, 1e-8), SpectralLabel::resonance);
    EXPECT_EQ(label_for({0.0, -1e-3}, 1, 1e-8), SpectralLabel::physical_complex);
    EXPECT_EQ(label_for({0.0, -1e-3}, -1, 1e-8), SpectralLabel::resonance);
}

TEST(Classify, EigenvalueOutsideIntervalStaysReal) {
    // not a Feshbach model: W1 is Hermitian on the real axis off the cut
    const auto m = build_model({-1, 1}, CMatrix::Constant(1, 1, 1.5), MatrixPolynomial::constant(CMatrix::Constant(1, 1, 0.1)));
    EXPECT_FALSE(m.feshbach);
    for (int l : {1, -1}) {
        const auto s = solve_basic(m, semicircle(m, l));
        const auto cl = classify(m, s);
        EXPECT_EQ(cl.count(SpectralLabel::real), 1);
        const double ref = oracle::bisect([](double x) { return 1.5 - x + 0.01 * std::log((x - 1.0) / (x + 1.0)); }, 1.2, 1.5);
        EXPECT_NEAR(s.z_op(0, 0).real(), ref, 1e-10);
    }
}

TEST(Classify, ClustersRepeatedEigenvalues) {
    const auto m = build_model({-1, 1}, CMatrix::Zero(2, 2), MatrixPolynomial::constant(0.1 * CMatrix::Identity(2, 2)));
    const auto cl = classify(m, solve_basic(m, semicircle(m, 1)));
    ASSERT_EQ(cl.entries.size(), 1u);
    EXPECT_EQ(cl.entries[0].multiplicity, 2);
}

TEST(Homotopy, ZeroGridStartsAtSigma1) {
    const auto m = oracle::random_feshbach(9).model;
    const auto p = homotopy_path(m, semicircle(m, 1), {0.0});
    ASSERT_EQ(p.points.size(), 1u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(p.points[0].eigenvalues[k].imag(), 0.0);
        EXPECT_NEAR(p.points[0].eigenvalues[k].real(), m.sigma1(k), 1e-15);
    }
}

TEST(Homotopy, ClosedFormTracksScaledOracle) {
    const auto m = closed_form();
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(0.05 * k);
    const auto p = homotopy_path(m, semicircle(m, 1), grid);
    EXPECT_TRUE(p.continuous);
    EXPECT_FALSE(p.crosses_real_band);
    double prev = -1.0;
    for (const auto& pt : p.points) {
        const cplx ev = pt.eigenvalues[0];
        if (pt.t > 0) EXPECT_LT(std::abs(ev - cplx{0.0, -oracle::friedrichs_y(1.0, 0.2 * pt.t)}), 1e-8) << pt.t;
        EXPECT_GT(std::abs(ev.imag()), prev);
        prev = std::abs(ev.imag());
    }
}

TEST(Homotopy, FeshbachTrajectoriesStayOffTheAxis) {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(0.1 * k);
    for (std::uint64_t seed : {40u, 41u, 42u}) {
        const auto m = oracle::random_feshbach(seed).model;
        for (int l : {1, -1}) {
            const auto p = homotopy_path(m, semicircle(m, l), grid);
            EXPECT_TRUE(p.continuous);
            EXPECT_FALSE(p.crosses_real_band);
            for (std::size_t i = 1; i < p.points.size(); ++i)
                for (cplx e : p.points[i].eigenvalues) EXPECT_LT(l * e.imag(), 0.0);
        }
    }
}

TEST(Homotopy, RejectsBadGrids) {
    const auto m = closed_form();
    EXPECT_THROW(homotopy_path(m, semicircle(m, 1), {}), Error);
    EXPECT_THROW(homotopy_path(m, semicircle(m, 1), {0.5, 0.2}), Error);
    EXPECT_THROW(homotopy_path(m, semicircle(m, 1), {0.5, 1.2}), Error);
}
