#include "feshbach/model.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace feshbach;

namespace {

CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

MatrixPolynomial column_one_mu() {
    // b(mu) = [[1], [mu]]
    CMatrix c0(2, 1), c1(2, 1);
    c0 << 1.0, 0.0;
    c1 << 0.0, 1.0;
    return {2, 1, {c0, c1}};
}

}  // namespace

TEST(MatrixPolynomial, HornerMatchesPowerSum) {
    std::mt19937_64 rng(3);
    std::vector<CMatrix> cs;
    for (int k = 0; k < 4; ++k) cs.push_back(oracle::random_matrix(rng, 2, 3, false));
    MatrixPolynomial p(2, 3, cs);
    const cplx mu{0.3, -1.7};
    CMatrix ref = CMatrix::Zero(2, 3);
    for (int k = 0; k < 4; ++k) ref += cs[k] * std::pow(mu, k);
    EXPECT_LT(oracle::norm2(p(mu) - ref), 1e-13);
    EXPECT_EQ(p.degree(), 3u);
}

TEST(MatrixPolynomial, RejectsMismatchedShapes) {
    EXPECT_THROW(MatrixPolynomial(2, 2, {CMatrix::Zero(2, 2), CMatrix::Zero(2, 1)}), Error);
    EXPECT_THROW(MatrixPolynomial(0, 2, {}), Error);
}

TEST(BuildModel, ClosedFormExampleIsFeshbach) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.2)));
    EXPECT_TRUE(m.feshbach);
    ASSERT_EQ(m.sigma1.size(), 1);
    EXPECT_EQ(m.sigma1(0), 0.0);
    EXPECT_FALSE(m.zero_coupling());
}

TEST(BuildModel, ZeroCoupling) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.0)));
    EXPECT_TRUE(m.zero_coupling());
}

TEST(BuildModel, EigenvalueOutsideIntervalIsNotFeshbach) {
    const auto m = build_model({-1, 1}, scalar(2.0), MatrixPolynomial::constant(scalar(0.2)));
    EXPECT_FALSE(m.feshbach);
    // endpoints are not interior
    EXPECT_FALSE(build_model({-1, 1}, scalar(1.0), MatrixPolynomial::constant(scalar(0.2))).feshbach);
}

TEST(BuildModel, RejectsBadInput) {
    CMatrix a(2, 2);
    a << 0.0, 1.0, 0.5, 0.0;
    EXPECT_THROW(build_model({-1, 1}, a, MatrixPolynomial::constant(CMatrix::Zero(1, 2))), Error);
    EXPECT_THROW(build_model({1, -1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.1))), Error);
    EXPECT_THROW(build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(CMatrix::Zero(1, 2))), Error);
    EXPECT_THROW(build_model({-1, 1}, scalar(std::nan("")), MatrixPolynomial::constant(scalar(0.1))), Error);
}

TEST(Density, ClosedFormIsConstant) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.2)));
    for (double mu : {-0.9, 0.0, 0.4}) EXPECT_NEAR(std::abs(m.kprime(mu)(0, 0) - 0.04), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m.kprime(cplx{0.3, 2.0})(0, 0) - 0.04), 0.0, 1e-15);
}

TEST(Density, ImaginaryCoefficientGivesMuSquared) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial(1, 1, {scalar(0.0), scalar(I)}));
    for (cplx mu : {cplx{0.5, 0.0}, cplx{0.2, 0.7}, cplx{-1.0, -0.3}})
        EXPECT_LT(std::abs(m.kprime(mu)(0, 0) - mu * mu), 1e-14);
}

TEST(Density, ColumnModelMatchesDenseSampling) {
    const auto m = build_model({-1, 1}, scalar(0.0), column_one_mu());
    for (int k = 0; k <= 100; ++k) {
        const double mu = -1.0 + 0.02 * k;
        const CMatrix bm = m.b(mu);
        const CMatrix ref = bm.adjoint() * bm;
        EXPECT_LT(std::abs(m.kprime(mu)(0, 0) - (1.0 + mu * mu)), 1e-14);
        EXPECT_LT(oracle::norm2(m.kprime(mu) - ref), 1e-12 * (1.0 + oracle::norm2(ref)));
    }
}

TEST(Density, HermitianPsdOnRealAxisAndReflection) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
        std::mt19937_64 rng(s);
        const auto m = build_model({-1, 1}, CMatrix::Identity(3, 3) * 0.1,
                                   MatrixPolynomial(2, 3, {oracle::random_matrix(rng, 2, 3, false),
                                                           oracle::random_matrix(rng, 2, 3, false),
                                                           oracle::random_matrix(rng, 2, 3, false)}));
        for (double mu : {-0.8, 0.1, 0.77}) {
            const CMatrix k = m.kprime(mu);
            EXPECT_LT(oracle::norm2(k - k.adjoint()), 1e-12 * oracle::norm2(k));
            EXPECT_GT(min_hermitian_eigenvalue(k), -1e-12 * oracle::norm2(k));
        }
        const cplx z{0.3, 0.8};
        EXPECT_LT(oracle::norm2(m.kprime(z).adjoint() - m.kprime(std::conj(z))), 1e-12);
        EXPECT_LT(oracle::norm2(m.kprime(z) - oracle::kprime(m, z)), 1e-12);
    }
}

TEST(Cumulative, ClosedFormIsLinear) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.2)));
    for (double mu : {-1.0, -0.2, 0.6, 1.0}) EXPECT_NEAR(kb_cumulative(m, mu)(0, 0).real(), 0.04 * (mu + 1.0), 1e-15);
    EXPECT_THROW(kb_cumulative(m, 1.5), Error);
}

TEST(Cumulative, ColumnModelEightThirds) {
    const auto m = build_model({-1, 1}, scalar(0.0), column_one_mu());
    const double v = kb_cumulative(m, 1.0)(0, 0).real();
    EXPECT_NEAR(v, 8.0 / 3.0, 1e-14);
    const double q = oracle::simpson([&](double mu) { return 1.0 + mu * mu; }, -1.0, 1.0, 1000);
    EXPECT_NEAR(v, q, 1e-12);
    EXPECT_LT(oracle::norm2(kb_cumulative(m, -1.0)), 1e-15);
}

TEST(Semibounded, ClosedFormPassesWithBSquared) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.2)));
    const auto v = check_semibounded_density(m, neighborhood_grid(m, 0.3), 0.01);
    EXPECT_TRUE(v.pass);
    EXPECT_NEAR(v.min_eigenvalue, 0.04, 1e-15);
}

TEST(Semibounded, ZeroCouplingFails) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial::constant(scalar(0.0)));
    EXPECT_FALSE(check_semibounded_density(m, neighborhood_grid(m, 0.3), 1e-12).pass);
}

TEST(Semibounded, VanishingDensityFails) {
    const auto m = build_model({-1, 1}, scalar(0.0), MatrixPolynomial(1, 1, {scalar(0.0), scalar(1.0)}));
    const auto v = check_semibounded_density(m, neighborhood_grid(m, 0.25), 1e-12);
    EXPECT_FALSE(v.pass);
    EXPECT_NEAR(v.argmin, 0.0, 1e-15);
}

TEST(NeighborhoodGrid, MergesOverlappingPieces) {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = -0.1;
    a(1, 1) = 0.1;
    const auto m = build_model({-1, 1}, a, MatrixPolynomial::constant(CMatrix::Identity(2, 2)));
    const auto g = neighborhood_grid(m, 0.2, 11);
    ASSERT_EQ(g.size(), 11u);
    EXPECT_NEAR(g.front(), -0.3, 1e-15);
    EXPECT_NEAR(g.back(), 0.3, 1e-15);
    EXPECT_EQ(neighborhood_grid(m, 0.05, 11).size(), 22u);
}
