#include "p2p/fem.hpp"
#include "p2p/linsolve.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace p2p;

namespace {

SpMat laplacian(const Mesh& m)
{
    CoeffTensors co;
    co.c = CoeffTensors::isotropic(1, {1.0});
    return assemble_interior(m, co).K;
}

} // namespace

TEST(Lss, IdentityAndMass)
{
    Vec rhs(5);
    rhs << 1, -2, 3, 0.5, 9;
    EXPECT_EQ(lss(sparse_identity(5), rhs), rhs);
    const Mesh m = build_rect_mesh(1, 1, 6, 6);
    const SpMat M = assemble_mass(m, 1);
    const Vec x = lss(M, Vec(M * Vec::Ones(m.np())));
    EXPECT_LT((x - Vec::Ones(m.np())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lss, ManufacturedSpd)
{
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> d(-1, 1);
    const int n = 100;
    Triplets t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 4.0);
        for (int k = 0; k < 3; ++k) {
            const int j = static_cast<int>(gen() % n);
            if (j == i)
                continue;
            const double v = 0.3 * d(gen);
            t.emplace_back(i, j, v);
            t.emplace_back(j, i, v);
        }
    }
    SpMat A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    Vec xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = d(gen);
    EXPECT_LT((lss(A, Vec(A * xs)) - xs).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lss, SingularThrows)
{
    SpMat A(3, 3);
    A.insert(0, 0) = 1;
    A.insert(1, 1) = 1;
    EXPECT_THROW(lss(A, Vec::Ones(3)), SingularMatrixError);
}

TEST(Blss, Decoupled)
{
    const int n = 4;
    SpMat A(n, n + 1);
    for (int i = 0; i < n; ++i)
        A.insert(i, i) = 1;
    Vec row = Vec::Zero(n + 1);
    row[n] = 1;
    Vec rhs(n);
    rhs << 1, 2, 3, 4;
    const Vec x = blss(A, row, 5, rhs);
    Vec expected(n + 1);
    expected << 1, 2, 3, 4, 5;
    EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Blss, MatchesAssembledBorderedSystem)
{
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> d(-1, 1);
    const int n = 30;
    Triplets t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 3.0);
        t.emplace_back(i, (i + 1) % (n + 1), d(gen));
        t.emplace_back(i, n, d(gen));
    }
    SpMat A(n, n + 1);
    A.setFromTriplets(t.begin(), t.end());
    Vec row(n + 1), rhs(n);
    for (int i = 0; i <= n; ++i)
        row[i] = d(gen);
    for (int i = 0; i < n; ++i)
        rhs[i] = d(gen);
    const Vec x = blss(A, row, 0.7, rhs);
    Vec full(n + 1);
    full << rhs, 0.7;
    const Vec y = lss(bordered_matrix(A, row), full);
    EXPECT_LT((x - y).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((bordered_matrix(A, row) * x - full).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Spectrum, NeumannKernel)
{
    const Mesh m = build_rect_mesh(1, 1, 8, 8);
    const Spectrum s = spectrum_near_zero(laplacian(m), assemble_mass(m, 1), 4);
    EXPECT_LT(std::abs(s.values[0]), 1e-10);
    EXPECT_EQ(s.ineg, 0);
    EXPECT_TRUE(s.certified);
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
        EXPECT_LE(std::abs(s.values[i].imag()), 1e-9 * std::max(1.0, std::abs(s.values[i])));
}

TEST(Spectrum, ArnoldiAgreesWithDense)
{
    // shifted Laplacian with a few negative eigenvalues, Dirichlet-like springs
    const Mesh m = build_rect_mesh(1, 0.9, 24, 20);
    const SpMat M = assemble_mass(m, 1);
    const BoundaryOperators bo =
        assemble_boundary(m, BCSpec::dirichlet(1, 1e3, Vec::Zero(1)), Vec::Zero(m.np()), Vec());
    const SpMat A = SpMat(0.25 * laplacian(m) + bo.Q - 3.5 * M);
    const Spectrum dense = spectrum_near_zero(A, M, 6, 100000);
    const Spectrum arnoldi = spectrum_near_zero(A, M, 6, 0);
    ASSERT_EQ(dense.values.size(), arnoldi.values.size());
    for (Eigen::Index i = 0; i < dense.values.size(); ++i)
        EXPECT_NEAR(std::abs(dense.values[i] - arnoldi.values[i]), 0.0, 1e-7 * (1 + std::abs(dense.values[i])));
    EXPECT_EQ(dense.ineg, arnoldi.ineg);
    // c*lambda_kl = 1.38, 3.23 lie below 3.5, the next one (3.66) above
    EXPECT_EQ(dense.ineg, 2);
    EXPECT_TRUE(arnoldi.certified);
}
