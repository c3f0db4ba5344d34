#include "p2p/fem.hpp"
#include "p2p/mesh.hpp"
#include "p2p/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace p2p;

namespace {

double entry_sum(const SpMat& A)
{
    double s = 0;
    for (Eigen::Index k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            s += it.value();
    return s;
}

Vec coordinate(const Mesh& m, int axis)
{
    Vec v(m.np());
    for (int i = 0; i < m.np(); ++i)
        v[i] = m.points[i][axis];
    return v;
}

bool is_boundary(const Mesh& m, int i)
{
    const auto& p = m.points[i];
    return std::abs(std::abs(p[0]) - m.lx) < 1e-12 || std::abs(std::abs(p[1]) - m.ly) < 1e-12;
}

} // namespace

TEST(Mesh, SingleCell)
{
    const Mesh m = build_rect_mesh(1, 1, 1, 1);
    EXPECT_EQ(m.np(), 4);
    EXPECT_EQ(m.nt(), 2);
    EXPECT_EQ(m.edges.size(), 4u);
    EXPECT_NEAR(m.total_area(), 4.0, 1e-14);
}

TEST(Mesh, AllenCahnCounts)
{
    const Mesh m = build_rect_mesh(1, 0.9, 60, 54);
    EXPECT_EQ(m.np(), 3355);
    EXPECT_EQ(m.nt(), 6480);
    EXPECT_NEAR(m.total_area(), 3.6, 1e-12);
    for (int t = 0; t < m.nt(); ++t)
        ASSERT_GT(m.area(t), 0);
}

TEST(Mesh, QuasiOneDimensionalStrip)
{
    const Mesh m = build_rect_mesh(0.1, 4.88, 2, 30);
    for (const auto& p : m.points) {
        const double x = p[0];
        EXPECT_TRUE(std::abs(x + 0.1) < 1e-15 || std::abs(x) < 1e-15 || std::abs(x - 0.1) < 1e-15) << x;
    }
}

TEST(Mesh, BoundaryEdgesCoverPerimeter)
{
    const Mesh m = build_rect_mesh(1.5, 0.5, 6, 4);
    double len = 0;
    for (const auto& e : m.edges) {
        const auto& a = m.points[e.nodes[0]];
        const auto& b = m.points[e.nodes[1]];
        len += std::hypot(a[0] - b[0], a[1] - b[1]);
    }
    EXPECT_NEAR(len, 2 * (3.0 + 1.0), 1e-12);
    EXPECT_EQ(static_cast<int>(m.edges.size()), 2 * (6 + 4));
}

TEST(Mesh, DiskMapKeepsBoundaryOnCircle)
{
    const Mesh m = build_mesh(MeshSpec{1, 1, 16, 16, "disk"});
    for (const auto& e : m.edges) {
        const auto& p = m.points[e.nodes[0]];
        EXPECT_NEAR(std::hypot(p[0], p[1]), 1.0, 1e-12);
    }
    EXPECT_NEAR(m.total_area(), M_PI, 0.05);
}

TEST(NodeToTriangle, ConstantAndLinear)
{
    const Mesh m = build_rect_mesh(1, 1, 3, 2);
    const Vec c = node_to_triangle(m, Vec::Constant(m.np(), 3.0), 1);
    EXPECT_TRUE((c.array() == 3.0).all());
    const Vec x = node_to_triangle(m, coordinate(m, 0), 1);
    for (int t = 0; t < m.nt(); ++t) {
        const auto& tri = m.triangles[t];
        const double cx = (m.points[tri[0]][0] + m.points[tri[1]][0] + m.points[tri[2]][0]) / 3;
        EXPECT_NEAR(x[t], cx, 1e-15);
    }
}

TEST(NodeToTriangle, RandomSingleTriangle)
{
    const Mesh m = build_rect_mesh(1, 1, 1, 1);
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> d(-1, 1);
    Vec v(4);
    for (int i = 0; i < 4; ++i)
        v[i] = d(gen);
    const Vec t = node_to_triangle(m, v, 1);
    const auto& tri = m.triangles[0];
    EXPECT_NEAR(t[0], (v[tri[0]] + v[tri[1]] + v[tri[2]]) / 3, 1e-15);
}

TEST(Mass, TotalAndBlocks)
{
    const Mesh m = build_rect_mesh(1, 0.9, 10, 9);
    const SpMat M = assemble_mass(m, 1);
    EXPECT_NEAR(entry_sum(M), 3.6, 1e-12);
    const SpMat M2 = assemble_mass(m, 2);
    const int n = m.np();
    EXPECT_EQ(M2.rows(), 2 * n);
    const Mat D = Mat(M2);
    EXPECT_EQ((D.topLeftCorner(n, n) - Mat(M)).norm(), 0.0);
    EXPECT_EQ((D.bottomRightCorner(n, n) - Mat(M)).norm(), 0.0);
    EXPECT_EQ(D.topRightCorner(n, n).norm(), 0.0);
}

TEST(Mass, ReferenceElement)
{
    // a single cell split once: the lower triangle is a scaled reference triangle
    const Mesh m = build_rect_mesh(0.5, 0.5, 1, 1);
    const SpMat M = assemble_mass(m, 1);
    const double area = 0.5;
    Mat expected = Mat::Zero(4, 4);
    for (int t = 0; t < 2; ++t) {
        const auto& tri = m.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                expected(tri[a], tri[b]) += area / 12 * (a == b ? 2 : 1);
    }
    EXPECT_LT((Mat(M) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Interior, LaplacianKernelAndSymmetry)
{
    const Mesh m = build_rect_mesh(1, 0.7, 8, 6);
    CoeffTensors co;
    co.c = CoeffTensors::isotropic(1, {1.0});
    const InteriorOperators io = assemble_interior(m, co);
    EXPECT_LT((io.K * Vec::Ones(m.np())).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT(Mat(SpMat(io.K - SpMat(io.K.transpose()))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Interior, UnitReactionIsMass)
{
    const Mesh m = build_rect_mesh(1, 1, 5, 4);
    CoeffTensors co;
    co.a = {1.0};
    const InteriorOperators io = assemble_interior(m, co);
    EXPECT_LT(Mat(SpMat(io.Ma - assemble_mass(m, 1))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Interior, AdvectionOfLinearField)
{
    // -d/dx x = -1, exact for P1 on interior rows
    const Mesh m = build_rect_mesh(1, 1, 6, 5);
    CoeffTensors co;
    co.b = {1.0, 0.0};
    const InteriorOperators io = assemble_interior(m, co);
    const Vec lhs = io.Kadv * coordinate(m, 0);
    const Vec rhs = -(assemble_mass(m, 1) * Vec::Ones(m.np()));
    for (int i = 0; i < m.np(); ++i)
        if (!is_boundary(m, i))
            EXPECT_NEAR(lhs[i], rhs[i], 1e-10 * std::abs(rhs[i]));
}

TEST(Load, ConstantAndZero)
{
    const Mesh m = build_rect_mesh(0.8, 0.6, 7, 5);
    EXPECT_NEAR(assemble_load(m, {1.0}, 1).sum(), 4 * 0.8 * 0.6, 1e-13);
    EXPECT_EQ(assemble_load(m, {0.0}, 1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Load, TriangleMeansApproachMassProduct)
{
    const Mesh m = build_rect_mesh(1, 0.9, 60, 54);
    Vec g(m.np());
    for (int i = 0; i < m.np(); ++i)
        g[i] = std::sin(2 * m.points[i][0]) * std::cos(m.points[i][1]) + 1.5;
    const Vec tri = node_to_triangle(m, g, 1);
    const Vec F = assemble_load(m, std::vector<double>(tri.data(), tri.data() + tri.size()), 1);
    const Vec MG = assemble_mass(m, 1) * g;
    EXPECT_LT((F - MG).norm() / MG.norm(), 5e-2);
}

TEST(Boundary, NeumannIsEmpty)
{
    const Mesh m = build_rect_mesh(1, 1, 4, 4);
    const BoundaryOperators bo = assemble_boundary(m, BCSpec::neumann(1), Vec::Zero(m.np()), Vec());
    EXPECT_EQ(bo.Q.nonZeros() == 0 || Mat(bo.Q).cwiseAbs().maxCoeff() == 0, true);
    EXPECT_EQ(bo.Gb.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Boundary, StiffSpringApproachesDirichlet)
{
    // -Lap u = 1 with u = 0.3 imposed by springs: boundary error shrinks with stiffness
    const Mesh m = build_rect_mesh(1, 1, 12, 12);
    CoeffTensors co;
    co.c = CoeffTensors::isotropic(1, {1.0});
    const SpMat K = assemble_interior(m, co).K;
    const Vec F = assemble_load(m, {1.0}, 1);
    double prev = INFINITY;
    for (double s : {1e3, 1e5}) {
        const BCSpec bc = BCSpec::dirichlet(1, s, Vec::Constant(1, 0.3));
        const BoundaryOperators bo = assemble_boundary(m, bc, Vec::Zero(m.np()), Vec());
        const Vec u = lss(SpMat(K + bo.Q), Vec(F + bo.Gb));
        double err = 0;
        for (int i = 0; i < m.np(); ++i)
            if (is_boundary(m, i))
                err = std::max(err, std::abs(u[i] - 0.3));
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-4);
}

TEST(Boundary, MidpointRuleForLinearWeight)
{
    // q = lambda (0.5 + x + y)(1 - u) on the bottom side only, u = 0, lambda = 1
    const Mesh m = build_rect_mesh(1, 0.5, 9, 4);
    BCSpec bc = BCSpec::neumann(1);
    bc.segments[bottom] = SegmentBC{[](const BoundaryPoint& b, const Vec& u, const Vec& par) {
                                         Mat q(1, 1);
                                         q(0, 0) = par[0] * (0.5 + b.x + b.y) * (1 - u[0]);
                                         return BcValue{q, Vec::Zero(1)};
                                     },
                                     {}};
    const BoundaryOperators bo = assemble_boundary(m, bc, Vec::Zero(m.np()), Vec::Ones(1));
    // integral over y = -0.5, x in (-1, 1) of (0.5 + x - 0.5)
    const double exact = 0.0;
    EXPECT_NEAR(entry_sum(bo.Q), exact, 1e-13);
    // weight 1 + x on the same side: integral 2
    bc.segments[bottom].value = [](const BoundaryPoint& b, const Vec&, const Vec&) {
        Mat q(1, 1);
        q(0, 0) = 1 + b.x;
        return BcValue{q, Vec::Zero(1)};
    };
    EXPECT_NEAR(entry_sum(assemble_boundary(m, bc, Vec::Zero(m.np()), Vec::Ones(1)).Q), 2.0, 1e-13);
}

TEST(Boundary, JacobianMatchesDifferences)
{
    const Mesh m = build_rect_mesh(1, 1, 5, 5);
    BCSpec bc = BCSpec::neumann(1);
    for (int s = 1; s <= 4; ++s)
        bc.segments[s] = SegmentBC{
            [](const BoundaryPoint& b, const Vec& u, const Vec& par) {
                Mat q(1, 1);
                q(0, 0) = par[0] * (0.5 + b.x + b.y) * (1 - u[0]);
                return BcValue{q, Vec::Zero(1)};
            },
            [](const BoundaryPoint& b, const Vec&, const Vec& par) {
                BcDerivative d;
                d.dq = {Mat::Constant(1, 1, -par[0] * (0.5 + b.x + b.y))};
                d.dg = Mat::Zero(1, 1);
                return d;
            }};
    Vec u(m.np());
    for (int i = 0; i < m.np(); ++i)
        u[i] = 0.3 * std::sin(1.7 * i);
    const Vec par = Vec::Constant(1, 0.8);
    auto r = [&](const Vec& v) {
        const BoundaryOperators bo = assemble_boundary(m, bc, v, par);
        return Vec(bo.Q * v - bo.Gb);
    };
    const Mat J = Mat(assemble_boundary_jacobian(m, bc, u, par));
    const double h = 1e-7;
    double worst = 0;
    for (int j = 0; j < m.np(); ++j) {
        Vec up = u;
        up[j] += h;
        worst = std::max(worst, ((r(up) - r(u)) / h - J.col(j)).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-6);
}
