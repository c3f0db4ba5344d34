#include "p2p/demos.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace p2p;

namespace {

DemoOptions mesh(double lx, double ly, int nx, int ny, const std::string& map = "rect")
{
    DemoOptions o;
    o.mesh = MeshSpec{lx, ly, nx, ny, map};
    return o;
}

Vec random_vec(Eigen::Index n, unsigned seed, double lo, double hi)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = d(gen);
    return v;
}

double inf_norm(const Vec& v)
{
    return v.cwiseAbs().maxCoeff();
}

} // namespace

TEST(Registry, NamesAndErrors)
{
    EXPECT_EQ(demo_names().size(), 5u);
    EXPECT_THROW(make_demo("fCH"), DomainError);
    DemoOptions o = mesh(1, 1, 4, 4);
    o.par[7] = 1;
    EXPECT_THROW(make_demo("acfold", o), DomainError);
    DemoOptions c = mesh(1, 1, 4, 4);
    c.nc["nonsense"] = 1;
    EXPECT_THROW(make_demo("acfold", c), DomainError);
}

TEST(Registry, ShippedConfigsBuild)
{
    for (const std::string& name : demo_names()) {
        const DemoOptions o = load_demo_config(std::string(P2P_SOURCE_DIR) + "/configs/" + name + ".json");
        ProblemState p = make_demo(name, o);
        EXPECT_GT(p.nu, 0) << name;
        EXPECT_NO_THROW(p.check()) << name;
    }
    EXPECT_THROW(load_demo_config("/nonexistent/config.json"), FormatError);
}

TEST(Acfold, ResidualFormula)
{
    ProblemState p = make_demo("acfold", mesh(1, 0.9, 10, 9));
    const Vec u = random_vec(p.nu, 1, -1, 1);
    const Vec par = p.par();
    const Eigen::ArrayXd a = u.array();
    const Vec f = (par[0] * a + a.cube() - par[2] * a.pow(5)).matrix();
    const Vec expected = par[1] * (p.ops.K * u) + p.ops.Q * u - p.ops.M * f;
    EXPECT_LT(inf_norm(pde_residual(p, u, par) - expected), 1e-12);
    EXPECT_EQ(inf_norm(pde_residual(p, Vec::Zero(p.nu), par)), 0.0);
}

TEST(Schnakenberg, HomogeneousStateAndTuringWavenumber)
{
    EXPECT_NEAR(schnak_kc(), std::sqrt(std::sqrt(2.0) - 1), 1e-15);
    ProblemState p = make_demo("schnak", mesh(0.1, 2, 2, 20));
    for (const double lam : {2.5, 3.2085, 4.0}) {
        Vec U = p.u;
        U.head(p.nu / 2).setConstant(lam);
        U.segment(p.nu / 2, p.nu / 2).setConstant(1 / lam);
        U[p.nu] = lam;
        EXPECT_LT(inf_norm(residual(p, U)), 1e-13) << lam;
    }
    // default mesh: quasi-1D with ly = pi / kc
    const ProblemState d = make_demo("schnak");
    EXPECT_NEAR(d.mesh.ly, std::numbers::pi / schnak_kc(), 1e-15);
}

TEST(Bratu, ConstantStatesSolveScalarEquation)
{
    ProblemState p = make_demo("bratu", mesh(0.5, 0.25, 8, 4));
    for (const double u : {0.2, 1.0, 2.5}) {
        Vec U = p.u;
        U.head(p.nu).setConstant(u);
        U[p.nu] = u * std::exp(-u);
        EXPECT_LT(inf_norm(residual(p, U)), 1e-13) << u;
    }
}

TEST(Nlbc, TrivialAndUnitStatesForAllLambda)
{
    ProblemState p = make_demo("nlbc", mesh(1, 1, 12, 12, "disk"));
    for (const double lam : {-1.0, 0.0, 0.3, 0.62, 1.7, 2.9}) {
        Vec U = p.u;
        U[p.nu] = lam;
        U.head(p.nu).setZero();
        EXPECT_EQ(inf_norm(residual(p, U)), 0.0) << lam;
        U.head(p.nu).setOnes();
        EXPECT_LE(inf_norm(residual(p, U)), 1e-14) << lam;
    }
}

TEST(SecondDerivative, AnalyticMatchesDifferences)
{
    const std::vector<std::pair<std::string, DemoOptions>> cases = {
        {"acfold", mesh(1, 0.9, 10, 9)},
        {"schnak", mesh(0.1, 2, 2, 20)},
        {"bratu", mesh(0.5, 0.25, 8, 4)},
        {"acfront", mesh(1, 0.2, 20, 2)},
    };
    for (const auto& [name, opt] : cases) {
        ProblemState p = make_demo(name, opt);
        // relative perturbation keeps the Schnakenberg v away from 0
        Vec U = p.u;
        U.head(p.nu).array() *= 1 + random_vec(p.nu, 3, -0.2, 0.2).array();
        U.head(p.nu) += random_vec(p.nu, 6, -0.1, 0.1);
        const Vec phi = random_vec(p.nu, 4, -1, 1);
        EXPECT_LE(spjaccheck(p, U, phi).maxdiff, 1e-5) << name;
    }
}

TEST(Acfront, FreezingAddsPhaseConditionAndSpeed)
{
    ProblemState p = make_demo("acfront", mesh(1, 0.2, 20, 2));
    p.u.head(p.nu) = random_vec(p.nu, 5, 0, 1);
    acfront_freeze(p);
    EXPECT_EQ(p.nq, 1);
    EXPECT_EQ(p.ilam, (std::vector<int>{2, 3}));
    EXPECT_EQ(p.sol.ptype, -1);
    // phase condition vanishes at the reference profile
    EXPECT_EQ(residual(p, p.u)[p.nu], 0.0);
    EXPECT_LE(jaccheck(p).maxdiff, 1e-5);
    ProblemState q = make_demo("bratu", mesh(0.5, 0.25, 4, 2));
    EXPECT_THROW(acfront_freeze(q), DomainError);
}

TEST(Acfront, OrientPutsUpperStateLeft)
{
    ProblemState p = make_demo("acfront", mesh(1, 0.2, 20, 2));
    for (int i = 0; i < p.mesh.np(); ++i)
        p.u[i] = std::tanh(p.mesh.points[i][0]);
    acfront_orient(p);
    for (int i = 0; i < p.mesh.np(); ++i)
        if (p.mesh.points[i][0] == -1)
            EXPECT_GT(p.u[i], 0.5);
}

TEST(Schnakenberg, TravelStageIsPeriodicWithSpeed)
{
    ProblemState p = make_demo("schnak", mesh(0.1, 2, 2, 20));
    const int nu_full = p.nu;
    schnak_travel(p);
    EXPECT_EQ(p.nu, nu_full - 2 * 3);   // one row of three nodes per component identified
    EXPECT_EQ(p.ilam, (std::vector<int>{4, 3}));
    EXPECT_EQ(p.nq, 1);
    EXPECT_NO_THROW(p.check());
    EXPECT_LE(jaccheck(p).maxdiff, 1e-5);
}
