#include "oracles.hpp"

#include "p2p/demos.hpp"
#include "p2p/timeint.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace p2p;

namespace {

ProblemState acfold_at(double lam, int nx, int ny)
{
    DemoOptions o;
    o.mesh = MeshSpec{1.0, 0.9, nx, ny, "rect"};
    o.par[1] = lam;
    return make_demo("acfold", o);
}

} // namespace

TEST(Tints, MatchesFullPathIntegrator)
{
    ProblemState a = acfold_at(2.0, 16, 14);
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    for (int i = 0; i < a.nu; ++i)
        a.u[i] = d(gen);
    ProblemState b = a;
    const TimeSeries ta = tint(a, 0.01, 100);
    const TimeSeries tb = tints(b, 0.01, 100);
    EXPECT_EQ(ta.steps, 100);
    EXPECT_EQ(ta.factorizations, 100);
    EXPECT_EQ(tb.factorizations, 1);
    const Vec ua = a.pde(a.u), ub = b.pde(b.u);
    EXPECT_LE((ua - ub).norm(), 1e-8 * ua.norm());
}

TEST(Tints, LinearDecayMatchesEulerAmplification)
{
    // below the first bifurcation a small multiple of the first eigenmode decays
    // by (1 + dt lambda) / (1 + dt mu_1) per step, mu_1 the smallest eigenvalue
    // of (c K + Q) v = mu M v
    const double lam = 1.0, dt = 0.05;
    ProblemState p = acfold_at(lam, 12, 10);
    const Spectrum s = spectrum_near_zero(SpMat(0.25 * p.ops.K + p.ops.Q), p.ops.M, 3, 100000);
    Eigen::Index k = 0;
    s.values.real().minCoeff(&k);
    const double mu1 = s.values[k].real();
    ASSERT_GT(mu1, lam);
    Vec v = s.vectors.col(k).real();
    v *= 1e-7 / v.cwiseAbs().maxCoeff();
    p.u.head(p.nu) = v;
    const int nt = 40;
    tints(p, dt, nt);
    const double factor = std::pow((1 + dt * lam) / (1 + dt * mu1), nt);
    EXPECT_LT((p.pde(p.u) - factor * v).norm(), 1e-6 * factor * v.norm());
    EXPECT_LT(factor, 0.5);
}

TEST(Tint, RecordsSeriesAndSnapshots)
{
    ProblemState p = acfold_at(1.0, 6, 6);
    p.u.head(p.nu).setConstant(0.01);
    const std::string out = testing::TempDir() + "p2p_tint";
    std::filesystem::remove_all(out);
    TintOptions o;
    o.pmod = 5;
    o.out = out;
    const TimeSeries ts = tint(p, 0.1, 20, o);
    EXPECT_EQ(ts.t.size(), 5u);
    EXPECT_NEAR(ts.t.back(), 2.0, 1e-12);
    EXPECT_LT(ts.res.back(), ts.res.front());
    EXPECT_TRUE(std::filesystem::exists(out + "/t20.dat"));
    EXPECT_TRUE(std::filesystem::exists(out + "/pre/pt0.dat"));
}

TEST(Tint, RejectsConstrainedStates)
{
    ProblemState p = make_demo("acfront", [] {
        DemoOptions o;
        o.mesh = MeshSpec{1, 0.2, 10, 1, "rect"};
        o.variant = "front";
        return o;
    }());
    EXPECT_THROW(tint(p, 0.1, 1), DomainError);
    EXPECT_THROW(tints(p, 0.1, 1), DomainError);
}

TEST(FrontOracle, ReproducesBistableSpeedFormula)
{
    for (const double mu : {0.6, 0.8, 0.9}) {
        const double c = oracle::front_speed_1d(2.0, mu);
        EXPECT_NEAR(c, oracle::front_speed_formula(2.0, mu), 0.01 * oracle::front_speed_formula(2.0, mu)) << mu;
    }
    EXPECT_LT(std::abs(oracle::front_speed_1d(2.0, 1.0)), 1e-3);
}
