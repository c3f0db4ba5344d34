#include "p2p/demos.hpp"
#include "p2p/io.hpp"
#include "p2p/spcont.hpp"
#include "p2p/switching.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace p2p;

namespace {

std::string fresh_dir(const std::string& name)
{
    const std::string d = testing::TempDir() + "p2p_sw_" + name;
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

// generalized eigenvalues of (A, M), sorted by real part
std::vector<double> sorted_spectrum(const SpMat& A, const SpMat& M, int k)
{
    const Spectrum s = spectrum_near_zero(A, M, k, 100000);
    std::vector<double> v;
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
        v.push_back(s.values[i].real());
    std::sort(v.begin(), v.end());
    return v;
}

class AcfoldLadder : public testing::Test {
protected:
    static void SetUpTestSuite()
    {
        DemoOptions o;
        o.mesh = MeshSpec{1.0, 0.9, 12, 10, "rect"};
        tr = new ProblemState(make_demo("acfold", o));
        tr->usrlam.clear();
        tr->dir = fresh_dir("acfold_tr");
        findbif(*tr, 3, 80);
    }
    static void TearDownTestSuite()
    {
        delete tr;
        tr = nullptr;
    }
    static ProblemState* tr;
};
ProblemState* AcfoldLadder::tr = nullptr;

} // namespace

TEST_F(AcfoldLadder, LocatesDiscreteEigenvalues)
{
    ASSERT_EQ(tr->sol.bcount, 3);
    // oracle: lambda is a bifurcation value where c K + Q - lambda M is singular
    const auto ev = sorted_spectrum(SpMat(0.25 * tr->ops.K + tr->ops.Q), tr->ops.M, 6);
    std::vector<double> found;
    for (const auto& r : tr->branch)
        if (r.ptype == 1)
            found.push_back(r.params[0]);
    ASSERT_EQ(found.size(), 3u);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(found[k], ev[k], 1e-3) << k;
    for (int k = 1; k <= 3; ++k)
        EXPECT_TRUE(std::filesystem::exists(tr->dir + "/bpt" + std::to_string(k) + ".dat"));
}

TEST_F(AcfoldLadder, InitialTangentOnTrivialBranch)
{
    ProblemState p = load_point(tr->dir, "pt0");
    p.tau.resize(0);
    getinitau(p);
    const int n = p.nsys();
    EXPECT_NEAR(weighted_dot(p, p.tau, p.tau), 1.0, 1e-10);
    EXPECT_LT(p.tau.head(n).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(p.tau[n], 1 / std::sqrt(product_weights(p)[n]), 1e-10);
}

TEST_F(AcfoldLadder, SwibraTangentIsOrthogonalAndOneSigned)
{
    ProblemState p = load_point(tr->dir, "bpt1");
    const Vec old = p.tau;
    swibra(p, 0.1);
    EXPECT_EQ(p.sol.ptype, -2);
    EXPECT_TRUE(p.branch.empty());
    EXPECT_LE(std::abs(weighted_dot(p, p.tau, old)), 1e-8);
    EXPECT_NEAR(weighted_dot(p, p.tau, p.tau), 1.0, 1e-10);
    // first Dirichlet mode: no sign change in the interior
    const Vec t = p.tau.head(p.nu);
    EXPECT_GE(t.minCoeff(), -1e-3 * t.maxCoeff());
}

TEST_F(AcfoldLadder, PitchforkDirectionsAreMirrorImages)
{
    ProblemState up = load_point(tr->dir, "bpt1"), down = up;
    swibra(up, 0.05);
    swibra(down, -0.05);
    ContOptions o;
    o.nsteps = 3;
    up.sw.bifcheck = down.sw.bifcheck = 0;
    cont(up, o);
    cont(down, o);
    EXPECT_NEAR(up.primary(), down.primary(), 1e-3);
    EXPECT_LT((up.pde(up.u) + down.pde(down.u)).cwiseAbs().maxCoeff(), 1e-3 * up.pde(up.u).cwiseAbs().maxCoeff());
    EXPECT_GT(up.pde(up.u).sum(), 0);
}

TEST_F(AcfoldLadder, SwibraRejectsRegularPoint)
{
    ProblemState p = load_point(tr->dir, "pt1");
    ASSERT_EQ(p.tau.size(), p.nsys() + 1);
    EXPECT_THROW(swibra(p, 0.1), DomainError);
}

TEST_F(AcfoldLadder, SpcontiniPreconditions)
{
    ProblemState reg = load_point(tr->dir, "pt1");
    EXPECT_THROW(spcontini(reg, 2), DomainError);
    ProblemState bp = load_point(tr->dir, "bpt1");
    EXPECT_THROW(spcontini(bp, 1), DomainError);   // already the primary
    EXPECT_THROW(spcontini(bp, 4), DomainError);
    EXPECT_THROW(spcontexit(bp, 1), DomainError);
    spcontini(bp, 2);
    EXPECT_TRUE(bp.extended());
    EXPECT_THROW(spcontini(bp, 3), DomainError);
    EXPECT_THROW(spcontexit(bp, 5), DomainError);
}

TEST(BratuBranchPoint, ContinuationFollowsEigenvalueCondition)
{
    DemoOptions o;
    o.mesh = MeshSpec{0.5, 0.25, 10, 4, "rect"};
    ProblemState p = make_demo("bratu", o);
    p.dir = fresh_dir("bratu_tr");
    ContOptions c;
    c.nsteps = 60;
    c.stop_after_bif = 1;
    cont(p, c);
    ASSERT_EQ(p.sol.bcount, 1);
    ProblemState b = load_point(p.dir, "bpt1");

    // oracle: at a constant state u the branch point needs d (u - 1) = mu_1,
    // mu_1 the first nonzero Neumann eigenvalue of (K, M)
    const double mu1 = sorted_spectrum(b.ops.K, b.ops.M, 3)[1];
    const double u_bp = b.u[0];
    EXPECT_NEAR(10 * (u_bp - 1), mu1, 1e-3);

    const SpcontInfo info = spcontini(b, 2);
    EXPECT_LT(info.mu1, 1e-3 * info.mu2);
    EXPECT_EQ(b.ilam, (std::vector<int>{2, 1}));
    const Vec phi = b.phi(b.u);
    EXPECT_NEAR(phi.dot(b.ops.M * phi), 1.0, 1e-12);
    EXPECT_GT((phi.array() - phi.mean()).abs().maxCoeff(), 0.1);   // a genuine cos mode, not a constant

    b.nc.ds = 0.1;
    b.nc.dsmax = 0.5;
    double worst = 0, worst_norm = 0, worst_res = 0;
    ContOptions e;
    e.nsteps = 6;
    // the pitchfork is Z2-symmetric (x -> -x), which makes the extended system
    // degenerate in the antisymmetric direction: Newton converges slowly there
    // and accepted points carry an O(sqrt(tol)) antisymmetric drift
    const double area = b.ops.M.sum();
    e.observer = [&](const ProblemState& s, const StepInfo& st) {
        const double u = (s.ops.M * st.y1.head(s.nu)).sum() / area, d = st.y1[s.nsys()], lam = st.y1[s.nu_sys()];
        worst = std::max(worst, std::abs(d * (u - 1) - mu1));
        worst = std::max(worst, std::abs(lam - u * std::exp(-u)));
        const Vec ph = st.y1.segment(s.nu, s.nu);
        worst_norm = std::max(worst_norm, std::abs(ph.dot(s.ops.M * ph) - 1));
        worst_res = std::max(worst_res, st.res);
    };
    EXPECT_EQ(cont(b, e), 6);
    EXPECT_LT(worst, 1e-2);
    EXPECT_LT(worst_norm, 1e-8);
    EXPECT_LE(worst_res, b.nc.tol);
    EXPECT_GT(b.par()[1], 10.05);

    // back to the normal system in lambda, at the new d
    ProblemState x = b;
    spcontexit(x, 1);
    EXPECT_FALSE(x.extended());
    EXPECT_EQ(x.u.size(), x.nu + x.npar);
    EXPECT_EQ(x.ilam.front(), 1);
    EXPECT_EQ(x.sol.ptype, -2);
    const NewtonResult nr = nloop(x, active(x, x.u));
    EXPECT_TRUE(nr.converged);
    EXPECT_LE(nr.res, x.nc.tol);
    EXPECT_LT((nr.y.head(x.nu) - b.u.head(b.nu)).cwiseAbs().maxCoeff(), 1e-8);
}
