#include "p2p/switching.hpp"

#include <cmath>

namespace p2p {

void getinitau(ProblemState& p)
{
    p.check();
    const int n = p.nsys();
    Vec e = Vec::Zero(n + 1);
    e[n] = 1;
    p.tau = tangent(p, p.u, e);
}

namespace {

SpMat system_mass(const ProblemState& p)
{
    const int nus = p.nu_sys(), n = p.nsys();
    Triplets trip;
    for (int blk = 0; blk < nus / p.nu; ++blk)
        for (Eigen::Index k = 0; k < p.ops.M.outerSize(); ++k)
            for (SpMat::InnerIterator it(p.ops.M, k); it; ++it)
                trip.emplace_back(blk * p.nu + it.row(), blk * p.nu + it.col(), it.value());
    for (int i = nus; i <= n; ++i)
        trip.emplace_back(i, i, 1.0);
    SpMat B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

} // namespace

SwibraInfo swibra(ProblemState& p, double ds)
{
    p.check();
    if (!p.ops.ready)
        setfemops(p);
    const int n = p.nsys();
    if (p.tau.size() != n + 1)
        throw DomainError("swibra: the point carries no tangent");
    const Vec w = product_weights(p);
    const SpMat A = bordered_matrix(jacobian(p, p.u), w.cwiseProduct(p.tau));
    const Spectrum s = spectrum_near_zero(A, system_mass(p), 2);

    SwibraInfo info;
    info.mu1 = std::abs(s.values[0]);
    info.mu2 = s.values.size() > 1 ? std::abs(s.values[1]) : INFINITY;
    if (!(info.mu1 <= 0.2 * info.mu2))
        throw DomainError("swibra: no isolated near-zero eigenvalue; not a bifurcation point");
    Vec t = s.vectors.col(0).real();
    t -= weighted_dot(p, t, p.tau) / weighted_dot(p, p.tau, p.tau) * p.tau;
    t /= std::sqrt(weighted_dot(p, t, t));
    Eigen::Index imax;
    t.head(p.nu_sys()).cwiseAbs().maxCoeff(&imax);
    if (t[imax] < 0)
        t = -t;

    p.tau = t;
    p.nc.ds = ds;
    p.sol.ptype = -2;
    p.sol.ineg = -1;
    p.sol.count = 0;
    p.sol.bcount = 0;
    p.sol.fcount = 0;
    p.branch.clear();
    return info;
}

int findbif(ProblemState& p, int nbif, int nsteps)
{
    ContOptions opt;
    opt.nsteps = nsteps;
    return findbif(p, nbif, opt);
}

int findbif(ProblemState& p, int nbif, ContOptions opt)
{
    const Switches keep = p.sw;
    p.sw.bifcheck = 1;
    p.sw.spcalc = 1;
    p.sw.foldcheck = 0;
    opt.stop_after_bif = nbif;
    const int steps = cont(p, opt);
    p.sw = keep;
    return steps;
}

} // namespace p2p
