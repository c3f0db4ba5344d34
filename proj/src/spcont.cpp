#include "p2p/spcont.hpp"

#include <algorithm>
#include <cmath>

namespace p2p {

KernelPair pde_kernel(const ProblemState& p, const Vec& U)
{
    const Vec u = U.head(p.nu), par = U.tail(p.npar);
    const Spectrum s = spectrum_near_zero(pde_jacobian(p, u, par), p.ops.M, 2);
    KernelPair k;
    k.mu = s.values[0];
    k.mu_next = s.values.size() > 1 ? std::abs(s.values[1]) : INFINITY;
    k.phi = s.vectors.col(0).real();
    k.phi /= std::sqrt(k.phi.dot(p.ops.M * k.phi));
    Eigen::Index imax;
    k.phi.cwiseAbs().maxCoeff(&imax);
    if (k.phi[imax] < 0)
        k.phi = -k.phi;
    return k;
}

SpcontInfo spcontini(ProblemState& p, int extra)
{
    if (p.extended())
        throw DomainError("spcontini: state is already extended");
    if (p.sol.ptype != 1 && p.sol.ptype != 2)
        throw DomainError("spcontini: need a bifurcation (1) or fold (2) point");
    if (extra < 1 || extra > p.npar || std::find(p.ilam.begin(), p.ilam.end(), extra) != p.ilam.end())
        throw DomainError("spcontini: extra parameter must be a passive auxiliary variable");
    if (!p.ops.ready)
        setfemops(p);

    const KernelPair k = pde_kernel(p, p.u);
    SpcontInfo info{std::abs(k.mu), k.mu_next};
    if (!(info.mu1 <= 0.2 * info.mu2))
        throw DomainError("spcontini: no isolated near-zero eigenvalue at this point");

    Vec U(2 * p.nu + p.npar);
    U << p.u.head(p.nu), k.phi, p.par();
    p.sw.spcont = p.sol.ptype == 2 ? 2 : 1;
    p.u = U;
    std::vector<int> ilam{extra};
    ilam.insert(ilam.end(), p.ilam.begin(), p.ilam.end());
    p.ilam = ilam;
    reset_window(p.nc);
    p.sw.bifcheck = 0;
    p.sw.foldcheck = 0;
    p.sw.spcalc = 0;
    reset_branch(p);
    return info;
}

void spcontexit(ProblemState& p, int primary)
{
    if (!p.extended())
        throw DomainError("spcontexit: state is not extended");
    if (primary < 1 || primary > p.npar)
        throw DomainError("spcontexit: primary parameter out of range");
    std::vector<int> ilam(p.ilam.begin() + 1, p.ilam.end());
    auto it = std::find(ilam.begin(), ilam.end(), primary);
    if (it != ilam.end())
        std::rotate(ilam.begin(), it, it + 1);
    else
        ilam.front() = primary;

    Vec U(p.nu + p.npar);
    U << p.u.head(p.nu), p.par();
    p.u = U;
    p.sw.spcont = 0;
    p.ilam = ilam;
    reset_window(p.nc);
    p.sw.bifcheck = 1;
    p.sw.spcalc = 1;
    reset_branch(p);
    // the point still carries a zero eigenvalue: same start rules as a swibra guess
    p.sol.ptype = -2;
}

} // namespace p2p
