#pragma once

#include "p2p/problem.hpp"

namespace p2p {

struct SpcontInfo {
    double mu1 = 0, mu2 = 0;   // smallest eigenvalue magnitudes of the PDE block at entry
};

/// Switches a located fold (ptype 2) or branch point (ptype 1) to the
/// extended system in (u, phi, w): phi is the normalized near-kernel vector,
/// extra becomes the new primary parameter and the old primary stays active.
SpcontInfo spcontini(ProblemState& p, int extra);

/// Back to the normal system with the given primary parameter. The point is
/// marked as a guess at a singular point (ptype -2).
void spcontexit(ProblemState& p, int primary);

/// Smallest-magnitude eigenpair of the PDE block, phi normalized to phi^T M phi = 1.
struct KernelPair {
    std::complex<double> mu;
    double mu_next = 0;
    Vec phi;
};
KernelPair pde_kernel(const ProblemState& p, const Vec& U);

} // namespace p2p
