#pragma once

#include "p2p/continuation.hpp"

namespace p2p {

/// Tangent from a single bordered solve with the unit border in the
/// primary-parameter slot; the primary component comes out positive.
void getinitau(ProblemState& p);

struct SwibraInfo {
    double mu1 = 0, mu2 = 0;   // two smallest eigenvalues of the bordered matrix
};

/// Branch switching at a located bifurcation point. Installs the kernel
/// direction orthogonal to the old tangent as the new tangent, marks the
/// state as a guess (ptype -2), resets branch and counters, and sets ds.
SwibraInfo swibra(ProblemState& p, double ds);

/// Continuation with stability monitoring until nbif bifurcations are located.
int findbif(ProblemState& p, int nbif, int nsteps = -1);
int findbif(ProblemState& p, int nbif, ContOptions opt);

} // namespace p2p
