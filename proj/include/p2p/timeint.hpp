#pragma once

#include "p2p/problem.hpp"

#include <string>
#include <vector>

namespace p2p {

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> res;   // ||G(u)||_inf at recorded steps
    int steps = 0;
    int factorizations = 0;
};

struct TintOptions {
    int pmod = 0;             // record residual and snapshot every pmod steps (0: never)
    std::string out;          // snapshot directory (empty: none)
    bool diagnostics = true;
};

/// Linearly implicit Euler for M u_t = -G(u) on the full path: all assembled
/// matrix terms at u^n are implicit, loads and f explicit. Reassembles and
/// refactorizes every step.
TimeSeries tint(ProblemState& p, double dt, int nt, const TintOptions& opt = {});

/// Same scheme for semilinear problems G = L u - M f(u) - b with
/// Lambda = M + dt L factorized once. L defaults to fuha.lin_op.
TimeSeries tints(ProblemState& p, double dt, int nt, const TintOptions& opt = {}, const SpMat* L_override = nullptr);

} // namespace p2p
