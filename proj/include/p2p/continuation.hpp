#pragma once

#include "p2p/problem.hpp"

#include <functional>

namespace p2p {

struct NewtonResult {
    Vec y;            // active coordinates (u_sys, w~, alpha)
    double res = 0;
    int iter = 0;
    bool converged = false;
    std::vector<double> history;   // residual norm before each step and at exit
};

/// Newton loop for (G, q) = 0 with the primary parameter held at y0's value.
NewtonResult nloop(const ProblemState& p, const Vec& y0);

/// Newton loop for (G, q, p) = 0 where p(y) = <tau_ref, y - y_ref>_w - ds.
NewtonResult nloopext(const ProblemState& p, const Vec& y_pred, const Vec& y_ref, const Vec& tau_ref, double ds);

/// Unit tangent at U from the system bordered with tau_old, oriented along tau_old.
Vec tangent(const ProblemState& p, const Vec& U, const Vec& tau_old);

/// Spectrum of the PDE block at U; stores eigenvalues in p.sol.eigs and returns ineg.
int stability_index(ProblemState& p, const Vec& U);

/// Next step size after a corrector attempt. Sets stop when a failure
/// pushes |ds| below dsmin.
double stepsize_update(const Controls& nc, double ds, int iter, bool failed, double tau_alpha, bool& stop);

enum class SpecialKind { bifurcation = 1, fold = 2 };

struct BranchPoint {
    Vec y, tau;
    int ineg = -1;
};

struct Bisection {
    BranchPoint point;
    int solves = 0;
    bool ok = true;       // false when a corrector failed inside the loop
    double bracket = 0;   // final arclength bracket width
};

/// Shrinks the bracket [left, right] (arclength ds apart) around a change of
/// the detection indicator.
Bisection bisect_special_point(ProblemState& p, const BranchPoint& left, const BranchPoint& right, double ds,
                               SpecialKind kind);

struct StepInfo {
    Vec y0, tau0, y1, tau1;
    double ds = 0;
    bool arclength = true;
    double res = 0;
};

struct ContOptions {
    int nsteps = -1;          // <0: nc.nsteps
    int stop_after_bif = -1;  // stop after this many located bifurcations
    std::function<void(const ProblemState&, const StepInfo&)> observer;
};

/// Predictor-corrector continuation; returns the number of accepted steps.
/// The stop reason is left in p.sol.stop.
int cont(ProblemState& p, const ContOptions& opt = {});

} // namespace p2p
