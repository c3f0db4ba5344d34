#pragma once

#include "p2p/fem.hpp"
#include "p2p/linsolve.hpp"
#include "p2p/mesh.hpp"
#include "p2p/periodic.hpp"
#include "p2p/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace p2p {

struct Controls {
    double tol = 1e-10;
    int imax = 10;
    double del = 1e-8;
    double dsmin = 1e-6;
    double dsmax = 1.0;
    double ds = 0.1;
    int dsinciter = 5;
    double dsincfac = 2;
    double dlammax = 1;
    double lamdtol = 0.5;
    double dsminbis = 1e-9;
    int bisecmax = 10;
    int nsteps = 10;
    int ntot = 10000;
    int neig = 50;
    double lammin = -1e6;
    double lammax = 1e6;
    double xi = 0;    // 0 means 1/nu at continuation start
    double xiq = 0;   // 0 means the default 0.5
    double stiff_spring = 1e3;
};

struct Switches {
    int bifcheck = 1;
    int foldcheck = 0;
    int spcalc = 1;
    int jac = 1;      // 1 analytic, 0 finite differences
    int qjac = 1;
    int spjac = 1;
    int sfem = 1;     // 0 full tensor assembly, 1 semilinear
    int para = 2;     // 0 natural, 1 automatic switching, 2 arclength
    int bifloc = 2;   // 0 tangent, 1 secant, 2 quadratic predictor in bisection
    int bcper = 0;
    int spcont = 0;   // 0 normal, 1 branch point, 2 fold point continuation
    int newt = 0;     // 0 full Newton, 1 chord
};

struct SolutionInfo {
    int ineg = -1;
    int iter = 0;
    double res = 0;
    double lamd = 0;   // d(alpha)/ds of the last tangent
    int count = 0;
    int bcount = 0;
    int fcount = 0;
    int ptype = -1;
    std::string stop;
    Eigen::VectorXcd eigs;
};

struct MeshSpec {
    double lx = 1, ly = 1;
    int nx = 1, ny = 1;
    std::string map = "rect";  // "rect" or "disk"
};

Mesh build_mesh(const MeshSpec& spec);

struct OperatorCache {
    bool ready = false;
    Periodization per;
    SpMat M1;       // scalar mass on the full mesh
    SpMat M_full;   // neq-component mass on the full mesh
    SpMat M;        // neq-component mass, periodized
    SpMat K;        // scalar-diffusion stiffness (c = identity), block-diagonal, periodized
    SpMat Kx, Ky;   // -d/dx and -d/dy (advection with b = e_x, e_y), periodized
    SpMat Q;        // boundary matrix at u = 0, periodized (u-independent conditions only)
    Vec Gb;         // boundary load at u = 0, periodized
    SpMat pattern;  // structural pattern of any PDE Jacobian (periodized)
    std::vector<int> colors;
    int ncolors = 0;
};

struct BranchRecord {
    int count = 0;
    int ptype = 0;
    std::vector<double> params;   // active parameters in ilam order
    int ineg = -1;
    double err = 0;
    double l2norm = 0;
    int target = 0;
    std::vector<double> user;
};

struct ProblemState;

struct Callbacks {
    using Field = std::function<Vec(const ProblemState&, const Vec& u, const Vec& par)>;
    using Matrix = std::function<SpMat(const ProblemState&, const Vec& u, const Vec& par)>;
    using Tensors = std::function<CoeffTensors(const ProblemState&, const Vec& u_full, const Vec& par)>;

    Tensors coeffs;       // full path: coefficients of G at the full-mesh field
    Tensors jac_coeffs;   // full path: coefficients of the linearization
    Field sG;             // semilinear path, reduced vectors
    Matrix sGjac;

    // semilinear split G = L u - M f(u) - b, used by tints
    std::function<SpMat(const ProblemState&, const Vec& par)> lin_op;
    Field nodal_f;
    std::function<Vec(const ProblemState&, const Vec& par)> lin_load;

    Field qf;             // auxiliary equations, length nq
    Matrix qjac;          // nq x nu
    std::function<SpMat(const ProblemState&, const Vec& u, const Vec& par, const Vec& phi)> spjac;

    std::function<std::vector<double>(const ProblemState&)> outfu;
    std::vector<std::string> out_names;
    std::function<void(ProblemState&)> post_step;   // after every accepted point
};

/// The complete continuation problem.
///
/// The unknown vector u holds the PDE values (nu, periodized), then in
/// extended mode the kernel vector phi (nu), then all npar auxiliary
/// variables. ilam is 1-based into the auxiliary variables, primary first.
struct ProblemState {
    std::string demo;
    std::string variant;
    MeshSpec mesh_spec;
    Mesh mesh;
    int neq = 1;
    int nu = 0;
    int npar = 0;
    Vec u;
    Vec tau;
    std::vector<int> ilam{1};
    int nq = 0;
    Controls nc;
    Switches sw;
    SolutionInfo sol;
    OperatorCache ops;
    BCSpec bc;
    Callbacks fuha;
    std::vector<BranchRecord> branch;
    std::vector<double> usrlam;
    std::vector<std::string> param_names;
    std::string dir;      // output directory, empty for no files
    Vec u_old;            // reference profile for phase conditions (full-length u)

    bool extended() const { return sw.spcont != 0; }
    int nu_sys() const { return extended() ? 2 * nu : nu; }
    int nq_sys() const { return extended() ? nq + 1 : nq; }
    int nsys() const { return nu_sys() + nq_sys(); }
    Vec pde(const Vec& U) const { return U.head(nu); }
    Vec phi(const Vec& U) const { return U.segment(nu, nu); }
    Vec par(const Vec& U) const { return U.tail(npar); }
    Vec par() const { return par(u); }
    double primary() const { return u[u.size() - npar + ilam.at(0) - 1]; }
    void check() const;
};

/// Assemble the cached operators; call after mesh, bc or bcper changes.
void setfemops(ProblemState& p);

/// Switch the state to the periodic representation of its current sw.bcper,
/// dropping partner values from u (and u_old).
void rec2per(ProblemState& p, PeriodicKind kind);

Vec pde_residual(const ProblemState& p, const Vec& u, const Vec& par);
SpMat pde_jacobian(const ProblemState& p, const Vec& u, const Vec& par);
SpMat numeric_pde_jacobian(const ProblemState& p, const Vec& u, const Vec& par);
/// d/du of (G_u(u) phi); analytic through spjac when enabled, else colored differences.
SpMat second_derivative(const ProblemState& p, const Vec& u, const Vec& par, const Vec& phi);

Vec residual(const ProblemState& p, const Vec& U);
/// Columns (u_sys, active non-primary variables, primary), primary last.
SpMat jacobian(const ProblemState& p, const Vec& U);

/// Active coordinates y = (u_sys, w~, alpha) of U, and the inverse.
Vec active(const ProblemState& p, const Vec& U);
Vec with_active(const ProblemState& p, const Vec& U, const Vec& y);

double xi_eff(const ProblemState& p);
double xiq_eff(const ProblemState& p);
/// Diagonal weights of the product of the arclength equation.
Vec product_weights(const ProblemState& p);
double weighted_dot(const ProblemState& p, const Vec& a, const Vec& b);

void swipar(ProblemState& p, const std::vector<int>& ilam);

/// Starts a new branch at the current point: clears records and counters,
/// drops the tangent and marks the point as an initial guess (ptype -1).
void reset_branch(ProblemState& p);

/// The [lammin, lammax] window belongs to one primary parameter; switching
/// the primary drops it.
void reset_window(Controls& nc);

struct JacCheck {
    SpMat analytic, numeric;
    double maxdiff = 0;
};
JacCheck jaccheck(const ProblemState& p);
JacCheck jaccheck(const ProblemState& p, const Vec& U);
JacCheck spjaccheck(const ProblemState& p, const Vec& U, const Vec& phi);

double l2norm(const ProblemState& p, const Vec& U);
BranchRecord make_record(const ProblemState& p, int ptype);

/// Greedy column coloring such that no two columns of one color share a row.
std::vector<int> color_columns(const SpMat& pattern, int* ncolors = nullptr);

} // namespace p2p
