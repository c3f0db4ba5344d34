#include "p2p/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace p2p {

Mesh build_mesh(const MeshSpec& spec)
{
    if (spec.map == "rect")
        return build_rect_mesh(spec.lx, spec.ly, spec.nx, spec.ny);
    if (spec.map == "disk") {
        // square-to-disk map; the square's boundary lands on the unit circle
        Mesh m = build_rect_mesh(1.0, 1.0, spec.nx, spec.ny);
        for (auto& pt : m.points) {
            const double x = pt[0], y = pt[1];
            pt = {x * std::sqrt(1.0 - 0.5 * y * y), y * std::sqrt(1.0 - 0.5 * x * x)};
        }
        return m;
    }
    throw DomainError("unknown mesh map '" + spec.map + "'");
}

void ProblemState::check() const
{
    if (u.size() != nu_sys() + npar)
        throw DomainError("state: u has length " + std::to_string(u.size()) + ", expected " +
                          std::to_string(nu_sys() + npar));
    if (static_cast<int>(ilam.size()) != nq_sys() + 1)
        throw DomainError("state: need nq+1 active variables, got " + std::to_string(ilam.size()));
    std::set<int> seen;
    for (int k : ilam) {
        if (k < 1 || k > npar)
            throw DomainError("state: active index " + std::to_string(k) + " out of range");
        if (!seen.insert(k).second)
            throw DomainError("state: active indices must be distinct");
    }
}

std::vector<int> color_columns(const SpMat& pattern, int* ncolors)
{
    const Eigen::Index n = pattern.cols();
    SpMat At = pattern.transpose();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    int used = 0;
    std::vector<Eigen::Index> stamp;
    for (Eigen::Index j = 0; j < n; ++j) {
        stamp.assign(static_cast<std::size_t>(used) + 1, -1);
        for (SpMat::InnerIterator r(pattern, j); r; ++r)
            for (SpMat::InnerIterator c(At, r.row()); c; ++c) {
                const int cc = color[c.row()];
                if (cc >= 0)
                    stamp[cc] = j;
            }
        int pick = 0;
        while (pick < used && stamp[pick] == j)
            ++pick;
        color[j] = pick;
        used = std::max(used, pick + 1);
    }
    if (ncolors)
        *ncolors = used;
    return color;
}

namespace {

SpMat kron_pattern(const SpMat& P1, int neq)
{
    const Eigen::Index np = P1.rows();
    Triplets trip;
    for (int i = 0; i < neq; ++i)
        for (int j = 0; j < neq; ++j)
            for (Eigen::Index k = 0; k < P1.outerSize(); ++k)
                for (SpMat::InnerIterator it(P1, k); it; ++it)
                    trip.emplace_back(i * np + it.row(), j * np + it.col(), 1.0);
    SpMat P(neq * np, neq * np);
    P.setFromTriplets(trip.begin(), trip.end());
    return P;
}

SpMat advection(const Mesh& mesh, int neq, int axis)
{
    CoeffTensors co;
    co.neq = neq;
    co.b.assign(static_cast<std::size_t>(neq * neq * 2), 0.0);
    for (int i = 0; i < neq; ++i)
        co.b[(i * neq + i) * 2 + axis] = 1.0;
    return assemble_interior(mesh, co).Kadv;
}

// Forward differences of f around u, one evaluation per color group.
SpMat colored_fd(const std::function<Vec(const Vec&)>& f, const Vec& u, const SpMat& pattern,
                 const std::vector<int>& colors, int ncolors, double del)
{
    const Vec f0 = f(u);
    Triplets trip;
    std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(ncolors));
    for (Eigen::Index j = 0; j < u.size(); ++j)
        groups[colors[j]].push_back(j);
    for (const auto& g : groups) {
        Vec up = u;
        for (auto j : g)
            up[j] += del;
        const Vec d = (f(up) - f0) / del;
        for (auto j : g)
            for (SpMat::InnerIterator it(pattern, j); it; ++it)
                if (d[it.row()] != 0)
                    trip.emplace_back(it.row(), j, d[it.row()]);
    }
    SpMat J(f0.size(), u.size());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

} // namespace

void setfemops(ProblemState& p)
{
    OperatorCache& o = p.ops;
    const Mesh& mesh = p.mesh;
    o.per = build_periodization(mesh, p.neq, static_cast<PeriodicKind>(p.sw.bcper));
    o.M1 = assemble_mass(mesh, 1);
    o.M_full = assemble_mass(mesh, p.neq);
    o.M = periodize_operator(o.M_full, o.per);

    CoeffTensors co;
    co.neq = p.neq;
    co.c = CoeffTensors::isotropic(p.neq, std::vector<double>(static_cast<std::size_t>(p.neq), 1.0));
    o.K = periodize_operator(assemble_interior(mesh, co).K, o.per);
    o.Kx = periodize_operator(advection(mesh, p.neq, 0), o.per);
    o.Ky = periodize_operator(advection(mesh, p.neq, 1), o.per);

    const Vec zero = Vec::Zero(o.per.nu_full());
    const Vec par = p.npar > 0 ? p.par() : Vec();
    BoundaryOperators bo = assemble_boundary(mesh, p.bc, zero, par, o.per.identified_segments());
    o.Q = periodize_operator(bo.Q, o.per);
    o.Gb = periodize_vector(bo.Gb, o.per);

    SpMat P = periodize_operator(kron_pattern(o.M1, p.neq), o.per);
    for (Eigen::Index k = 0; k < P.outerSize(); ++k)
        for (SpMat::InnerIterator it(P, k); it; ++it)
            it.valueRef() = 1.0;
    o.pattern = P;
    o.colors = color_columns(o.pattern, &o.ncolors);
    p.nu = o.per.nu_per();
    o.ready = true;
}

void rec2per(ProblemState& p, PeriodicKind kind)
{
    if (p.extended())
        throw DomainError("rec2per: not available in extended mode");
    if (p.sw.bcper != 0)
        throw DomainError("rec2per: state is already periodic");
    const Periodization per = build_periodization(p.mesh, p.neq, kind);
    const Vec upde = drop_vector(p.pde(p.u), per);
    Vec u(upde.size() + p.npar);
    u << upde, p.par();
    if (p.u_old.size() == p.u.size()) {
        Vec uo(u.size());
        uo << drop_vector(p.u_old.head(p.nu), per), p.u_old.tail(p.npar);
        p.u_old = uo;
    } else {
        p.u_old.resize(0);
    }
    p.u = u;
    p.sw.bcper = static_cast<int>(kind);
    p.tau.resize(0);
    setfemops(p);
}

Vec pde_residual(const ProblemState& p, const Vec& u, const Vec& par)
{
    if (u.size() != p.nu)
        throw DomainError("pde_residual: u length mismatch");
    if (p.sw.sfem == 1) {
        if (!p.fuha.sG)
            throw DomainError("pde_residual: no semilinear residual for this problem");
        return p.fuha.sG(p, u, par);
    }
    if (!p.fuha.coeffs)
        throw DomainError("pde_residual: no coefficient provider for this problem");
    const Periodization& per = p.ops.per;
    const Vec uf = extend_vector(u, per);
    const CoeffTensors co = p.fuha.coeffs(p, uf, par);
    const InteriorOperators io = assemble_interior(p.mesh, co);
    Vec r = io.K * uf;
    if (io.Ma.nonZeros())
        r += io.Ma * uf;
    if (io.Kadv.nonZeros())
        r += io.Kadv * uf;
    if (!co.f.empty())
        r -= assemble_load(p.mesh, co.f, p.neq);
    if (co.f_nodal.size())
        r -= p.ops.M_full * co.f_nodal;
    const BoundaryOperators bo = assemble_boundary(p.mesh, p.bc, uf, par, per.identified_segments());
    r += bo.Q * uf - bo.Gb;
    return periodize_vector(r, per);
}

SpMat numeric_pde_jacobian(const ProblemState& p, const Vec& u, const Vec& par)
{
    auto f = [&](const Vec& x) { return pde_residual(p, x, par); };
    return colored_fd(f, u, p.ops.pattern, p.ops.colors, p.ops.ncolors, p.nc.del);
}

SpMat pde_jacobian(const ProblemState& p, const Vec& u, const Vec& par)
{
    if (p.sw.jac == 0)
        return numeric_pde_jacobian(p, u, par);
    if (p.sw.sfem == 1) {
        if (!p.fuha.sGjac)
            return numeric_pde_jacobian(p, u, par);
        return p.fuha.sGjac(p, u, par);
    }
    if (!p.fuha.jac_coeffs)
        return numeric_pde_jacobian(p, u, par);
    const Periodization& per = p.ops.per;
    const Vec uf = extend_vector(u, per);
    const CoeffTensors co = p.fuha.jac_coeffs(p, uf, par);
    const InteriorOperators io = assemble_interior(p.mesh, co);
    SpMat J = io.K + io.Ma + io.Kadv;
    if (co.fu_nodal.size())
        J += nodal_reaction_jacobian(p.ops.M1, co.fu_nodal, p.neq);
    J += assemble_boundary_jacobian(p.mesh, p.bc, uf, par, per.identified_segments());
    return periodize_operator(J, per);
}

SpMat second_derivative(const ProblemState& p, const Vec& u, const Vec& par, const Vec& phi)
{
    if (p.sw.spjac == 1 && p.fuha.spjac)
        return p.fuha.spjac(p, u, par, phi);
    auto f = [&](const Vec& x) { return Vec(pde_jacobian(p, x, par) * phi); };
    return colored_fd(f, u, p.ops.pattern, p.ops.colors, p.ops.ncolors, p.nc.del);
}

Vec residual(const ProblemState& p, const Vec& U)
{
    const int nu = p.nu, nus = p.nu_sys(), n = p.nsys();
    const Vec u = U.head(nu), par = U.tail(p.npar);
    Vec r(n);
    r.head(nu) = pde_residual(p, u, par);
    if (p.extended()) {
        const Vec phi = U.segment(nu, nu);
        r.segment(nu, nu) = pde_jacobian(p, u, par) * phi;
        r[n - 1] = phi.dot(p.ops.M * phi) - 1.0;
    }
    if (p.nq > 0) {
        if (!p.fuha.qf)
            throw DomainError("residual: nq > 0 but no auxiliary equations");
        const Vec q = p.fuha.qf(p, u, par);
        if (q.size() != p.nq)
            throw DomainError("residual: auxiliary equations returned wrong length");
        r.segment(nus, p.nq) = q;
    }
    return r;
}

namespace {

// Column of the active variable ilam[k] in the system Jacobian.
int active_column(const ProblemState& p, int k)
{
    return k == 0 ? p.nsys() : p.nu_sys() + k - 1;
}

Eigen::Index par_offset(const ProblemState& p, int k)
{
    return p.nu_sys() + p.ilam[k] - 1;
}

void add_block(Triplets& trip, const SpMat& A, Eigen::Index r0, Eigen::Index c0)
{
    for (Eigen::Index k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            trip.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
}

SpMat aux_jacobian(const ProblemState& p, const Vec& u, const Vec& par)
{
    if (p.sw.qjac == 1 && p.fuha.qjac)
        return p.fuha.qjac(p, u, par);
    const Vec q0 = p.fuha.qf(p, u, par);
    Triplets trip;
    Vec up = u;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        up[j] += p.nc.del;
        const Vec d = (p.fuha.qf(p, up, par) - q0) / p.nc.del;
        up[j] = u[j];
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (d[i] != 0)
                trip.emplace_back(i, j, d[i]);
    }
    SpMat J(q0.size(), u.size());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

} // namespace

SpMat jacobian(const ProblemState& p, const Vec& U)
{
    p.check();
    const int nu = p.nu, nus = p.nu_sys(), n = p.nsys();
    const Vec u = U.head(nu), par = U.tail(p.npar);
    Triplets trip;
    const SpMat Gu = pde_jacobian(p, u, par);
    add_block(trip, Gu, 0, 0);
    if (p.extended()) {
        const Vec phi = U.segment(nu, nu);
        add_block(trip, second_derivative(p, u, par, phi), nu, 0);
        add_block(trip, Gu, nu, nu);
        const Vec Mphi = p.ops.M * phi;
        for (int j = 0; j < nu; ++j)
            if (Mphi[j] != 0)
                trip.emplace_back(n - 1, nu + j, 2.0 * Mphi[j]);
    }
    if (p.nq > 0)
        add_block(trip, aux_jacobian(p, u, par), nus, 0);

    const Vec r0 = residual(p, U);
    for (int k = 0; k < static_cast<int>(p.ilam.size()); ++k) {
        Vec Up = U;
        Up[par_offset(p, k)] += p.nc.del;
        const Vec d = (residual(p, Up) - r0) / p.nc.del;
        const int col = active_column(p, k);
        for (int i = 0; i < n; ++i)
            if (d[i] != 0)
                trip.emplace_back(i, col, d[i]);
    }
    SpMat J(n, n + 1);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

Vec active(const ProblemState& p, const Vec& U)
{
    const int nus = p.nu_sys(), n = p.nsys();
    Vec y(n + 1);
    y.head(nus) = U.head(nus);
    for (int k = 1; k < static_cast<int>(p.ilam.size()); ++k)
        y[nus + k - 1] = U[par_offset(p, k)];
    y[n] = U[par_offset(p, 0)];
    return y;
}

Vec with_active(const ProblemState& p, const Vec& U, const Vec& y)
{
    const int nus = p.nu_sys(), n = p.nsys();
    Vec out = U;
    out.head(nus) = y.head(nus);
    for (int k = 1; k < static_cast<int>(p.ilam.size()); ++k)
        out[par_offset(p, k)] = y[nus + k - 1];
    out[par_offset(p, 0)] = y[n];
    return out;
}

double xi_eff(const ProblemState& p)
{
    return p.nc.xi > 0 ? p.nc.xi : 1.0 / p.nu_sys();
}

double xiq_eff(const ProblemState& p)
{
    if (p.nq_sys() == 0)
        return 0;
    return p.nc.xiq > 0 ? p.nc.xiq : 0.5;
}

Vec product_weights(const ProblemState& p)
{
    const double xi = xi_eff(p), xiq = xiq_eff(p);
    Vec w(p.nsys() + 1);
    w.head(p.nu_sys()).setConstant(xi);
    w.segment(p.nu_sys(), p.nq_sys()).setConstant(xiq);
    w[p.nsys()] = 1.0 - 0.5 * (xi + xiq);
    return w;
}

double weighted_dot(const ProblemState& p, const Vec& a, const Vec& b)
{
    if (a.size() != p.nsys() + 1 || b.size() != p.nsys() + 1)
        throw DomainError("weighted_dot: vectors must have length nu+nq+1");
    return (product_weights(p).array() * a.array() * b.array()).sum();
}

void swipar(ProblemState& p, const std::vector<int>& ilam)
{
    ProblemState trial = p;
    trial.ilam = ilam;
    trial.check();
    if (ilam.front() != p.ilam.front())
        reset_window(p.nc);
    p.ilam = ilam;
    p.tau.resize(0);
}

void reset_branch(ProblemState& p)
{
    p.branch.clear();
    p.sol.count = p.sol.bcount = p.sol.fcount = 0;
    p.sol.ptype = -1;
    p.sol.ineg = -1;
    p.tau.resize(0);
}

void reset_window(Controls& nc)
{
    const Controls d;
    nc.lammin = d.lammin;
    nc.lammax = d.lammax;
}

namespace {

double max_entry_diff(const SpMat& a, const SpMat& b)
{
    const SpMat d = a - b;
    double m = 0;
    for (Eigen::Index k = 0; k < d.outerSize(); ++k)
        for (SpMat::InnerIterator it(d, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

} // namespace

JacCheck jaccheck(const ProblemState& p)
{
    return jaccheck(p, p.u);
}

JacCheck jaccheck(const ProblemState& p, const Vec& U)
{
    ProblemState q = p;
    q.sw.jac = 1;
    q.sw.qjac = 1;
    const Vec u = U.head(p.nu), par = U.tail(p.npar);
    JacCheck out;
    out.analytic = pde_jacobian(q, u, par);
    out.numeric = numeric_pde_jacobian(q, u, par);
    out.maxdiff = max_entry_diff(out.analytic, out.numeric);
    if (p.nq > 0 && p.fuha.qjac) {
        const SpMat qa = q.fuha.qjac(q, u, par);
        q.sw.qjac = 0;
        const SpMat qn = aux_jacobian(q, u, par);
        out.maxdiff = std::max(out.maxdiff, max_entry_diff(qa, qn));
    }
    return out;
}

JacCheck spjaccheck(const ProblemState& p, const Vec& U, const Vec& phi)
{
    if (!p.fuha.spjac)
        throw DomainError("spjaccheck: problem has no analytic second derivative");
    ProblemState q = p;
    q.sw.jac = 1;
    const Vec u = U.head(p.nu), par = U.tail(p.npar);
    JacCheck out;
    q.sw.spjac = 1;
    out.analytic = second_derivative(q, u, par, phi);
    q.sw.spjac = 0;
    out.numeric = second_derivative(q, u, par, phi);
    out.maxdiff = max_entry_diff(out.analytic, out.numeric);
    return out;
}

double l2norm(const ProblemState& p, const Vec& U)
{
    const Vec u = U.head(p.nu);
    return std::sqrt(std::max(0.0, u.dot(p.ops.M * u)));
}

BranchRecord make_record(const ProblemState& p, int ptype)
{
    BranchRecord r;
    r.count = p.sol.count;
    r.ptype = ptype;
    for (int k : p.ilam)
        r.params.push_back(p.u[p.nu_sys() + k - 1]);
    r.ineg = p.sol.ineg;
    r.err = 0;
    r.l2norm = l2norm(p, p.u);
    if (p.fuha.outfu)
        r.user = p.fuha.outfu(p);
    return r;
}

} // namespace p2p
