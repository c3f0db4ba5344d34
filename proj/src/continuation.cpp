#include "p2p/continuation.hpp"

#include "p2p/io.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

namespace p2p {

namespace {

double rnorm(const Vec& r)
{
    return r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
}

SpMat left_columns(const SpMat& J, Eigen::Index n)
{
    return SpMat(J.leftCols(n));
}

} // namespace

NewtonResult nloop(const ProblemState& p, const Vec& y0)
{
    const int n = p.nsys();
    NewtonResult out;
    out.y = y0;
    Vec U = with_active(p, p.u, out.y);
    Vec r = residual(p, U);
    out.res = rnorm(r);
    out.history.push_back(out.res);
    LuSolver lu;
    while (out.res > p.nc.tol && out.iter < p.nc.imax) {
        try {
            if (p.sw.newt == 0 || out.iter == 0)
                lu.factorize(left_columns(jacobian(p, U), n));
            out.y.head(n) -= lu.solve(r);
        } catch (const SingularMatrixError&) {
            out.converged = false;
            return out;
        }
        ++out.iter;
        U = with_active(p, p.u, out.y);
        r = residual(p, U);
        out.res = rnorm(r);
        out.history.push_back(out.res);
        if (!std::isfinite(out.res))
            return out;
    }
    out.converged = out.res <= p.nc.tol;
    return out;
}

NewtonResult nloopext(const ProblemState& p, const Vec& y_pred, const Vec& y_ref, const Vec& tau_ref, double ds)
{
    const int n = p.nsys();
    const Vec w = product_weights(p);
    const Vec border = w.cwiseProduct(tau_ref);
    auto arc = [&](const Vec& y) { return border.dot(y - y_ref) - ds; };

    NewtonResult out;
    out.y = y_pred;
    Vec U = with_active(p, p.u, out.y);
    Vec r(n + 1);
    r << residual(p, U), arc(out.y);
    out.res = rnorm(r);
    out.history.push_back(out.res);
    LuSolver lu;
    while (out.res > p.nc.tol && out.iter < p.nc.imax) {
        try {
            if (p.sw.newt == 0 || out.iter == 0)
                lu.factorize(bordered_matrix(jacobian(p, U), border));
            out.y -= lu.solve(r);
        } catch (const SingularMatrixError&) {
            return out;
        }
        ++out.iter;
        U = with_active(p, p.u, out.y);
        r << residual(p, U), arc(out.y);
        out.res = rnorm(r);
        out.history.push_back(out.res);
        if (!std::isfinite(out.res))
            return out;
    }
    out.converged = out.res <= p.nc.tol;
    return out;
}

Vec tangent(const ProblemState& p, const Vec& U, const Vec& tau_old)
{
    const int n = p.nsys();
    const Vec border = product_weights(p).cwiseProduct(tau_old);
    Vec rhs = Vec::Zero(n);
    Vec t = blss(jacobian(p, U), border, 1.0, rhs);
    const double nrm = std::sqrt(weighted_dot(p, t, t));
    t /= nrm;
    if (weighted_dot(p, t, tau_old) < 0)
        t = -t;
    return t;
}

int stability_index(ProblemState& p, const Vec& U)
{
    const Vec u = U.head(p.nu), par = U.tail(p.npar);
    const Spectrum s = spectrum_near_zero(pde_jacobian(p, u, par), p.ops.M, p.nc.neig);
    p.sol.eigs = s.values;
    return s.ineg;
}

double stepsize_update(const Controls& nc, double ds, int iter, bool failed, double tau_alpha, bool& stop)
{
    stop = false;
    const double sgn = ds < 0 ? -1.0 : 1.0;
    double a = std::abs(ds);
    if (failed) {
        a /= 2;
        stop = a < nc.dsmin;
    } else if (iter < nc.dsinciter) {
        a = std::min(nc.dsincfac * a, nc.dsmax);
    }
    if (!failed && std::abs(a * tau_alpha) > nc.dlammax)
        a = nc.dlammax / std::abs(tau_alpha);
    return sgn * a;
}

namespace {

double sign_of(double x)
{
    return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
}

Vec bisection_predictor(int bifloc, const BranchPoint& L, const BranchPoint& R, double hR, double h)
{
    switch (bifloc) {
    case 0:
        return L.y + h * L.tau;
    case 1:
        return L.y + (h / hR) * (R.y - L.y);
    default: {
        const double t = h / hR;
        return L.y + h * L.tau + t * t * (R.y - L.y - hR * L.tau);
    }
    }
}

void store_point(ProblemState& p, const std::string& name)
{
    if (!p.dir.empty())
        save_point(p, p.dir, name);
}

// Installs a located or target point into p temporarily for recording and saving.
void record_special(ProblemState& p, const Vec& U, const Vec& tau, int ineg, int ptype, int target,
                    const std::string& name)
{
    const Vec u_keep = p.u, tau_keep = p.tau;
    const int ineg_keep = p.sol.ineg, ptype_keep = p.sol.ptype;
    p.u = U;
    p.tau = tau;
    p.sol.ineg = ineg;
    p.sol.ptype = ptype;
    BranchRecord rec = make_record(p, ptype);
    rec.target = target;
    p.branch.push_back(rec);
    store_point(p, name);
    ++p.sol.count;
    p.u = u_keep;
    p.tau = tau_keep;
    p.sol.ineg = ineg_keep;
    p.sol.ptype = ptype_keep;
}

} // namespace

Bisection bisect_special_point(ProblemState& p, const BranchPoint& left, const BranchPoint& right, double ds,
                               SpecialKind kind)
{
    BranchPoint L = left, R = right;
    double hR = ds;
    Bisection out;
    const int n = p.nsys();
    for (int it = 0; it < p.nc.bisecmax && std::abs(hR) >= p.nc.dsminbis; ++it) {
        const double h = hR / 2;
        const Vec pred = bisection_predictor(p.sw.bifloc, L, R, hR, h);
        const NewtonResult nr = nloopext(p, pred, L.y, L.tau, h);
        ++out.solves;
        if (!nr.converged) {
            out.ok = false;
            break;
        }
        BranchPoint M;
        M.y = nr.y;
        const Vec U = with_active(p, p.u, M.y);
        try {
            M.tau = tangent(p, U, L.tau);
        } catch (const SingularMatrixError&) {
            out.ok = false;
            break;
        }
        bool same_as_left;
        if (kind == SpecialKind::bifurcation) {
            M.ineg = stability_index(p, U);
            same_as_left = M.ineg == L.ineg;
        } else {
            M.ineg = L.ineg;
            same_as_left = sign_of(M.tau[n]) == sign_of(L.tau[n]);
        }
        if (same_as_left) {
            L = M;
            hR -= h;
        } else {
            R = M;
            hR = h;
        }
    }
    out.bracket = std::abs(hR);
    if (kind == SpecialKind::bifurcation)
        out.point = R;
    else
        out.point = std::abs(L.tau[n]) <= std::abs(R.tau[n]) ? L : R;
    return out;
}

int cont(ProblemState& p, const ContOptions& opt)
{
    p.check();
    if (!p.ops.ready)
        setfemops(p);
    const int n = p.nsys();
    const int nsteps = opt.nsteps >= 0 ? opt.nsteps : p.nc.nsteps;
    const bool spectra = (p.sw.spcalc != 0 || p.sw.bifcheck != 0) && !p.extended();
    p.sol.stop.clear();

    if (p.fuha.post_step)
        p.fuha.post_step(p);

    const bool start = p.sol.ptype == -1 || p.sol.ptype == -2 || p.branch.empty();
    if (p.sol.ptype == -1 || (p.tau.size() != n + 1 && p.sol.ptype != -2)) {
        const NewtonResult nr = nloop(p, active(p, p.u));
        if (!nr.converged) {
            p.sol.stop = "initial point did not converge (residual " + std::to_string(nr.res) + ")";
            return 0;
        }
        p.u = with_active(p, p.u, nr.y);
        p.sol.res = nr.res;
    }
    if (p.tau.size() != n + 1) {
        Vec e = Vec::Zero(n + 1);
        e[n] = 1;
        try {
            p.tau = tangent(p, p.u, e);
        } catch (const SingularMatrixError&) {
            // at a fold the parameter border is singular; a generic border is not
            std::mt19937 gen(7);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            Vec r(n + 1);
            for (Eigen::Index i = 0; i < r.size(); ++i)
                r[i] = dist(gen);
            try {
                p.tau = tangent(p, p.u, r);
                if (p.tau[n] < 0)
                    p.tau = -p.tau;
            } catch (const SingularMatrixError&) {
                p.sol.stop = "could not compute an initial tangent";
                return 0;
            }
        }
    }
    // a swibra guess sits on a zero eigenvalue and has a degenerate primary
    // tangent component: no detection on the first step away from it
    bool from_guess = p.sol.ptype == -2;
    if (start) {
        p.sol.ineg = (spectra && p.sol.ptype != -2) ? stability_index(p, p.u) : -1;
        const int ptype = p.sol.ptype == -2 ? -2 : -1;
        p.branch.push_back(make_record(p, ptype));
        store_point(p, "pt" + std::to_string(p.sol.count));
        ++p.sol.count;
    }

    double ds = p.nc.ds;
    int accepted = 0, nbif = 0;
    while (accepted < nsteps) {
        if (p.sol.count >= p.nc.ntot) {
            p.sol.stop = "ntot reached";
            break;
        }
        const Vec y0 = active(p, p.u);
        const Vec tau0 = p.tau;
        const bool natural = p.sw.para == 0 || (p.sw.para == 1 && std::abs(tau0[n]) > p.nc.lamdtol);
        const Vec pred = y0 + ds * tau0;
        NewtonResult nr = natural ? nloop(p, pred) : nloopext(p, pred, y0, tau0, ds);
        Vec U1, tau1;
        bool ok = nr.converged;
        if (ok) {
            U1 = with_active(p, p.u, nr.y);
            try {
                tau1 = tangent(p, U1, tau0);
            } catch (const SingularMatrixError&) {
                ok = false;
            }
        }
        if (!ok) {
            bool stop = false;
            ds = stepsize_update(p.nc, ds, nr.iter, true, tau0[n], stop);
            if (stop) {
                p.sol.stop = "corrector failed at minimal step size";
                break;
            }
            continue;
        }

        const int ineg0 = p.sol.ineg;
        const int ineg1 = spectra ? stability_index(p, U1) : -1;
        const bool fold = p.sw.foldcheck != 0 && !from_guess && sign_of(tau1[n]) * sign_of(tau0[n]) < 0;
        const bool bif = p.sw.bifcheck != 0 && ineg0 >= 0 && ineg1 >= 0 && ineg1 != ineg0;

        if (fold || bif) {
            const SpecialKind kind = fold ? SpecialKind::fold : SpecialKind::bifurcation;
            const Bisection b = bisect_special_point(p, {y0, tau0, ineg0}, {nr.y, tau1, ineg1}, ds, kind);
            if (!b.ok)
                std::cerr << "warning: corrector failed during localization; keeping best bracket end\n";
            const Vec Ub = with_active(p, p.u, b.point.y);
            if (fold) {
                ++p.sol.fcount;
                record_special(p, Ub, b.point.tau, b.point.ineg, 2, 0, "fpt" + std::to_string(p.sol.fcount));
            } else {
                ++p.sol.bcount;
                ++nbif;
                record_special(p, Ub, b.point.tau, b.point.ineg, 1, 0, "bpt" + std::to_string(p.sol.bcount));
            }
        }

        const double a0 = y0[n], a1 = nr.y[n];
        std::vector<double> targets;
        for (double t : p.usrlam)
            if ((a0 - t) * (a1 - t) < 0 || a1 == t)
                targets.push_back(t);
        std::sort(targets.begin(), targets.end(), [&](double x, double y) { return (x - a0) * (a1 - a0) < (y - a0) * (a1 - a0); });
        for (double t : targets) {
            const double s = (t - a0) / (a1 - a0);
            Vec yt = y0 + s * (nr.y - y0);
            yt[n] = t;
            const NewtonResult nt = nloop(p, yt);
            if (!nt.converged) {
                std::cerr << "warning: no solution found at target value " << t << "\n";
                continue;
            }
            const Vec Ut = with_active(p, p.u, nt.y);
            const int it = spectra ? stability_index(p, Ut) : -1;
            record_special(p, Ut, tau0 + s * (tau1 - tau0), it, 0, 1, "pt" + std::to_string(p.sol.count));
        }

        if (opt.observer)
            opt.observer(p, StepInfo{y0, tau0, nr.y, tau1, ds, !natural, nr.res});

        p.u = U1;
        p.tau = tau1;
        p.sol.ineg = ineg1;
        p.sol.iter = nr.iter;
        p.sol.res = nr.res;
        p.sol.lamd = tau1[n];
        p.sol.ptype = 0;
        from_guess = false;
        p.branch.push_back(make_record(p, 0));
        store_point(p, "pt" + std::to_string(p.sol.count));
        ++p.sol.count;
        ++accepted;
        if (p.fuha.post_step)
            p.fuha.post_step(p);

        bool stop = false;
        ds = stepsize_update(p.nc, ds, nr.iter, false, tau1[n], stop);
        p.nc.ds = ds;

        if (a1 < p.nc.lammin || a1 > p.nc.lammax) {
            p.sol.stop = "primary parameter left [lammin, lammax]";
            break;
        }
        if (opt.stop_after_bif > 0 && nbif >= opt.stop_after_bif) {
            p.sol.stop = "requested number of bifurcations found";
            break;
        }
    }
    if (p.sol.stop.empty())
        p.sol.stop = "nsteps done";
    p.nc.ds = ds;
    if (!p.dir.empty())
        write_branch_csv(p, p.dir + "/branch.csv");
    return accepted;
}

} // namespace p2p
