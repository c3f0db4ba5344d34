#include "p2p/timeint.hpp"

#include "p2p/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

namespace p2p {

namespace {

void write_snapshot(const ProblemState& p, const std::string& out, int step, double t)
{
    namespace fs = std::filesystem;
    fs::create_directories(out);
    const std::string path = out + "/t" + std::to_string(step) + ".dat";
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        f << std::setprecision(17) << "time " << t << "\nstep " << step << "\nu " << p.u.size() << "\n";
        for (Eigen::Index i = 0; i < p.u.size(); ++i)
            f << p.u[i] << "\n";
    }
    fs::rename(tmp, path);
}

void start_series(ProblemState& p, const TintOptions& opt, TimeSeries& ts)
{
    if (!opt.out.empty()) {
        std::filesystem::create_directories(opt.out + "/pre");
        save_point(p, opt.out + "/pre", "pt0");
    }
    if (opt.diagnostics) {
        ts.t.push_back(0);
        ts.res.push_back(pde_residual(p, p.pde(p.u), p.par()).lpNorm<Eigen::Infinity>());
    }
}

void after_step(ProblemState& p, const TintOptions& opt, TimeSeries& ts, int step, double t)
{
    ts.steps = step;
    if (opt.pmod <= 0 || step % opt.pmod != 0)
        return;
    if (opt.diagnostics) {
        ts.t.push_back(t);
        ts.res.push_back(pde_residual(p, p.pde(p.u), p.par()).lpNorm<Eigen::Infinity>());
    }
    if (!opt.out.empty())
        write_snapshot(p, opt.out, step, t);
}

} // namespace

TimeSeries tint(ProblemState& p, double dt, int nt, const TintOptions& opt)
{
    if (p.extended() || p.nq > 0)
        throw DomainError("tint: needs a plain PDE state (no auxiliary equations)");
    if (!p.fuha.coeffs)
        throw DomainError("tint: problem has no coefficient provider");
    if (!p.ops.ready)
        setfemops(p);
    const Periodization& per = p.ops.per;
    const Vec par = p.par();
    TimeSeries ts;
    start_series(p, opt, ts);
    double t = 0;
    for (int step = 1; step <= nt; ++step) {
        const Vec uf = extend_vector(p.pde(p.u), per);
        const CoeffTensors co = p.fuha.coeffs(p, uf, par);
        const InteriorOperators io = assemble_interior(p.mesh, co);
        const BoundaryOperators bo = assemble_boundary(p.mesh, p.bc, uf, par, per.identified_segments());
        SpMat L = io.K + io.Ma + io.Kadv + bo.Q;
        Vec load = bo.Gb;
        if (!co.f.empty())
            load += assemble_load(p.mesh, co.f, p.neq);
        if (co.f_nodal.size())
            load += p.ops.M_full * co.f_nodal;
        const SpMat A = periodize_operator(SpMat(p.ops.M_full + dt * L), per);
        const Vec rhs = periodize_vector(Vec(p.ops.M_full * uf + dt * load), per);
        LuSolver lu(A);
        ++ts.factorizations;
        p.u.head(p.nu) = lu.solve(rhs);
        t += dt;
        after_step(p, opt, ts, step, t);
    }
    return ts;
}

TimeSeries tints(ProblemState& p, double dt, int nt, const TintOptions& opt, const SpMat* L_override)
{
    if (p.extended() || p.nq > 0)
        throw DomainError("tints: needs a plain PDE state (no auxiliary equations)");
    if (!p.fuha.nodal_f || (!L_override && !p.fuha.lin_op))
        throw DomainError("tints: problem has no semilinear splitting");
    if (!p.ops.ready)
        setfemops(p);
    const Vec par = p.par();
    const SpMat L = L_override ? *L_override : p.fuha.lin_op(p, par);
    const Vec b = p.fuha.lin_load ? p.fuha.lin_load(p, par) : Vec::Zero(p.nu);
    const SpMat& M = p.ops.M;
    LuSolver lu(SpMat(M + dt * L));
    TimeSeries ts;
    ts.factorizations = 1;
    start_series(p, opt, ts);
    double t = 0;
    for (int step = 1; step <= nt; ++step) {
        const Vec u = p.pde(p.u);
        const Vec rhs = M * u + dt * (M * p.fuha.nodal_f(p, u, par) + b);
        p.u.head(p.nu) = lu.solve(rhs);
        t += dt;
        after_step(p, opt, ts, step, t);
    }
    return ts;
}

} // namespace p2p
