#include "p2p/demos.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

namespace p2p {

namespace {

using Params = const Vec&;

// Block matrix with (i,j) block M1 * diag(d[i*neq+j]); empty entries are zero blocks.
SpMat block_mass_diag(const ProblemState& p, const std::vector<Vec>& d)
{
    const int neq = p.neq;
    const Eigen::Index n1 = p.nu / neq;
    const SpMat M1 = p.ops.M.topLeftCorner(n1, n1);
    Triplets trip;
    for (int i = 0; i < neq; ++i)
        for (int j = 0; j < neq; ++j) {
            const Vec& v = d[static_cast<std::size_t>(i * neq + j)];
            if (v.size() == 0)
                continue;
            for (Eigen::Index k = 0; k < M1.outerSize(); ++k)
                for (SpMat::InnerIterator it(M1, k); it; ++it)
                    if (v[it.col()] != 0)
                        trip.emplace_back(i * n1 + it.row(), j * n1 + it.col(), it.value() * v[it.col()]);
        }
    SpMat B(p.nu, p.nu);
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

Vec concat(const std::vector<Vec>& parts)
{
    Eigen::Index n = 0;
    for (const auto& v : parts)
        n += v.size();
    Vec out(n);
    Eigen::Index k = 0;
    for (const auto& v : parts) {
        out.segment(k, v.size()) = v;
        k += v.size();
    }
    return out;
}

// Phase condition <d_axis u_old, u_old - u> on the PDE part.
Vec phase_direction(const ProblemState& p, const SpMat& Kaxis)
{
    const Vec uo = p.u_old.size() >= p.nu ? Vec(p.u_old.head(p.nu)) : Vec(p.u.head(p.nu));
    return -(Kaxis * uo);
}

void install_phase(ProblemState& p, bool along_y)
{
    p.fuha.qf = [along_y](const ProblemState& s, const Vec& u, Params) {
        const Vec g = phase_direction(s, along_y ? s.ops.Ky : s.ops.Kx);
        const Vec uo = s.u_old.size() >= s.nu ? Vec(s.u_old.head(s.nu)) : Vec(s.u.head(s.nu));
        Vec q(1);
        q[0] = g.dot(uo - u);
        return q;
    };
    p.fuha.qjac = [along_y](const ProblemState& s, const Vec&, Params) {
        const Vec g = phase_direction(s, along_y ? s.ops.Ky : s.ops.Kx);
        Triplets trip;
        for (Eigen::Index j = 0; j < g.size(); ++j)
            if (g[j] != 0)
                trip.emplace_back(0, j, -g[j]);
        SpMat J(1, g.size());
        J.setFromTriplets(trip.begin(), trip.end());
        return J;
    };
    p.fuha.post_step = [](ProblemState& s) { s.u_old = s.u; };
}

void finish(ProblemState& p, const DemoOptions& opt, const MeshSpec& mesh)
{
    p.variant = opt.variant;
    p.mesh_spec = opt.mesh ? *opt.mesh : mesh;
    for (const auto& [k, v] : opt.par) {
        if (k < 1 || k > p.npar)
            throw DomainError("parameter index " + std::to_string(k) + " out of range for " + p.demo);
        p.u[p.u.size() - p.npar + k - 1] = v;
    }
    apply_controls(p.nc, opt.nc);
    p.mesh = build_mesh(p.mesh_spec);
    setfemops(p);
}

// Initial vector of nu zeros (or constants) followed by the parameters.
Vec start_vector(const ProblemState& p, const std::vector<double>& fill, const std::vector<double>& par)
{
    const Eigen::Index n1 = p.mesh.np();
    Vec u(p.neq * n1 + static_cast<Eigen::Index>(par.size()));
    for (int i = 0; i < p.neq; ++i)
        u.segment(i * n1, n1).setConstant(fill[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k < par.size(); ++k)
        u[p.neq * n1 + static_cast<Eigen::Index>(k)] = par[k];
    return u;
}

// ---------------------------------------------------------------- acfold

// -c Lap u - lambda u - u^3 + gamma u^5 = 0, parameters (lambda, c, gamma)
Vec acfold_f(const Vec& u, Params par)
{
    return (par[0] * u.array() + u.array().cube() - par[2] * u.array().pow(5)).matrix();
}
Vec acfold_fu(const Vec& u, Params par)
{
    return (par[0] + 3.0 * u.array().square() - 5.0 * par[2] * u.array().pow(4)).matrix();
}
Vec acfold_fuu(const Vec& u, Params par)
{
    return (6.0 * u.array() - 20.0 * par[2] * u.array().cube()).matrix();
}

ProblemState make_acfold(const DemoOptions& opt)
{
    ProblemState p;
    p.demo = "acfold";
    p.neq = 1;
    p.npar = 3;
    p.param_names = {"lambda", "c", "gamma"};
    p.usrlam = {3.5, 4.0};
    p.nc.ds = 0.1;
    p.nc.dsmax = 0.2;
    p.nc.neig = 20;
    p.nc.lammin = -5;
    p.nc.lammax = 5;
    MeshSpec ms{1.0, 0.9, 60, 54, "rect"};
    apply_controls(p.nc, opt.nc);
    p.bc = BCSpec::dirichlet(1, p.nc.stiff_spring, Vec::Zero(1));

    p.fuha.sG = [](const ProblemState& s, const Vec& u, Params par) {
        return Vec(par[1] * (s.ops.K * u) + s.ops.Q * u - s.ops.M * acfold_f(u, par) - s.ops.Gb);
    };
    p.fuha.sGjac = [](const ProblemState& s, const Vec& u, Params par) {
        return SpMat(par[1] * s.ops.K + s.ops.Q - block_mass_diag(s, {acfold_fu(u, par)}));
    };
    p.fuha.lin_op = [](const ProblemState& s, Params par) { return SpMat(par[1] * s.ops.K + s.ops.Q); };
    p.fuha.lin_load = [](const ProblemState& s, Params) { return s.ops.Gb; };
    p.fuha.nodal_f = [](const ProblemState&, const Vec& u, Params par) { return acfold_f(u, par); };
    p.fuha.coeffs = [](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {par[1]});
        co.f_nodal = acfold_f(uf, par);
        return co;
    };
    p.fuha.jac_coeffs = [](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {par[1]});
        co.fu_nodal = acfold_fu(uf, par);
        return co;
    };
    p.fuha.spjac = [](const ProblemState& s, const Vec& u, Params par, const Vec& phi) {
        return SpMat(-block_mass_diag(s, {Vec(acfold_fuu(u, par).cwiseProduct(phi))}));
    };
    p.mesh = build_mesh(opt.mesh ? *opt.mesh : ms);
    p.u = start_vector(p, {0.0}, {1.0, 0.25, 1.0});
    finish(p, opt, ms);
    return p;
}

// ---------------------------------------------------------------- schnak

constexpr double schnak_d = 60;

// N(u,v) = (-u + u^2 v + sigma h^2, lambda - u^2 v - sigma h^2), h = u - 1/v;
// parameters (lambda, sigma, rho, s)
Vec schnak_N(const Vec& U, Params par)
{
    const Eigen::Index n = U.size() / 2;
    const auto u = U.head(n).array();
    const auto v = U.tail(n).array();
    const Eigen::ArrayXd h = u - 1.0 / v;
    const Eigen::ArrayXd s2 = par[1] * h.square();
    Vec out(2 * n);
    out.head(n) = (-u + u.square() * v + s2).matrix();
    out.tail(n) = (par[0] - u.square() * v - s2).matrix();
    return out;
}

// derivative blocks [N1u, N1v, N2u, N2v]
std::vector<Vec> schnak_NU(const Vec& U, Params par)
{
    const Eigen::Index n = U.size() / 2;
    const auto u = U.head(n).array();
    const auto v = U.tail(n).array();
    const Eigen::ArrayXd h = u - 1.0 / v;
    const Eigen::ArrayXd su = 2.0 * par[1] * h;
    const Eigen::ArrayXd sv = 2.0 * par[1] * h / v.square();
    return {(-1.0 + 2.0 * u * v + su).matrix(), (u.square() + sv).matrix(), (-2.0 * u * v - su).matrix(),
            (-u.square() - sv).matrix()};
}

// d/dU of (N_U phi), blocks [(1,u), (1,v), (2,u), (2,v)]
std::vector<Vec> schnak_NUU_phi(const Vec& U, Params par, const Vec& phi)
{
    const Eigen::Index n = U.size() / 2;
    const auto u = U.head(n).array();
    const auto v = U.tail(n).array();
    const auto p1 = phi.head(n).array();
    const auto p2 = phi.tail(n).array();
    const double sg = par[1];
    const Eigen::ArrayXd h = u - 1.0 / v;
    const Eigen::ArrayXd uu = 2.0 * v + 2.0 * sg;
    const Eigen::ArrayXd uv = 2.0 * u + 2.0 * sg / v.square();
    const Eigen::ArrayXd vv = 2.0 * sg * (1.0 / v.pow(4) - 2.0 * h / v.cube());
    const Eigen::ArrayXd a1 = uu * p1 + uv * p2;
    const Eigen::ArrayXd a2 = uv * p1 + vv * p2;
    return {a1.matrix(), a2.matrix(), (-a1).matrix(), (-a2).matrix()};
}

Vec schnak_diffusion(const ProblemState& s, Params par)
{
    const Eigen::Index n1 = s.nu / 2;
    Vec d(s.nu);
    d.head(n1).setConstant(par[2]);
    d.tail(n1).setConstant(par[2] * schnak_d);
    return d;
}

ProblemState make_schnak(const DemoOptions& opt)
{
    ProblemState p;
    p.demo = "schnak";
    p.neq = 2;
    p.npar = 4;
    p.param_names = {"lambda", "sigma", "rho", "s"};
    p.nc.ds = -0.02;
    p.nc.dsmax = 0.05;
    p.nc.neig = 10;
    p.nc.lammin = 0.5;
    p.nc.lammax = 10;
    p.nc.dlammax = 0.05;
    const double ly = std::numbers::pi / schnak_kc();
    MeshSpec ms{0.1, ly, 2, 60, "rect"};
    apply_controls(p.nc, opt.nc);
    p.bc = BCSpec::neumann(2);

    p.fuha.sG = [](const ProblemState& s, const Vec& u, Params par) {
        const Vec d = schnak_diffusion(s, par);
        return Vec(s.ops.K * d.cwiseProduct(u) + par[3] * (s.ops.Ky * u) - s.ops.M * schnak_N(u, par));
    };
    p.fuha.sGjac = [](const ProblemState& s, const Vec& u, Params par) {
        const Vec d = schnak_diffusion(s, par);
        return SpMat(s.ops.K * d.asDiagonal() + par[3] * s.ops.Ky - block_mass_diag(s, schnak_NU(u, par)));
    };
    p.fuha.lin_op = [](const ProblemState& s, Params par) {
        const Vec d = schnak_diffusion(s, par);
        return SpMat(s.ops.K * d.asDiagonal() + par[3] * s.ops.Ky);
    };
    p.fuha.nodal_f = [](const ProblemState&, const Vec& u, Params par) { return schnak_N(u, par); };
    auto tensors = [](Params par) {
        CoeffTensors co;
        co.neq = 2;
        co.c = CoeffTensors::isotropic(2, {par[2], par[2] * schnak_d});
        co.b.assign(8, 0.0);
        co.b[(0 * 2 + 0) * 2 + 1] = par[3];
        co.b[(1 * 2 + 1) * 2 + 1] = par[3];
        return co;
    };
    p.fuha.coeffs = [tensors](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co = tensors(par);
        co.f_nodal = schnak_N(uf, par);
        return co;
    };
    p.fuha.jac_coeffs = [tensors](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co = tensors(par);
        co.fu_nodal = concat(schnak_NU(uf, par));
        return co;
    };
    p.fuha.spjac = [](const ProblemState& s, const Vec& u, Params par, const Vec& phi) {
        return SpMat(-block_mass_diag(s, schnak_NUU_phi(u, par, phi)));
    };
    install_phase(p, true);

    p.mesh = build_mesh(opt.mesh ? *opt.mesh : ms);
    const double lam = opt.par.count(1) ? opt.par.at(1) : 3.4;
    p.u = start_vector(p, {lam, 1.0 / lam}, {lam, 0.0, 1.0, 0.0});
    finish(p, opt, ms);
    if (opt.variant == "travel")
        schnak_travel(p);
    return p;
}

// ---------------------------------------------------------------- bratu

// -Lap u + d (u - lambda e^u) = 0 with zero flux, parameters (lambda, d)
Vec bratu_f(const Vec& u, Params par)
{
    return (-par[1] * (u.array() - par[0] * u.array().exp())).matrix();
}
Vec bratu_fu(const Vec& u, Params par)
{
    return (-par[1] * (1.0 - par[0] * u.array().exp())).matrix();
}
Vec bratu_fuu(const Vec& u, Params par)
{
    return (par[1] * par[0] * u.array().exp()).matrix();
}

ProblemState make_bratu(const DemoOptions& opt)
{
    ProblemState p;
    p.demo = "bratu";
    p.neq = 1;
    p.npar = 2;
    p.param_names = {"lambda", "d"};
    p.nc.ds = 0.05;
    p.nc.dsmax = 0.1;
    p.nc.neig = 10;
    p.nc.lammin = -1;
    p.nc.lammax = 2;
    p.sw.foldcheck = 1;
    MeshSpec ms{0.5, 0.25, 20, 10, "rect"};
    apply_controls(p.nc, opt.nc);
    p.bc = BCSpec::neumann(1);

    p.fuha.sG = [](const ProblemState& s, const Vec& u, Params par) {
        return Vec(s.ops.K * u - s.ops.M * bratu_f(u, par));
    };
    p.fuha.sGjac = [](const ProblemState& s, const Vec& u, Params par) {
        return SpMat(s.ops.K - block_mass_diag(s, {bratu_fu(u, par)}));
    };
    p.fuha.lin_op = [](const ProblemState& s, Params) { return s.ops.K; };
    p.fuha.nodal_f = [](const ProblemState&, const Vec& u, Params par) { return bratu_f(u, par); };
    p.fuha.coeffs = [](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {1.0});
        co.f_nodal = bratu_f(uf, par);
        return co;
    };
    p.fuha.jac_coeffs = [](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {1.0});
        co.fu_nodal = bratu_fu(uf, par);
        return co;
    };
    p.fuha.spjac = [](const ProblemState& s, const Vec& u, Params par, const Vec& phi) {
        return SpMat(-block_mass_diag(s, {Vec(bratu_fuu(u, par).cwiseProduct(phi))}));
    };
    p.mesh = build_mesh(opt.mesh ? *opt.mesh : ms);
    p.u = start_vector(p, {0.0}, {0.0, 10.0});
    finish(p, opt, ms);
    return p;
}

// ---------------------------------------------------------------- nlbc

// -Lap u = 0 with n.grad u + q u = 0, q = lambda (0.5 + x + y)(1 - u)
ProblemState make_nlbc(const DemoOptions& opt)
{
    ProblemState p;
    p.demo = "nlbc";
    p.neq = 1;
    p.npar = 1;
    p.param_names = {"lambda"};
    p.sw.sfem = 0;
    p.nc.ds = 0.05;
    p.nc.dsmax = 0.1;
    p.nc.neig = 10;
    p.nc.lammin = -2;
    p.nc.lammax = 3;
    MeshSpec ms{1.0, 1.0, 32, 32, "disk"};
    apply_controls(p.nc, opt.nc);

    SegmentBC seg;
    seg.value = [](const BoundaryPoint& x, const Vec& u, Params par) {
        BcValue v{Mat::Constant(1, 1, par[0] * (0.5 + x.x + x.y) * (1.0 - u[0])), Vec::Zero(1)};
        return v;
    };
    seg.derivative = [](const BoundaryPoint& x, const Vec&, Params par) {
        BcDerivative d;
        d.dq = {Mat::Constant(1, 1, -par[0] * (0.5 + x.x + x.y))};
        d.dg = Mat::Zero(1, 1);
        return d;
    };
    p.bc.neq = 1;
    for (int s = 1; s <= 4; ++s)
        p.bc.segments[s] = seg;

    auto laplace = [](const ProblemState&, const Vec&, Params) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {1.0});
        return co;
    };
    p.fuha.coeffs = laplace;
    p.fuha.jac_coeffs = laplace;
    p.mesh = build_mesh(opt.mesh ? *opt.mesh : ms);
    p.u = start_vector(p, {0.0}, {0.1});
    finish(p, opt, ms);
    return p;
}

// ---------------------------------------------------------------- acfront

// -Lap u - lambda u (1 - u)(mu + u) - s d_x u = 0, parameters (lambda, mu, s)
Vec acfront_f(const Vec& u, Params par)
{
    const auto a = u.array();
    return (par[0] * a * (1.0 - a) * (par[1] + a)).matrix();
}
Vec acfront_fu(const Vec& u, Params par)
{
    const auto a = u.array();
    return (par[0] * (par[1] + 2.0 * (1.0 - par[1]) * a - 3.0 * a.square())).matrix();
}
Vec acfront_fuu(const Vec& u, Params par)
{
    return (par[0] * (2.0 * (1.0 - par[1]) - 6.0 * u.array())).matrix();
}

ProblemState make_acfront(const DemoOptions& opt)
{
    ProblemState p;
    p.demo = "acfront";
    p.neq = 1;
    p.npar = 3;
    p.param_names = {"lambda", "mu", "s"};
    p.nc.ds = 0.01;
    p.nc.dsmax = 0.1;
    p.nc.neig = 10;
    p.nc.lammin = 0.0;
    p.nc.lammax = 3.0;
    MeshSpec ms{2.5, 0.5, 100, 2, "rect"};
    apply_controls(p.nc, opt.nc);
    p.bc = BCSpec::neumann(1);

    p.fuha.sG = [](const ProblemState& s, const Vec& u, Params par) {
        return Vec(s.ops.K * u + par[2] * (s.ops.Kx * u) - s.ops.M * acfront_f(u, par));
    };
    p.fuha.sGjac = [](const ProblemState& s, const Vec& u, Params par) {
        return SpMat(s.ops.K + par[2] * s.ops.Kx - block_mass_diag(s, {acfront_fu(u, par)}));
    };
    p.fuha.lin_op = [](const ProblemState& s, Params par) { return SpMat(s.ops.K + par[2] * s.ops.Kx); };
    p.fuha.nodal_f = [](const ProblemState&, const Vec& u, Params par) { return acfront_f(u, par); };
    auto tensors = [](Params par) {
        CoeffTensors co;
        co.c = CoeffTensors::isotropic(1, {1.0});
        co.b = {par[2], 0.0};
        return co;
    };
    p.fuha.coeffs = [tensors](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co = tensors(par);
        co.f_nodal = acfront_f(uf, par);
        return co;
    };
    p.fuha.jac_coeffs = [tensors](const ProblemState&, const Vec& uf, Params par) {
        CoeffTensors co = tensors(par);
        co.fu_nodal = acfront_fu(uf, par);
        return co;
    };
    p.fuha.spjac = [](const ProblemState& s, const Vec& u, Params par, const Vec& phi) {
        return SpMat(-block_mass_diag(s, {Vec(acfront_fuu(u, par).cwiseProduct(phi))}));
    };
    install_phase(p, false);
    p.fuha.outfu = [](const ProblemState& s) {
        const Vec u = s.u.head(s.nu);
        return std::vector<double>{u.maxCoeff(), u.minCoeff()};
    };
    p.fuha.out_names = {"max", "min"};

    p.mesh = build_mesh(opt.mesh ? *opt.mesh : ms);
    p.u = start_vector(p, {0.0}, {0.01, 1.0, 0.0});
    finish(p, opt, ms);
    if (opt.variant == "front")
        acfront_freeze(p);
    return p;
}

} // namespace

double schnak_kc()
{
    return std::sqrt(std::sqrt(2.0) - 1.0);
}

void apply_controls(Controls& nc, const std::map<std::string, double>& values)
{
    for (const auto& [k, v] : values) {
        if (k == "tol") nc.tol = v;
        else if (k == "imax") nc.imax = static_cast<int>(v);
        else if (k == "del") nc.del = v;
        else if (k == "dsmin") nc.dsmin = v;
        else if (k == "dsmax") nc.dsmax = v;
        else if (k == "ds") nc.ds = v;
        else if (k == "dsinciter") nc.dsinciter = static_cast<int>(v);
        else if (k == "dsincfac") nc.dsincfac = v;
        else if (k == "dlammax") nc.dlammax = v;
        else if (k == "lamdtol") nc.lamdtol = v;
        else if (k == "dsminbis") nc.dsminbis = v;
        else if (k == "bisecmax") nc.bisecmax = static_cast<int>(v);
        else if (k == "nsteps") nc.nsteps = static_cast<int>(v);
        else if (k == "ntot") nc.ntot = static_cast<int>(v);
        else if (k == "neig") nc.neig = static_cast<int>(v);
        else if (k == "lammin") nc.lammin = v;
        else if (k == "lammax") nc.lammax = v;
        else if (k == "xi") nc.xi = v;
        else if (k == "xiq") nc.xiq = v;
        else if (k == "stiff_spring") nc.stiff_spring = v;
        else throw DomainError("unknown control '" + k + "'");
    }
}

DemoOptions load_demo_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("config " + path + ": " + e.what());
    }
    DemoOptions opt;
    opt.variant = j.value("variant", "");
    if (j.contains("mesh")) {
        const auto& m = j["mesh"];
        MeshSpec ms;
        ms.lx = m.at("lx").get<double>();
        ms.ly = m.at("ly").get<double>();
        ms.nx = m.at("nx").get<int>();
        ms.ny = m.at("ny").get<int>();
        ms.map = m.value("map", "rect");
        opt.mesh = ms;
    }
    if (j.contains("par"))
        for (const auto& [k, v] : j["par"].items())
            opt.par[std::stoi(k)] = v.get<double>();
    if (j.contains("nc"))
        for (const auto& [k, v] : j["nc"].items())
            opt.nc[k] = v.get<double>();
    if (j.contains("scenario"))
        for (const auto& [k, v] : j["scenario"].items())
            opt.scenario[k] = v.get<double>();
    return opt;
}

std::vector<std::string> demo_names()
{
    return {"acfold", "schnak", "bratu", "nlbc", "acfront"};
}

ProblemState make_demo(const std::string& name, const DemoOptions& opt)
{
    if (name == "acfold") return make_acfold(opt);
    if (name == "schnak") return make_schnak(opt);
    if (name == "bratu") return make_bratu(opt);
    if (name == "nlbc") return make_nlbc(opt);
    if (name == "acfront") return make_acfront(opt);
    throw DomainError("unknown demo '" + name + "'");
}

void acfront_freeze(ProblemState& p)
{
    if (p.demo != "acfront")
        throw DomainError("acfront_freeze: not an acfront state");
    p.variant = "front";
    p.nq = 1;
    p.ilam = {2, 3};
    reset_window(p.nc);
    p.u_old = p.u;
    p.sw.bifcheck = 0;
    p.sw.spcalc = 0;
    reset_branch(p);
}

void acfront_orient(ProblemState& p)
{
    const Mesh& m = p.mesh;
    double left = 0, right = 0;
    int nl = 0, nr = 0;
    const Vec uf = extend_vector(p.u.head(p.nu), p.ops.per);
    for (int i = 0; i < m.np(); ++i) {
        if (m.points[i][0] == -m.lx) { left += uf[i]; ++nl; }
        if (m.points[i][0] == m.lx) { right += uf[i]; ++nr; }
    }
    if (left / nl < right / nr) {
        p.u.head(p.nu) = -p.u.head(p.nu);
        if (p.tau.size())
            p.tau.head(p.nu) = -p.tau.head(p.nu);
    }
}

void schnak_travel(ProblemState& p)
{
    if (p.demo != "schnak")
        throw DomainError("schnak_travel: not a Schnakenberg state");
    if (p.sw.bcper == 0)
        rec2per(p, PeriodicKind::top_bottom);
    p.variant = "travel";
    p.nq = 1;
    p.ilam = {4, 3};
    reset_window(p.nc);
    p.u_old = p.u;
    p.sw.bifcheck = 0;
    reset_branch(p);
}

} // namespace p2p
