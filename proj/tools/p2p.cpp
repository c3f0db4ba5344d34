// Command-line driver: continuation runs, branch switching, time stepping,
// plots and derivative checks on the registered demos.

#include "p2p/io.hpp"
#include "p2p/scenarios.hpp"
#include "p2p/spcont.hpp"
#include "p2p/switching.hpp"
#include "p2p/timeint.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace p2p;

namespace {

struct RunArgs {
    std::string demo, config, out, variant;
    int steps = -1;
    double ds = 0;
    std::vector<std::string> params;
    std::vector<double> usrlam;
};

// "k=v" where k is a 1-based index or a parameter name.
std::pair<int, double> parse_param(const std::string& kv, const std::vector<std::string>& names)
{
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw DomainError("--param expects k=v, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const double value = std::stod(kv.substr(eq + 1));
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == key)
            return {static_cast<int>(i) + 1, value};
    return {std::stoi(key), value};
}

ProblemState build(const RunArgs& a)
{
    DemoOptions opt = a.config.empty() ? DemoOptions{} : load_demo_config(a.config);
    if (!a.variant.empty())
        opt.variant = a.variant;
    const std::vector<std::string> names = make_demo(a.demo, opt).param_names;
    for (const auto& kv : a.params) {
        const auto [k, v] = parse_param(kv, names);
        opt.par[k] = v;
    }
    ProblemState p = make_demo(a.demo, opt);
    if (a.ds != 0)
        p.nc.ds = a.ds;
    if (!a.usrlam.empty())
        p.usrlam = a.usrlam;
    return p;
}

void into(ProblemState& p, const std::string& out)
{
    std::filesystem::create_directories(out);
    p.dir = out;
}

void report(const ProblemState& p)
{
    std::cout << "branch " << p.dir << ": " << p.branch.size() << " points, stop: " << p.sol.stop << "\n";
    for (const auto& r : p.branch)
        if (r.ptype == 1 || r.ptype == 2)
            std::cout << (r.ptype == 1 ? "  bifurcation" : "  fold") << " at " << p.param_names[p.ilam.front() - 1]
                      << " = " << std::setprecision(10) << r.params[0] << " (ineg " << r.ineg << ")\n";
}

std::vector<int> parse_list(const std::string& s)
{
    std::vector<int> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(std::stoi(item));
    return v;
}

void run_cont(ProblemState& p, int steps)
{
    ContOptions o;
    o.nsteps = steps;
    cont(p, o);
    report(p);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"p2p: continuation and bifurcation for 2D elliptic systems"};
    app.require_subcommand(1);
    const std::string root = output_root();

    RunArgs ra;
    auto* run = app.add_subcommand("run", "continue a demo from its start point");
    run->add_option("demo", ra.demo)->required();
    run->add_option("--config", ra.config, "demo config (json)");
    run->add_option("--variant", ra.variant);
    run->add_option("--steps", ra.steps);
    run->add_option("--ds", ra.ds);
    run->add_option("--out", ra.out);
    run->add_option("--param", ra.params, "k=v, k index or name");
    run->add_option("--usrlam", ra.usrlam)->delimiter(',');

    int nbif = 3;
    auto* fb = app.add_subcommand("findbif", "continue until nbif bifurcations are located");
    fb->add_option("demo", ra.demo)->required();
    fb->add_option("--nbif", nbif);
    fb->add_option("--config", ra.config);
    fb->add_option("--steps", ra.steps);
    fb->add_option("--out", ra.out);
    fb->add_option("--param", ra.params);

    std::string dir, point, out;
    double ds = 0;
    int steps = -1;
    auto point_args = [&](CLI::App* c) {
        c->add_option("dir", dir)->required();
        c->add_option("point", point)->required();
        c->add_option("--out", out)->required();
        c->add_option("--steps", steps);
    };

    auto* sb = app.add_subcommand("swibra", "switch branches at a bifurcation point");
    point_args(sb);
    sb->add_option("--ds", ds)->required();
    bool foldcheck = false;
    sb->add_flag("--foldcheck", foldcheck);

    std::string ilam_s;
    auto* sp = app.add_subcommand("swipar", "change the active parameters at a point");
    point_args(sp);
    sp->add_option("--ilam", ilam_s, "comma separated, primary first")->required();
    sp->add_option("--ds", ds);

    int extra = 0;
    auto* sc = app.add_subcommand("spcont", "continue a fold or branch point in an extra parameter");
    point_args(sc);
    sc->add_option("--extra", extra)->required();
    sc->add_option("--ds", ds);

    int primary = 0;
    auto* se = app.add_subcommand("spcontexit", "return from the extended system");
    point_args(se);
    se->add_option("--primary", primary)->required();
    se->add_option("--ds", ds);

    double dt = 0.01;
    int nt = 100, pmod = 10;
    auto time_args = [&](CLI::App* c) {
        c->add_option("dir", dir)->required();
        c->add_option("point", point)->required();
        c->add_option("--dt", dt);
        c->add_option("--nt", nt);
        c->add_option("--pmod", pmod);
        c->add_option("--out", out);
    };
    auto* ti = app.add_subcommand("tint", "linearly implicit Euler, matrices reassembled each step");
    time_args(ti);
    auto* tis = app.add_subcommand("tints", "semilinear time stepping with one factorization");
    time_args(tis);

    auto* pl = app.add_subcommand("plot", "branch diagrams and solution plots");
    pl->require_subcommand(1);
    std::vector<std::string> dirs;
    std::string xcol, ycol = "l2norm", file;
    auto* pb = pl->add_subcommand("branch", "branch diagram from branch.csv files");
    pb->add_option("dirs", dirs)->required();
    pb->add_option("--x", xcol, "default: primary parameter");
    pb->add_option("--y", ycol);
    pb->add_option("--out", file);
    int component = 1;
    auto* ps = pl->add_subcommand("sol", "heatmap of one solution component");
    ps->add_option("dir", dir)->required();
    ps->add_option("point", point)->required();
    ps->add_option("--component", component);
    ps->add_option("--out", file);

    auto* ck = app.add_subcommand("check", "Jacobian and second-derivative finite-difference checks");
    ck->add_option("demo", ra.demo)->required();
    ck->add_option("--config", ra.config);

    std::string cmp = "l2norm";
    auto* ex = app.add_subcommand("export", "merge branch tables into one CSV");
    ex->add_option("dirs", dirs)->required();
    ex->add_option("--cmp", cmp, "column copied to the trailing 'cmp' column");
    ex->add_option("--out", file);

    auto* scn = app.add_subcommand("scenario", "run a demo's scripted workflow");
    scn->add_option("demo", ra.demo)->required();
    scn->add_option("--config", ra.config);
    scn->add_option("--out", ra.out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run || *fb) {
            ProblemState p = build(ra);
            into(p, ra.out.empty() ? root + "/tr" : ra.out);
            if (*run)
                run_cont(p, ra.steps);
            else {
                findbif(p, nbif, ra.steps);
                report(p);
            }
        } else if (*sb) {
            ProblemState p = load_point(dir, point);
            const SwibraInfo info = swibra(p, ds);
            std::cout << "kernel eigenvalues " << info.mu1 << ", " << info.mu2 << "\n";
            if (foldcheck)
                p.sw.foldcheck = 1;
            into(p, out);
            run_cont(p, steps);
        } else if (*sp) {
            ProblemState p = load_point(dir, point);
            swipar(p, parse_list(ilam_s));
            reset_branch(p);
            if (ds != 0)
                p.nc.ds = ds;
            into(p, out);
            run_cont(p, steps);
        } else if (*sc) {
            ProblemState p = load_point(dir, point);
            const SpcontInfo info = spcontini(p, extra);
            std::cout << "kernel eigenvalues " << info.mu1 << ", " << info.mu2 << "\n";
            if (ds != 0)
                p.nc.ds = ds;
            into(p, out);
            run_cont(p, steps);
        } else if (*se) {
            ProblemState p = load_point(dir, point);
            spcontexit(p, primary);
            if (ds != 0)
                p.nc.ds = ds;
            into(p, out);
            run_cont(p, steps);
        } else if (*ti || *tis) {
            ProblemState p = load_point(dir, point);
            TintOptions o;
            o.pmod = pmod;
            o.out = out;
            const TimeSeries ts = *ti ? tint(p, dt, nt, o) : tints(p, dt, nt, o);
            for (std::size_t i = 0; i < ts.t.size(); ++i)
                std::cout << "t = " << ts.t[i] << "  |G(u)| = " << ts.res[i] << "\n";
            std::cout << ts.steps << " steps, " << ts.factorizations << " factorizations\n";
            if (!out.empty()) {
                p.sol.ptype = -1;
                save_point(p, out, "end");
            }
        } else if (*pb) {
            std::vector<PlotSeries> series;
            std::string x = xcol;
            for (const auto& d : dirs) {
                const BranchTable t = read_branch_csv(d + "/branch.csv");
                if (x.empty())
                    x = t.columns.at(2);
                series.push_back(series_from_table(t, x, ycol, std::filesystem::path(d).filename().string()));
            }
            const std::string path = file.empty() ? dirs.front() + "/branch.svg" : file;
            plot_branch_svg(series, x, ycol, path);
            std::cout << "wrote " << path << "\n";
        } else if (*ps) {
            const ProblemState p = load_point(dir, point);
            const std::string path = file.empty() ? dir + "/" + point + ".svg" : file;
            plot_solution_svg(p, component, path);
            std::cout << "wrote " << path << "\n";
        } else if (*ck) {
            const ProblemState p = build(ra);
            Vec U = p.u;
            for (int i = 0; i < p.nu; ++i)
                U[i] += 0.1 * std::sin(0.37 * i + 0.2);
            const JacCheck jc = jaccheck(p, U);
            const bool jac_ok = jc.maxdiff <= 1e-5;
            std::cout << "jaccheck max-entry difference " << jc.maxdiff << (jac_ok ? "  ok" : "  FAIL") << "\n";
            bool sp_ok = true;
            if (p.fuha.spjac) {
                const KernelPair k = pde_kernel(p, U);
                const JacCheck sc2 = spjaccheck(p, U, k.phi);
                sp_ok = sc2.maxdiff <= 1e-5;
                std::cout << "spjac max-entry difference " << sc2.maxdiff << (sp_ok ? "  ok" : "  FAIL") << "\n";
            } else {
                std::cout << "spjac not provided\n";
            }
            return jac_ok && sp_ok ? 0 : 1;
        } else if (*ex) {
            BranchTable all;
            for (std::size_t k = 0; k < dirs.size(); ++k) {
                const BranchTable t = read_branch_csv(dirs[k] + "/branch.csv");
                const auto it = std::find(t.columns.begin(), t.columns.end(), cmp);
                if (it == t.columns.end())
                    throw DomainError("export: no column '" + cmp + "' in " + dirs[k]);
                if (t.rows.empty())
                    throw DomainError("export: empty branch in " + dirs[k]);
                if (all.columns.empty()) {
                    all.columns = {"branch"};
                    all.columns.insert(all.columns.end(), t.columns.begin(), t.columns.end());
                    all.columns.push_back("cmp");
                } else if (all.columns.size() != t.columns.size() + 2) {
                    throw DomainError("export: branches have different columns");
                }
                const auto ic = static_cast<std::size_t>(it - t.columns.begin());
                for (const auto& r : t.rows) {
                    std::vector<double> row{static_cast<double>(k)};
                    row.insert(row.end(), r.begin(), r.end());
                    row.push_back(r[ic]);
                    all.rows.push_back(row);
                }
            }
            std::ostream* os = &std::cout;
            std::ofstream f;
            if (!file.empty()) {
                f.open(file);
                os = &f;
            }
            *os << std::setprecision(17);
            for (std::size_t i = 0; i < all.columns.size(); ++i)
                *os << (i ? "," : "") << all.columns[i];
            *os << "\n";
            for (const auto& r : all.rows) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    *os << (i ? "," : "") << r[i];
                *os << "\n";
            }
        } else if (*scn) {
            const DemoOptions opt = ra.config.empty() ? DemoOptions{} : load_demo_config(ra.config);
            const ScenarioReport rep = run_scenario(ra.demo, ra.out.empty() ? root + "/" + ra.demo : ra.out, opt);
            for (const auto& [k, v] : rep.values)
                std::cout << k << " = " << std::setprecision(10) << v << "\n";
            std::cout << "branches:";
            for (const auto& b : rep.branches)
                std::cout << " " << b;
            std::cout << "\n" << rep.seconds << " s\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
