#include "p2p/scenarios.hpp"

#include "p2p/io.hpp"
#include "p2p/spcont.hpp"
#include "p2p/switching.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

namespace p2p {

namespace {

double knob(const DemoOptions& opt, const std::string& key, double fallback)
{
    const auto it = opt.scenario.find(key);
    return it == opt.scenario.end() ? fallback : it->second;
}

int iknob(const DemoOptions& opt, const std::string& key, int fallback)
{
    return static_cast<int>(knob(opt, key, fallback));
}

// Continuation into root/name, starting from a fresh directory.
struct Runner {
    std::string root;
    ScenarioReport& rep;

    std::string dir(const std::string& name) const { return root + "/" + name; }

    void fresh(ProblemState& p, const std::string& name)
    {
        std::filesystem::remove_all(dir(name));
        std::filesystem::create_directories(dir(name));
        p.dir = dir(name);
        rep.branches.push_back(name);
    }

    ContOptions watch(int nsteps)
    {
        ContOptions o;
        o.nsteps = nsteps;
        o.observer = [this](const ProblemState& q, const StepInfo& s) {
            auto& v = rep.values;
            v["max_residual"] = std::max(v["max_residual"], s.res);
            const Vec w = product_weights(q).cwiseProduct(s.tau0);
            if (s.arclength)
                v["max_arclength_defect"] = std::max(v["max_arclength_defect"], std::abs(w.dot(s.y1 - s.y0) - s.ds));
            v["min_tangent_dot"] = std::min(v["min_tangent_dot"], w.dot(s.tau1));
            v["steps"] += 1;
        };
        return o;
    }

    int run(ProblemState& p, const std::string& name, int nsteps, int stop_after_bif = -1)
    {
        fresh(p, name);
        ContOptions o = watch(nsteps);
        o.stop_after_bif = stop_after_bif;
        return cont(p, o);
    }

    void find(ProblemState& p, const std::string& name, int nbif, int nsteps)
    {
        fresh(p, name);
        findbif(p, nbif, watch(nsteps));
    }

    ProblemState load(const std::string& name, const std::string& point) const { return load_point(dir(name), point); }
};

// First point whose primary parameter hit a usrlam target, or the last point.
std::string target_point(const ProblemState& p)
{
    for (const auto& r : p.branch)
        if (r.target == 1)
            return "pt" + std::to_string(r.count);
    return "pt" + std::to_string(p.branch.back().count);
}

void record_specials(ScenarioReport& rep, const ProblemState& p, const std::string& prefix)
{
    int nb = 0, nf = 0;
    for (const auto& r : p.branch) {
        if (r.ptype == 1)
            rep.values[prefix + "bif" + std::to_string(++nb)] = r.params[0];
        else if (r.ptype == 2)
            rep.values[prefix + "fold" + std::to_string(++nf)] = r.params[0];
    }
}

void acfold(Runner& r, const DemoOptions& opt)
{
    ProblemState p = make_demo("acfold", opt);
    r.find(p, "tr", 3, iknob(opt, "trivial_steps", 60));
    record_specials(r.rep, p, "tr_");

    ProblemState q = r.load("tr", "bpt1");
    swibra(q, knob(opt, "swibra_ds", -0.2));
    q.sw.foldcheck = 1;
    r.run(q, "b1", iknob(opt, "branch_steps", 30));
    record_specials(r.rep, q, "b1_");

    ProblemState f = r.load("b1", "fpt1");
    spcontini(f, 3);
    f.nc.ds = 0.1;
    f.nc.dsmax = 0.25;
    r.run(f, "f1", iknob(opt, "fold_steps", 10));
    r.rep.values["f1_gamma_end"] = f.par()[2];
    r.rep.values["f1_lambda_end"] = f.par()[0];

    const int steps = iknob(opt, "exit_steps", 8);
    for (const double ds : {0.05, -0.05}) {
        ProblemState e = f;
        spcontexit(e, 1);
        e.nc.ds = ds;
        e.sw.foldcheck = 1;
        r.run(e, ds > 0 ? "f1_up" : "f1_down", steps);
    }
}

void schnak(Runner& r, const DemoOptions& opt)
{
    ProblemState p = make_demo("schnak", opt);
    r.find(p, "tr", 1, iknob(opt, "trivial_steps", 40));
    record_specials(r.rep, p, "tr_");

    ProblemState q = r.load("tr", "bpt1");
    swibra(q, -0.05);
    q.usrlam = {knob(opt, "lambda_end", 1.3)};
    r.run(q, "st", iknob(opt, "branch_steps", 120));
    r.rep.values["st_lambda_end"] = q.par()[0];

    // length continuation: rho scales both diffusion constants
    ProblemState l = r.load("st", target_point(q));
    swipar(l, {3});
    reset_branch(l);
    l.nc.ds = -0.01;
    l.nc.dsmax = 0.05;
    l.nc.lammin = 0.05;
    l.sw.foldcheck = 1;
    l.sw.bifcheck = 0;
    l.usrlam.clear();
    r.run(l, "rho", iknob(opt, "rho_steps", 30));
    record_specials(r.rep, l, "rho_");

    // cylinder geometry with phase condition and free speed
    ProblemState t = r.load("rho", "pt" + std::to_string(std::min(5, l.branch.back().count)));
    schnak_travel(t);
    t.sw.foldcheck = 0;
    t.nc.ds = 0.01;
    t.nc.dsmax = 0.05;
    r.run(t, "tw", iknob(opt, "travel_steps", 10));
    r.rep.values["tw_speed_end"] = t.par()[3];
}

void bratu(Runner& r, const DemoOptions& opt)
{
    ProblemState p = make_demo("bratu", opt);
    r.run(p, "tr", iknob(opt, "trivial_steps", 40), 1);
    record_specials(r.rep, p, "tr_");

    ProblemState b = r.load("tr", "bpt1");
    spcontini(b, 2);
    b.nc.ds = 0.1;
    b.nc.dsmax = 0.5;
    r.run(b, "bp", iknob(opt, "bp_steps", 10));
    r.rep.values["bp_d_end"] = b.par()[1];
    r.rep.values["bp_lambda_end"] = b.par()[0];

    const int steps = iknob(opt, "exit_steps", 5);
    for (const double ds : {0.02, -0.02}) {
        ProblemState e = b;
        spcontexit(e, 1);
        e.nc.ds = ds;
        r.run(e, ds > 0 ? "bp_up" : "bp_down", steps);
    }
}

void nlbc(Runner& r, const DemoOptions& opt)
{
    ProblemState p = make_demo("nlbc", opt);
    r.find(p, "tr", 1, iknob(opt, "trivial_steps", 40));
    record_specials(r.rep, p, "tr_");

    for (const double ds : {0.05, -0.05}) {
        ProblemState q = r.load("tr", "bpt1");
        swibra(q, ds);
        r.run(q, ds > 0 ? "b1" : "b2", iknob(opt, "branch_steps", 10));
    }
}

void acfront(Runner& r, const DemoOptions& opt)
{
    ProblemState p = make_demo("acfront", opt);
    r.find(p, "tr", 1, 60);
    record_specials(r.rep, p, "tr_");

    // follow the half cosine mode until the front has formed
    ProblemState q = r.load("tr", "bpt1");
    swibra(q, knob(opt, "swibra_ds", 0.01));
    q.usrlam = {knob(opt, "lambda_front", 2.0)};
    q.sw.bifcheck = 0;
    q.sw.spcalc = 0;
    r.run(q, "half", 200);

    ProblemState f = r.load("half", target_point(q));
    r.rep.values["front_lambda"] = f.par()[0];
    acfront_orient(f);
    acfront_freeze(f);
    f.nc.ds = -0.02;
    f.nc.dsmax = 0.05;
    f.nc.lammin = knob(opt, "mu_end", 0.6) - 0.02;
    f.nc.lammax = 1.01;
    r.run(f, "front", 100);
    double worst = 0, s1 = NAN;
    const double lam = f.par()[0];
    for (const auto& rec : f.branch) {
        const double mu = rec.params[0], s = rec.params[1];
        if (rec.ptype == -1)
            s1 = s;
        if (mu < 1 - 1e-9 && mu >= knob(opt, "mu_end", 0.6)) {
            const double ref = std::sqrt(lam / 2) * (1 - mu);
            worst = std::max(worst, std::abs(s - ref) / ref);
        }
    }
    r.rep.values["front_speed_mu1"] = s1;
    r.rep.values["front_speed_relerr"] = worst;
    r.rep.values["front_mu_end"] = f.par()[1];
}

} // namespace

ScenarioReport run_scenario(const std::string& demo, const std::string& root, const DemoOptions& opt)
{
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioReport rep;
    rep.values["max_residual"] = 0;
    rep.values["max_arclength_defect"] = 0;
    rep.values["min_tangent_dot"] = INFINITY;
    rep.values["steps"] = 0;
    Runner r{root, rep};
    if (demo == "acfold") acfold(r, opt);
    else if (demo == "schnak") schnak(r, opt);
    else if (demo == "bratu") bratu(r, opt);
    else if (demo == "nlbc") nlbc(r, opt);
    else if (demo == "acfront") acfront(r, opt);
    else throw DomainError("no scenario for demo '" + demo + "'");
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace p2p
