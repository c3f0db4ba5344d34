#include "p2p/io.hpp"

#include "p2p/demos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace p2p {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_vec(std::ostream& os, const std::string& key, const Vec& v)
{
    os << key << " " << v.size() << "\n";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << fmt(v[i]) << "\n";
}

template <class T>
std::string join(const std::vector<T>& xs)
{
    std::ostringstream os;
    os << xs.size();
    for (const auto& x : xs) {
        if constexpr (std::is_floating_point_v<T>)
            os << " " << fmt(x);
        else
            os << " " << x;
    }
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw FormatError("cannot write " + tmp);
        f << content;
        if (!f)
            throw FormatError("write failed for " + tmp);
    }
    fs::rename(tmp, path);
}

double parse_double(const std::string& s, const std::string& what)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw FormatError("bad number '" + s + "' in " + what);
    return v;
}

int parse_int(const std::string& s, const std::string& what)
{
    const double v = parse_double(s, what);
    if (v != std::floor(v))
        throw FormatError("expected integer in " + what);
    return static_cast<int>(v);
}

// Splits on spaces; the first token is the key.
std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t)
        out.push_back(t);
    return out;
}

struct Reader {
    std::ifstream in;
    std::string path;

    std::vector<std::string> next()
    {
        std::string line;
        while (std::getline(in, line)) {
            auto t = tokens(line);
            if (!t.empty())
                return t;
        }
        throw FormatError(path + ": unexpected end of file");
    }

    Vec vec(const std::vector<std::string>& head)
    {
        if (head.size() != 2)
            throw FormatError(path + ": bad array header '" + head[0] + "'");
        const int n = parse_int(head[1], path);
        if (n < 0)
            throw FormatError(path + ": negative array length");
        Vec v(n);
        for (int i = 0; i < n; ++i) {
            auto t = next();
            if (t.size() != 1)
                throw FormatError(path + ": corrupted array '" + head[0] + "'");
            v[i] = parse_double(t[0], path);
        }
        return v;
    }
};

template <class T>
std::vector<T> list_after(const std::vector<std::string>& t, std::size_t start, const std::string& what)
{
    if (t.size() <= start)
        throw FormatError("missing list length in " + what);
    const int n = parse_int(t[start], what);
    if (n < 0 || t.size() < start + 1 + static_cast<std::size_t>(n))
        throw FormatError("short list in " + what);
    std::vector<T> out;
    for (int i = 0; i < n; ++i) {
        const std::string& s = t[start + 1 + static_cast<std::size_t>(i)];
        if constexpr (std::is_same_v<T, std::string>)
            out.push_back(s);
        else if constexpr (std::is_integral_v<T>)
            out.push_back(parse_int(s, what));
        else
            out.push_back(parse_double(s, what));
    }
    return out;
}

const std::vector<std::pair<std::string, double Controls::*>> control_doubles = {
    {"tol", &Controls::tol},         {"del", &Controls::del},         {"dsmin", &Controls::dsmin},
    {"dsmax", &Controls::dsmax},     {"ds", &Controls::ds},           {"dsincfac", &Controls::dsincfac},
    {"dlammax", &Controls::dlammax}, {"lamdtol", &Controls::lamdtol}, {"dsminbis", &Controls::dsminbis},
    {"lammin", &Controls::lammin},   {"lammax", &Controls::lammax},   {"xi", &Controls::xi},
    {"xiq", &Controls::xiq},         {"stiff_spring", &Controls::stiff_spring}};
const std::vector<std::pair<std::string, int Controls::*>> control_ints = {
    {"imax", &Controls::imax},         {"dsinciter", &Controls::dsinciter}, {"bisecmax", &Controls::bisecmax},
    {"nsteps", &Controls::nsteps},     {"ntot", &Controls::ntot},           {"neig", &Controls::neig}};
const std::vector<std::pair<std::string, int Switches::*>> switch_ints = {
    {"bifcheck", &Switches::bifcheck}, {"foldcheck", &Switches::foldcheck}, {"spcalc", &Switches::spcalc},
    {"jac", &Switches::jac},           {"qjac", &Switches::qjac},           {"spjac", &Switches::spjac},
    {"sfem", &Switches::sfem},         {"para", &Switches::para},           {"bifloc", &Switches::bifloc},
    {"bcper", &Switches::bcper},       {"spcont", &Switches::spcont},       {"newt", &Switches::newt}};

} // namespace

std::string output_root()
{
    const char* env = std::getenv("P2P_OUT");
    return env && *env ? std::string(env) : std::string("out");
}

void save_point(const ProblemState& p, const std::string& dir, const std::string& name)
{
    fs::create_directories(dir);
    std::ostringstream os;
    os << "p2p-point " << point_format_version << "\n";
    os << "demo " << p.demo << "\n";
    os << "variant " << (p.variant.empty() ? "-" : p.variant) << "\n";
    os << "neq " << p.neq << "\n";
    os << "mesh " << fmt(p.mesh_spec.lx) << " " << fmt(p.mesh_spec.ly) << " " << p.mesh_spec.nx << " "
       << p.mesh_spec.ny << " " << p.mesh_spec.map << "\n";
    os << "bcper " << p.sw.bcper << "\n";
    os << "nu " << p.nu << "\n";
    os << "npar " << p.npar << "\n";
    os << "nq " << p.nq << "\n";
    os << "ilam " << join(p.ilam) << "\n";
    os << "ptype " << p.sol.ptype << "\n";
    os << "counters " << p.sol.count << " " << p.sol.bcount << " " << p.sol.fcount << "\n";
    os << "ineg " << p.sol.ineg << "\n";
    os << "layout " << (p.extended() ? "extended" : "normal") << "\n";
    os << "operators none\n";   // rebuilt on load
    os << "err_column placeholder\n";
    for (const auto& [k, m] : control_doubles)
        os << "nc." << k << " " << fmt(p.nc.*m) << "\n";
    for (const auto& [k, m] : control_ints)
        os << "nc." << k << " " << p.nc.*m << "\n";
    for (const auto& [k, m] : switch_ints)
        os << "sw." << k << " " << p.sw.*m << "\n";
    os << "params " << join(p.param_names) << "\n";
    os << "usrlam " << join(p.usrlam) << "\n";
    write_vec(os, "u", p.u);
    write_vec(os, "tau", p.tau);
    write_vec(os, "u_old", p.u_old);
    os << "branch " << p.branch.size() << "\n";
    for (const auto& r : p.branch)
        os << r.count << " " << r.ptype << " " << r.ineg << " " << r.target << " " << fmt(r.err) << " "
           << fmt(r.l2norm) << " " << join(r.params) << " " << join(r.user) << "\n";
    os << "end\n";
    write_atomic(dir + "/" + name + ".dat", os.str());
}

ProblemState load_point(const std::string& dir, const std::string& name)
{
    Reader r;
    r.path = dir + "/" + name + ".dat";
    r.in.open(r.path);
    if (!r.in)
        throw FormatError("cannot open point file " + r.path);

    auto head = r.next();
    if (head.size() != 2 || head[0] != "p2p-point")
        throw FormatError(r.path + ": not a point file");
    if (parse_int(head[1], r.path) != point_format_version)
        throw FormatError(r.path + ": unsupported format version " + head[1]);

    std::map<std::string, std::vector<std::string>> kv;
    Vec u, tau, u_old;
    std::vector<BranchRecord> branch;
    for (;;) {
        auto t = r.next();
        const std::string& key = t[0];
        if (key == "end")
            break;
        if (key == "u")
            u = r.vec(t);
        else if (key == "tau")
            tau = r.vec(t);
        else if (key == "u_old")
            u_old = r.vec(t);
        else if (key == "branch") {
            const int n = parse_int(t.at(1), r.path);
            for (int i = 0; i < n; ++i) {
                auto b = r.next();
                if (b.size() < 8)
                    throw FormatError(r.path + ": corrupted branch row");
                BranchRecord rec;
                rec.count = parse_int(b[0], r.path);
                rec.ptype = parse_int(b[1], r.path);
                rec.ineg = parse_int(b[2], r.path);
                rec.target = parse_int(b[3], r.path);
                rec.err = parse_double(b[4], r.path);
                rec.l2norm = parse_double(b[5], r.path);
                rec.params = list_after<double>(b, 6, r.path);
                rec.user = list_after<double>(b, 7 + rec.params.size(), r.path);
                branch.push_back(rec);
            }
        } else {
            kv[key] = std::vector<std::string>(t.begin() + 1, t.end());
        }
    }
    auto get = [&](const std::string& k) -> const std::vector<std::string>& {
        auto it = kv.find(k);
        if (it == kv.end() || it->second.empty())
            throw FormatError(r.path + ": missing field '" + k + "'");
        return it->second;
    };
    auto get_int = [&](const std::string& k) { return parse_int(get(k)[0], r.path); };

    const std::string demo = get("demo")[0];
    DemoOptions opt;
    opt.variant = get("variant")[0] == "-" ? "" : get("variant")[0];
    const auto& m = get("mesh");
    if (m.size() != 5)
        throw FormatError(r.path + ": bad mesh record");
    opt.mesh = MeshSpec{parse_double(m[0], r.path), parse_double(m[1], r.path), parse_int(m[2], r.path),
                        parse_int(m[3], r.path), m[4]};

    ProblemState p = make_demo(demo, opt);   // throws for unknown demos
    if (p.neq != get_int("neq") || p.npar != get_int("npar"))
        throw FormatError(r.path + ": file does not match demo '" + demo + "'");
    for (const auto& [k, mp] : control_doubles)
        if (kv.count("nc." + k))
            p.nc.*mp = parse_double(kv["nc." + k].at(0), r.path);
    for (const auto& [k, mp] : control_ints)
        if (kv.count("nc." + k))
            p.nc.*mp = parse_int(kv["nc." + k].at(0), r.path);
    for (const auto& [k, mp] : switch_ints)
        if (kv.count("sw." + k))
            p.sw.*mp = parse_int(kv["sw." + k].at(0), r.path);
    p.sw.bcper = get_int("bcper");
    p.nq = get_int("nq");
    std::vector<std::string> il = get("ilam");
    il.insert(il.begin(), "ilam");
    p.ilam = list_after<int>(il, 1, r.path);
    p.sol.ptype = get_int("ptype");
    const auto& c = get("counters");
    if (c.size() != 3)
        throw FormatError(r.path + ": bad counters");
    p.sol.count = parse_int(c[0], r.path);
    p.sol.bcount = parse_int(c[1], r.path);
    p.sol.fcount = parse_int(c[2], r.path);
    p.sol.ineg = get_int("ineg");
    if (kv.count("usrlam")) {
        std::vector<std::string> ul = kv["usrlam"];
        ul.insert(ul.begin(), "usrlam");
        p.usrlam = list_after<double>(ul, 1, r.path);
    }
    const bool ext = get("layout")[0] == "extended";
    if (ext != (p.sw.spcont != 0))
        throw FormatError(r.path + ": layout flag inconsistent with sw.spcont");

    p.u = u;
    setfemops(p);
    if (p.nu != get_int("nu"))
        throw FormatError(r.path + ": mesh/periodization rebuild gives a different unknown count");
    p.tau = tau;
    p.u_old = u_old;
    p.branch = branch;
    p.dir = dir;
    try {
        p.check();
    } catch (const DomainError& e) {
        throw FormatError(r.path + ": " + e.what());
    }
    if (p.tau.size() != 0 && p.tau.size() != p.nsys() + 1)
        throw FormatError(r.path + ": tangent has wrong length");
    return p;
}

BranchTable branch_table(const ProblemState& p)
{
    BranchTable t;
    t.columns = {"count", "ptype"};
    for (int k : p.ilam)
        t.columns.push_back(k <= static_cast<int>(p.param_names.size()) ? p.param_names[k - 1]
                                                                         : "par" + std::to_string(k));
    t.columns.insert(t.columns.end(), {"ineg", "err", "l2norm", "target"});
    t.columns.insert(t.columns.end(), p.fuha.out_names.begin(), p.fuha.out_names.end());
    for (const auto& r : p.branch) {
        std::vector<double> row{double(r.count), double(r.ptype)};
        row.insert(row.end(), r.params.begin(), r.params.end());
        row.insert(row.end(), {double(r.ineg), r.err, r.l2norm, double(r.target)});
        row.insert(row.end(), r.user.begin(), r.user.end());
        row.resize(t.columns.size(), 0.0);
        t.rows.push_back(row);
    }
    return t;
}

void write_branch_csv(const ProblemState& p, const std::string& path)
{
    const BranchTable t = branch_table(p);
    if (t.rows.empty())
        throw DomainError("write_branch_csv: empty branch");
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << fmt(row[i]);
        os << "\n";
    }
    fs::path dirpath = fs::path(path).parent_path();
    if (!dirpath.empty())
        fs::create_directories(dirpath);
    write_atomic(path, os.str());
}

BranchTable read_branch_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path);
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        return out;
    };
    BranchTable t;
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": empty file");
    t.columns = split(line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw FormatError(path + ": row width differs from header");
        std::vector<double> row;
        for (const auto& c : cells)
            row.push_back(parse_double(c, path));
        t.rows.push_back(row);
    }
    return t;
}

PlotSeries series_from_table(const BranchTable& t, const std::string& xcol, const std::string& ycol,
                             const std::string& label)
{
    auto col = [&](const std::string& name) {
        auto it = std::find(t.columns.begin(), t.columns.end(), name);
        if (it == t.columns.end())
            throw DomainError("unknown branch column '" + name + "'");
        return static_cast<std::size_t>(it - t.columns.begin());
    };
    const std::size_t ix = col(xcol), iy = col(ycol), ip = col("ptype");
    PlotSeries s;
    s.label = label;
    for (const auto& r : t.rows) {
        s.x.push_back(r[ix]);
        s.y.push_back(r[iy]);
        s.ptype.push_back(static_cast<int>(r[ip]));
    }
    return s;
}

namespace {

struct Frame {
    double x0, x1, y0, y1;
    double W = 640, H = 480, m = 60;

    double X(double x) const { return m + (x - x0) / (x1 - x0) * (W - 1.5 * m); }
    double Y(double y) const { return H - m - (y - y0) / (y1 - y0) * (H - 1.5 * m); }
};

void widen(double& lo, double& hi)
{
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    } else {
        const double pad = 0.04 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
}

std::string color_of(double t)
{
    // blue - cyan - yellow - red
    t = std::clamp(t, 0.0, 1.0);
    const double stops[4][3] = {{49, 54, 149}, {116, 173, 209}, {254, 224, 144}, {215, 48, 39}};
    const double s = t * 3;
    const int k = std::min(2, static_cast<int>(s));
    const double f = s - k;
    std::ostringstream os;
    os << "rgb(";
    for (int c = 0; c < 3; ++c)
        os << (c ? "," : "") << static_cast<int>(std::lround(stops[k][c] * (1 - f) + stops[k + 1][c] * f));
    os << ")";
    return os.str();
}

void axes(std::ostream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel)
{
    os << "<rect x='" << f.m << "' y='" << f.m / 2 << "' width='" << f.W - 1.5 * f.m << "' height='"
       << f.H - 1.5 * f.m << "' fill='none' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4, y = f.y0 + (f.y1 - f.y0) * i / 4;
        os << "<text x='" << f.X(x) << "' y='" << f.H - f.m + 16 << "' font-size='11' text-anchor='middle'>"
           << std::setprecision(4) << x << "</text>\n";
        os << "<text x='" << f.m - 6 << "' y='" << f.Y(y) + 4 << "' font-size='11' text-anchor='end'>" << y
           << "</text>\n";
    }
    os << "<text x='" << f.W / 2 << "' y='" << f.H - 12 << "' font-size='13' text-anchor='middle'>" << xlabel
       << "</text>\n";
    os << "<text x='14' y='" << f.H / 2 << "' font-size='13' transform='rotate(-90 14 " << f.H / 2 << ")'>"
       << ylabel << "</text>\n";
}

} // namespace

void plot_branch_svg(const std::vector<PlotSeries>& series, const std::string& xlabel, const std::string& ylabel,
                     const std::string& path)
{
    Frame f{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            f.x0 = std::min(f.x0, s.x[i]);
            f.x1 = std::max(f.x1, s.x[i]);
            f.y0 = std::min(f.y0, s.y[i]);
            f.y1 = std::max(f.y1, s.y[i]);
        }
    if (!std::isfinite(f.x0))
        throw DomainError("plot_branch_svg: no data");
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << f.W << "' height='" << f.H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    axes(os, f, xlabel, ylabel);
    const char* palette[] = {"#1f4e9c", "#b22222", "#2e8b57", "#8b5a2b", "#6a3d9a"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = palette[k % 5];
        os << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << f.X(s.x[i]) << "," << f.Y(s.y[i]) << " ";
        os << "'/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = f.X(s.x[i]), y = f.Y(s.y[i]);
            if (s.ptype[i] == 1)
                os << "<circle class='bif' cx='" << x << "' cy='" << y << "' r='5' fill='none' stroke='black'/>\n";
            else if (s.ptype[i] == 2)
                os << "<polygon class='fold' points='" << x << "," << y - 6 << " " << x + 6 << "," << y << " " << x
                   << "," << y + 6 << " " << x - 6 << "," << y << "' fill='none' stroke='black'/>\n";
        }
        if (!s.label.empty())
            os << "<text x='" << f.W - f.m << "' y='" << f.m / 2 + 16 * (k + 1) << "' font-size='12' fill='" << col
               << "' text-anchor='end'>" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    fs::path dirpath = fs::path(path).parent_path();
    if (!dirpath.empty())
        fs::create_directories(dirpath);
    write_atomic(path, os.str());
}

void plot_solution_svg(const ProblemState& p, int component, const std::string& path)
{
    if (component < 1 || component > p.neq)
        throw DomainError("plot_solution_svg: component out of range");
    const Mesh& m = p.mesh;
    const Vec uf = extend_vector(p.u.head(p.nu), p.ops.per);
    const Vec ut = node_to_triangle(m, uf, p.neq).segment(static_cast<Eigen::Index>(component - 1) * m.nt(), m.nt());
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& pt : m.points) {
        xmin = std::min(xmin, pt[0]);
        xmax = std::max(xmax, pt[0]);
        ymin = std::min(ymin, pt[1]);
        ymax = std::max(ymax, pt[1]);
    }
    const double lo = ut.minCoeff(), hi = ut.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    const double W = 640, H = 480, margin = 40, bar = 60;
    const double scale = std::min((W - 2 * margin - bar) / (xmax - xmin), (H - 2 * margin) / (ymax - ymin));

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    for (int t = 0; t < m.nt(); ++t) {
        os << "<polygon points='";
        for (int k = 0; k < 3; ++k) {
            const auto& pt = m.points[m.triangles[t][k]];
            os << margin + (pt[0] - xmin) * scale << "," << H - margin - (pt[1] - ymin) * scale << " ";
        }
        const std::string col = color_of(hi > lo ? (ut[t] - lo) / span : 0.5);
        os << "' fill='" << col << "' stroke='" << col << "' stroke-width='0.3'/>\n";
    }
    const double bx = W - bar + 10;
    for (int i = 0; i < 50; ++i) {
        const double y = margin + (H - 2 * margin) * (1 - (i + 1) / 50.0);
        os << "<rect x='" << bx << "' y='" << y << "' width='14' height='" << (H - 2 * margin) / 50.0 + 0.5
           << "' fill='" << color_of(i / 49.0) << "'/>\n";
    }
    os << std::setprecision(4) << "<text x='" << bx << "' y='" << margin - 6 << "' font-size='11'>" << hi << "</text>\n";
    os << "<text x='" << bx << "' y='" << H - margin + 14 << "' font-size='11'>" << lo << "</text>\n";
    os << "</svg>\n";
    fs::path dirpath = fs::path(path).parent_path();
    if (!dirpath.empty())
        fs::create_directories(dirpath);
    write_atomic(path, os.str());
}

} // namespace p2p
