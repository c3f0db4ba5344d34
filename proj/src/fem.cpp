#include "p2p/fem.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace p2p {

namespace {

struct ElementGeometry {
    double area;
    std::array<std::array<double, 2>, 3> grad;  // gradients of the three hat functions
};

ElementGeometry element_geometry(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.points[tri[0]];
    const auto& p1 = mesh.points[tri[1]];
    const auto& p2 = mesh.points[tri[2]];
    ElementGeometry g;
    g.area = mesh.area(t);
    const double inv = 1.0 / (2.0 * g.area);
    g.grad[0] = {(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv};
    g.grad[1] = {(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv};
    g.grad[2] = {(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv};
    return g;
}

// Per-triangle lookup with broadcast. Returns nullptr for an empty (zero) tensor.
const double* tensor_at(const std::vector<double>& data, std::size_t per_tri, int t, int nt, const char* name)
{
    if (data.empty())
        return nullptr;
    if (data.size() == per_tri)
        return data.data();
    if (data.size() == per_tri * static_cast<std::size_t>(nt))
        return data.data() + per_tri * static_cast<std::size_t>(t);
    throw DomainError(std::string("coefficient tensor '") + name + "' has wrong size");
}

bool skipped(const std::vector<int>& skip, int segment)
{
    return std::find(skip.begin(), skip.end(), segment) != skip.end();
}

const SegmentBC& segment_bc(const BCSpec& bc, int segment)
{
    auto it = bc.segments.find(segment);
    if (it == bc.segments.end() || !it->second.value)
        throw DomainError("boundary condition missing for segment " + std::to_string(segment));
    return it->second;
}

} // namespace

std::vector<double> CoeffTensors::isotropic(int neq, const std::vector<double>& diffusion)
{
    if (static_cast<int>(diffusion.size()) != neq)
        throw DomainError("isotropic: need one diffusion constant per component");
    std::vector<double> c(static_cast<std::size_t>(neq * neq * 4), 0.0);
    for (int i = 0; i < neq; ++i) {
        c[((i * neq + i) * 2 + 0) * 2 + 0] = diffusion[i];
        c[((i * neq + i) * 2 + 1) * 2 + 1] = diffusion[i];
    }
    return c;
}

bool BCSpec::u_dependent() const
{
    return std::any_of(segments.begin(), segments.end(),
                       [](const auto& kv) { return static_cast<bool>(kv.second.derivative); });
}

BCSpec BCSpec::neumann(int neq)
{
    BCSpec bc;
    bc.neq = neq;
    for (int s = 1; s <= 4; ++s)
        bc.segments[s] = SegmentBC{[neq](const BoundaryPoint&, const Vec&, const Vec&) {
                                       return BcValue{Mat::Zero(neq, neq), Vec::Zero(neq)};
                                   },
                                   {}};
    return bc;
}

BCSpec BCSpec::dirichlet(int neq, double stiff, const Vec& value)
{
    if (value.size() != neq)
        throw DomainError("BCSpec::dirichlet: value must have neq entries");
    BCSpec bc;
    bc.neq = neq;
    for (int s = 1; s <= 4; ++s)
        bc.segments[s] = SegmentBC{[neq, stiff, value](const BoundaryPoint&, const Vec&, const Vec&) {
                                       return BcValue{stiff * Mat::Identity(neq, neq), stiff * value};
                                   },
                                   {}};
    return bc;
}

SpMat assemble_mass(const Mesh& mesh, int neq)
{
    if (neq < 1)
        throw DomainError("assemble_mass: neq must be positive");
    const int np = mesh.np();
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(9 * mesh.nt() * neq));
    for (int t = 0; t < mesh.nt(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double w = mesh.area(t) / 12.0;
        for (int k = 0; k < neq; ++k)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trip.emplace_back(k * np + tri[a], k * np + tri[b], a == b ? 2.0 * w : w);
    }
    SpMat M(neq * np, neq * np);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

InteriorOperators assemble_interior(const Mesh& mesh, const CoeffTensors& co)
{
    const int neq = co.neq, np = mesh.np(), nt = mesh.nt();
    if (neq < 1)
        throw DomainError("assemble_interior: neq must be positive");
    const std::size_t nc = static_cast<std::size_t>(neq * neq * 4), na = static_cast<std::size_t>(neq * neq),
                      nb = static_cast<std::size_t>(neq * neq * 2);

    Triplets tk, ta, tb;
    for (int t = 0; t < nt; ++t) {
        const double* c = tensor_at(co.c, nc, t, nt, "c");
        const double* a = tensor_at(co.a, na, t, nt, "a");
        const double* b = tensor_at(co.b, nb, t, nt, "b");
        if (!c && !a && !b)
            continue;
        const auto g = element_geometry(mesh, t);
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < neq; ++i) {
            for (int j = 0; j < neq; ++j) {
                for (int p = 0; p < 3; ++p) {
                    const int row = i * np + tri[p];
                    for (int q = 0; q < 3; ++q) {
                        const int col = j * np + tri[q];
                        if (c) {
                            double v = 0;
                            for (int k = 0; k < 2; ++k)
                                for (int l = 0; l < 2; ++l)
                                    v += c[((i * neq + j) * 2 + k) * 2 + l] * g.grad[q][l] * g.grad[p][k];
                            if (v != 0)
                                tk.emplace_back(row, col, g.area * v);
                        }
                        if (a && a[i * neq + j] != 0)
                            ta.emplace_back(row, col, a[i * neq + j] * g.area / 12.0 * (p == q ? 2.0 : 1.0));
                        if (b) {
                            double v = 0;
                            for (int k = 0; k < 2; ++k)
                                v += b[(i * neq + j) * 2 + k] * g.grad[q][k];
                            if (v != 0)
                                tb.emplace_back(row, col, -v * g.area / 3.0);
                        }
                    }
                }
            }
        }
    }
    const int n = neq * np;
    InteriorOperators ops{SpMat(n, n), SpMat(n, n), SpMat(n, n)};
    ops.K.setFromTriplets(tk.begin(), tk.end());
    ops.Ma.setFromTriplets(ta.begin(), ta.end());
    ops.Kadv.setFromTriplets(tb.begin(), tb.end());
    return ops;
}

Vec assemble_load(const Mesh& mesh, const std::vector<double>& f, int neq)
{
    const int np = mesh.np(), nt = mesh.nt();
    Vec F = Vec::Zero(static_cast<Eigen::Index>(neq) * np);
    for (int t = 0; t < nt; ++t) {
        const double* ft = tensor_at(f, static_cast<std::size_t>(neq), t, nt, "f");
        if (!ft)
            return F;
        const double w = mesh.area(t) / 3.0;
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < neq; ++i)
            for (int p = 0; p < 3; ++p)
                F[i * np + tri[p]] += ft[i] * w;
    }
    return F;
}

namespace {

struct EdgeData {
    BoundaryPoint mid;
    double length;
    Vec umid;
};

EdgeData edge_data(const Mesh& mesh, const BoundaryEdge& e, const Vec& u, int neq)
{
    const int np = mesh.np();
    const auto& a = mesh.points[e.nodes[0]];
    const auto& b = mesh.points[e.nodes[1]];
    EdgeData d;
    d.mid = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), e.segment};
    d.length = std::hypot(b[0] - a[0], b[1] - a[1]);
    d.umid.resize(neq);
    for (int k = 0; k < neq; ++k)
        d.umid[k] = 0.5 * (u[k * np + e.nodes[0]] + u[k * np + e.nodes[1]]);
    return d;
}

void check_boundary_args(const Mesh& mesh, const BCSpec& bc, const Vec& u)
{
    if (u.size() != static_cast<Eigen::Index>(bc.neq) * mesh.np())
        throw DomainError("assemble_boundary: u must be a full nodal field (neq*np)");
}

} // namespace

BoundaryOperators assemble_boundary(const Mesh& mesh, const BCSpec& bc, const Vec& u, const Vec& par,
                                    const std::vector<int>& skip)
{
    check_boundary_args(mesh, bc, u);
    const int neq = bc.neq, np = mesh.np();
    Triplets trip;
    Vec Gb = Vec::Zero(static_cast<Eigen::Index>(neq) * np);
    for (const auto& e : mesh.edges) {
        if (skipped(skip, e.segment))
            continue;
        const SegmentBC& seg = segment_bc(bc, e.segment);
        const EdgeData d = edge_data(mesh, e, u, neq);
        const BcValue v = seg.value(d.mid, d.umid, par);
        const double m_diag = d.length / 3.0, m_off = d.length / 6.0;
        for (int i = 0; i < neq; ++i) {
            for (int j = 0; j < neq; ++j) {
                const double q = v.q(i, j);
                if (q == 0)
                    continue;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        trip.emplace_back(i * np + e.nodes[a], j * np + e.nodes[b], q * (a == b ? m_diag : m_off));
            }
            for (int a = 0; a < 2; ++a)
                Gb[i * np + e.nodes[a]] += v.g[i] * d.length / 2.0;
        }
    }
    BoundaryOperators out{SpMat(neq * np, neq * np), Gb};
    out.Q.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat assemble_boundary_jacobian(const Mesh& mesh, const BCSpec& bc, const Vec& u, const Vec& par,
                                 const std::vector<int>& skip)
{
    check_boundary_args(mesh, bc, u);
    const int neq = bc.neq, np = mesh.np();
    Triplets trip;
    for (const auto& e : mesh.edges) {
        if (skipped(skip, e.segment))
            continue;
        const SegmentBC& seg = segment_bc(bc, e.segment);
        const EdgeData d = edge_data(mesh, e, u, neq);
        const BcValue v = seg.value(d.mid, d.umid, par);
        const double m_diag = d.length / 3.0, m_off = d.length / 6.0;
        BcDerivative dv;
        if (seg.derivative)
            dv = seg.derivative(d.mid, d.umid, par);

        // integral of u_beta * phi_a over the edge, per node a and component beta
        Mat uphi(neq, 2);
        for (int beta = 0; beta < neq; ++beta) {
            const double u0 = u[beta * np + e.nodes[0]], u1 = u[beta * np + e.nodes[1]];
            uphi(beta, 0) = m_diag * u0 + m_off * u1;
            uphi(beta, 1) = m_off * u0 + m_diag * u1;
        }
        for (int i = 0; i < neq; ++i) {
            for (int k = 0; k < neq; ++k) {
                for (int a = 0; a < 2; ++a) {
                    // midpoint-derived part: identical for both endpoints b
                    double mid_part = 0;
                    if (seg.derivative) {
                        for (int beta = 0; beta < neq; ++beta)
                            mid_part += dv.dq[k](i, beta) * 0.5 * uphi(beta, a);
                        mid_part -= 0.5 * dv.dg(i, k) * d.length / 2.0;
                    }
                    for (int b = 0; b < 2; ++b) {
                        const double val = v.q(i, k) * (a == b ? m_diag : m_off) + mid_part;
                        if (val != 0)
                            trip.emplace_back(i * np + e.nodes[a], k * np + e.nodes[b], val);
                    }
                }
            }
        }
    }
    SpMat J(neq * np, neq * np);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

SpMat nodal_reaction_jacobian(const SpMat& M1, const Vec& fu, int neq)
{
    const Eigen::Index np = M1.rows();
    if (fu.size() != neq * neq * np)
        throw DomainError("nodal_reaction_jacobian: fu must have neq*neq*np entries");
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(M1.nonZeros() * neq * neq));
    for (int i = 0; i < neq; ++i) {
        for (int j = 0; j < neq; ++j) {
            const double* f = fu.data() + (i * neq + j) * np;
            for (Eigen::Index col = 0; col < M1.outerSize(); ++col)
                for (SpMat::InnerIterator it(M1, col); it; ++it)
                    if (f[col] != 0)
                        trip.emplace_back(i * np + it.row(), j * np + col, -it.value() * f[col]);
        }
    }
    SpMat J(neq * np, neq * np);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

} // namespace p2p
