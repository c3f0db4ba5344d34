#include "p2p/periodic.hpp"

#include <map>

namespace p2p {

std::vector<int> Periodization::identified_segments() const
{
    switch (kind) {
    case PeriodicKind::top_bottom:
        return {bottom, top};
    case PeriodicKind::left_right:
        return {left, right};
    case PeriodicKind::torus:
        return {bottom, right, top, left};
    case PeriodicKind::none:
        break;
    }
    return {};
}

Periodization periodization_from_partners(const std::vector<int>& rep, int neq, PeriodicKind kind)
{
    const int np = static_cast<int>(rep.size());
    std::vector<int> reduced(static_cast<std::size_t>(np), -1);
    int np_per = 0;
    for (int i = 0; i < np; ++i) {
        if (rep[i] < 0 || rep[i] >= np || rep[rep[i]] != rep[i])
            throw DomainError("periodization: representative map is not a projection");
        if (rep[i] == i)
            reduced[i] = np_per++;
    }
    Triplets tf, td;
    for (int k = 0; k < neq; ++k) {
        for (int i = 0; i < np; ++i) {
            tf.emplace_back(k * np + i, k * np_per + reduced[rep[i]], 1.0);
            if (rep[i] == i)
                td.emplace_back(k * np_per + reduced[i], k * np + i, 1.0);
        }
    }
    Periodization per;
    per.kind = kind;
    per.neq = neq;
    per.np_full = np;
    per.np_per = np_per;
    per.fill.resize(neq * np, neq * np_per);
    per.fill.setFromTriplets(tf.begin(), tf.end());
    per.drop.resize(neq * np_per, neq * np);
    per.drop.setFromTriplets(td.begin(), td.end());
    return per;
}

namespace {

// Map every node on side `from` to the node on side `to` with identical
// transverse coordinate (axis = index of the transverse coordinate).
void identify_sides(const Mesh& mesh, std::vector<int>& rep, int axis, double from, double to)
{
    const int other = 1 - axis;
    std::map<double, int> targets;
    std::vector<int> sources;
    for (int i = 0; i < mesh.np(); ++i) {
        if (mesh.points[i][other] == to)
            targets.emplace(mesh.points[i][axis], i);
        else if (mesh.points[i][other] == from)
            sources.push_back(i);
    }
    if (targets.size() != sources.size())
        throw DomainError("periodization: opposite sides have different node counts");
    for (int s : sources) {
        auto it = targets.find(mesh.points[s][axis]);
        if (it == targets.end())
            throw DomainError("periodization: boundary grids of opposite sides do not match");
        rep[s] = it->second;
    }
}

} // namespace

Periodization build_periodization(const Mesh& mesh, int neq, PeriodicKind kind)
{
    std::vector<int> rep(static_cast<std::size_t>(mesh.np()));
    for (int i = 0; i < mesh.np(); ++i)
        rep[i] = i;
    if (kind == PeriodicKind::top_bottom || kind == PeriodicKind::torus)
        identify_sides(mesh, rep, 0, mesh.ly, -mesh.ly);
    if (kind == PeriodicKind::left_right || kind == PeriodicKind::torus)
        identify_sides(mesh, rep, 1, mesh.lx, -mesh.lx);
    // corners: follow chains until a retained node is reached
    for (int i = 0; i < mesh.np(); ++i) {
        int r = rep[i];
        for (int guard = 0; rep[r] != r && guard < 4; ++guard)
            r = rep[r];
        rep[i] = r;
    }
    return periodization_from_partners(rep, neq, kind);
}

SpMat periodize_operator(const SpMat& A, const Periodization& per)
{
    if (!per.active())
        return A;
    if (A.rows() != per.fill.rows() || A.cols() != per.fill.rows())
        throw DomainError("periodize_operator: dimension mismatch");
    SpMat out = SpMat(per.fill.transpose()) * A * per.fill;
    out.makeCompressed();
    return out;
}

Vec periodize_vector(const Vec& F, const Periodization& per)
{
    if (!per.active())
        return F;
    if (F.size() != per.fill.rows())
        throw DomainError("periodize_vector: dimension mismatch");
    return per.fill.transpose() * F;
}

Vec extend_vector(const Vec& u_per, const Periodization& per)
{
    if (!per.active())
        return u_per;
    if (u_per.size() != per.fill.cols())
        throw DomainError("extend_vector: dimension mismatch");
    return per.fill * u_per;
}

Vec drop_vector(const Vec& u_full, const Periodization& per)
{
    if (!per.active())
        return u_full;
    if (u_full.size() != per.drop.cols())
        throw DomainError("drop_vector: dimension mismatch");
    return per.drop * u_full;
}

} // namespace p2p
