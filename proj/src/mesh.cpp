#include "p2p/mesh.hpp"

#include <cmath>

namespace p2p {

double Mesh::area(int t) const
{
    const auto& tri = triangles[t];
    const auto& a = points[tri[0]];
    const auto& b = points[tri[1]];
    const auto& c = points[tri[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double Mesh::total_area() const
{
    double sum = 0;
    for (int t = 0; t < nt(); ++t)
        sum += area(t);
    return sum;
}

Mesh build_rect_mesh(double lx, double ly, int nx, int ny)
{
    if (!(lx > 0) || !(ly > 0) || nx < 1 || ny < 1)
        throw DomainError("build_rect_mesh: need lx, ly > 0 and nx, ny >= 1");

    Mesh m;
    m.lx = lx;
    m.ly = ly;
    m.nx = nx;
    m.ny = ny;

    // Exact endpoints on the sides; interior coordinates by linear interpolation.
    auto coord = [](double l, int i, int n) {
        if (i == 0)
            return -l;
        if (i == n)
            return l;
        return -l + 2.0 * l * static_cast<double>(i) / static_cast<double>(n);
    };

    m.points.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.points.push_back({coord(lx, i, nx), coord(ly, j, ny)});

    m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ll = m.node(i, j), lr = m.node(i + 1, j);
            const int ur = m.node(i + 1, j + 1), ul = m.node(i, j + 1);
            m.triangles.push_back({ll, lr, ur});
            m.triangles.push_back({ll, ur, ul});
        }
    }
    m.region.assign(m.triangles.size(), 1);

    const double hx = 2.0 * lx / nx, hy = 2.0 * ly / ny;
    for (int i = 0; i < nx; ++i)
        m.edges.push_back({{m.node(i, 0), m.node(i + 1, 0)}, bottom, {i * hx, (i + 1) * hx}});
    for (int j = 0; j < ny; ++j)
        m.edges.push_back({{m.node(nx, j), m.node(nx, j + 1)}, right, {j * hy, (j + 1) * hy}});
    for (int i = nx; i > 0; --i) {
        const double s0 = (nx - i) * hx;
        m.edges.push_back({{m.node(i, ny), m.node(i - 1, ny)}, top, {s0, s0 + hx}});
    }
    for (int j = ny; j > 0; --j) {
        const double s0 = (ny - j) * hy;
        m.edges.push_back({{m.node(0, j), m.node(0, j - 1)}, left, {s0, s0 + hy}});
    }
    return m;
}

Vec node_to_triangle(const Mesh& mesh, const Vec& v, int neq)
{
    const int np = mesh.np(), nt = mesh.nt();
    if (neq < 1 || v.size() != static_cast<Eigen::Index>(neq) * np)
        throw DomainError("node_to_triangle: field length must be neq*np");
    Vec out(static_cast<Eigen::Index>(neq) * nt);
    for (int k = 0; k < neq; ++k) {
        const double* vk = v.data() + static_cast<std::ptrdiff_t>(k) * np;
        for (int t = 0; t < nt; ++t) {
            const auto& tri = mesh.triangles[t];
            out[k * nt + t] = (vk[tri[0]] + vk[tri[1]] + vk[tri[2]]) / 3.0;
        }
    }
    return out;
}

} // namespace p2p
