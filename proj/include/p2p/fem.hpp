#pragma once

#include "p2p/mesh.hpp"
#include "p2p/types.hpp"

#include <functional>
#include <map>

namespace p2p {

/// Coefficients of -div(c grad u) + a u - b.grad u - f on one mesh.
///
/// Each tensor is either empty (zero), a single tensor broadcast to all
/// triangles, or one tensor per triangle stored triangle-major:
///   c(i,j,k,l) at [((i*neq+j)*2+k)*2+l], a(i,j) at [i*neq+j],
///   b(i,j,k) at [(i*neq+j)*2+k], f(i) at [i].
/// Component i is the equation (row), j the unknown (column), k,l spatial.
///
/// For semilinear sources the load may instead be given as a nodal field
/// f_nodal (component-blocked); it is then integrated exactly as M*f_nodal.
/// In a Jacobian pass fu_nodal carries df_i/du_j at each node, stored at
/// [(i*neq+j)*np + node], and contributes -M*diag(fu).
struct CoeffTensors {
    int neq = 1;
    std::vector<double> c, a, b, f;
    Vec f_nodal;
    Vec fu_nodal;

    static std::vector<double> isotropic(int neq, const std::vector<double>& diffusion);
};

struct InteriorOperators {
    SpMat K, Ma, Kadv;
};

/// Boundary coefficient evaluation point (edge midpoint).
struct BoundaryPoint {
    double x, y;
    int segment;
};

struct BcValue {
    Mat q;  // neq x neq
    Vec g;  // neq
};

/// dq[k] = dq/du_k (neq x neq each); dg(i,k) = dg_i/du_k.
struct BcDerivative {
    std::vector<Mat> dq;
    Mat dg;
};

struct SegmentBC {
    std::function<BcValue(const BoundaryPoint&, const Vec& u, const Vec& par)> value;
    /// Empty when q and g do not depend on u.
    std::function<BcDerivative(const BoundaryPoint&, const Vec& u, const Vec& par)> derivative;
};

/// Generalized Neumann data n.(c grad u) + q u = g for every boundary segment.
struct BCSpec {
    int neq = 1;
    std::map<int, SegmentBC> segments;

    bool u_dependent() const;

    static BCSpec neumann(int neq);
    /// Stiff-spring approximation of u = value on all four sides.
    static BCSpec dirichlet(int neq, double stiff, const Vec& value);
};

struct BoundaryOperators {
    SpMat Q;
    Vec Gb;
};

SpMat assemble_mass(const Mesh& mesh, int neq);
InteriorOperators assemble_interior(const Mesh& mesh, const CoeffTensors& coeffs);
Vec assemble_load(const Mesh& mesh, const std::vector<double>& f, int neq);

/// Boundary contributions of the integral of (q u - g) phi over the boundary,
/// with q, g evaluated at edge midpoints using the midpoint value of u.
/// Segments listed in `skip` are left out (identified periodic sides).
BoundaryOperators assemble_boundary(const Mesh& mesh, const BCSpec& bc, const Vec& u, const Vec& par,
                                    const std::vector<int>& skip = {});

/// Exact derivative of the discrete boundary residual Q(u)u - Gb(u).
SpMat assemble_boundary_jacobian(const Mesh& mesh, const BCSpec& bc, const Vec& u, const Vec& par,
                                 const std::vector<int>& skip = {});

/// Linearization of -M*f(u) for nodal f: block (i,j) is -M1*diag(fu_ij),
/// where M1 is the scalar (single-component) mass matrix.
SpMat nodal_reaction_jacobian(const SpMat& M1, const Vec& fu_nodal, int neq);

} // namespace p2p
