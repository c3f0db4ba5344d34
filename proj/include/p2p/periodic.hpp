#pragma once

#include "p2p/mesh.hpp"
#include "p2p/types.hpp"

namespace p2p {

enum class PeriodicKind : int { none = 0, top_bottom = 1, left_right = 2, torus = 3 };

/// Identification of periodic partner nodes.
///
/// fill (neq*np_full x neq*np_per) copies reduced values onto all partners,
/// drop (neq*np_per x neq*np_full) keeps the retained nodes. Bottom and left
/// sides are retained; top and right partners are dropped.
struct Periodization {
    PeriodicKind kind = PeriodicKind::none;
    int neq = 1;
    int np_full = 0;
    int np_per = 0;
    SpMat fill;
    SpMat drop;

    int nu_per() const { return neq * np_per; }
    int nu_full() const { return neq * np_full; }
    bool active() const { return kind != PeriodicKind::none; }
    /// Boundary segments that are identified (and must carry homogeneous Neumann data).
    std::vector<int> identified_segments() const;
};

/// Build fill/drop from a representative map: rep[i] is the retained node that
/// node i is identified with (rep[i] == i for retained nodes).
Periodization periodization_from_partners(const std::vector<int>& rep, int neq, PeriodicKind kind);

Periodization build_periodization(const Mesh& mesh, int neq, PeriodicKind kind);

SpMat periodize_operator(const SpMat& A, const Periodization& per);
Vec periodize_vector(const Vec& F, const Periodization& per);
Vec extend_vector(const Vec& u_per, const Periodization& per);
Vec drop_vector(const Vec& u_full, const Periodization& per);

} // namespace p2p
