#ifndef TORSIONKIT_PAIRING_HPP
#define TORSIONKIT_PAIRING_HPP

#include "torsionkit/surface.hpp"

namespace torsionkit {

/// One-vertex model of a closed surface complex: a spanning tree of the
/// 1-skeleton collapsed, attaching words rewritten, with the induced
/// degree-1 chain maps in both directions (both induce inverse isomorphisms
/// on H_1).
struct OneVertexModel {
    SurfaceComplex model;                 ///< one 0-cell, loops, same 2-cells
    std::vector<std::size_t> kept_edges;  ///< original edge index per loop
    std::vector<std::size_t> tree_edges;  ///< collapsed original edges
    RatMatrix project;                    ///< C_1(X) -> C_1(model), kills tree edges
    RatMatrix lift;                       ///< C_1(model) -> C_1(X), loop + tree path
};

/// Collapse a spanning tree. `edge_preference` orders the greedy tree
/// selection (used to exercise tree independence); identity order when
/// absent. Rejects disconnected 1-skeletons and bordered surfaces.
OneVertexModel one_vertex_reduction(const SurfaceComplex& x,
                                    const std::vector<std::size_t>* edge_preference = nullptr);

/// Algebraic intersection numbers I(rows_i, cols_j) of 1-cycles on a closed
/// oriented surface, computed on the one-vertex model by the cyclic-word
/// linking rule: two loop chords cross in the vertex disk iff their
/// end-points interleave around the vertex link, with the sign read off the
/// link orientation. Rejects non-cycle inputs.
RatMatrix intersection_pairing(const SurfaceComplex& x, const BasisList& rows,
                               const BasisList& cols,
                               const std::vector<std::size_t>* edge_preference = nullptr);

/// The skew form on a single list of cycles.
RatMatrix intersection_form(const SurfaceComplex& x, const BasisList& basis,
                            const std::vector<std::size_t>* edge_preference = nullptr);

/// A canonical (symplectic) basis Gamma_1..Gamma_2g of H_1: the form in this
/// basis is J (Gamma_i . Gamma_{i+g} = +1, other pairings 0). Produced by
/// rational symplectic reduction of the canonical homology basis.
BasisList symplectic_basis(const SurfaceComplex& x);

/// Period matrix entries: the evaluation of the 1-form dual to the j-th
/// h1 cycle against Gamma_i, realized combinatorially as the intersection
/// number, so P = intersection_pairing(x, gamma, h1).
RatMatrix period_matrix(const SurfaceComplex& x, const BasisList& gamma, const BasisList& h1);

/// sum(orient_i * F_i) as a degree-2 cycle vector (the fundamental class of
/// a closed coherently oriented surface).
RatVector fundamental_class_vector(const SurfaceComplex& x);

/// The 1x1 matrix of the H_0 x H_2 intersection pairing in the bases
/// (h0, h2): h0 = lambda [point], h2 = mu [fundamental class] pair to
/// lambda*mu.
RatMatrix delta_02(const SurfaceComplex& x, const RatVector& h0, const RatVector& h2);

}  // namespace torsionkit

#endif  // TORSIONKIT_PAIRING_HPP
