#ifndef TORSIONKIT_SURFACE_HPP
#define TORSIONKIT_SURFACE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "torsionkit/chain.hpp"

namespace torsionkit {

/// One step of a 2-cell attaching word: an oriented pass over an edge.
struct SignedLetter {
    std::size_t edge = 0;
    int sign = 1;  // +1 forward, -1 reversed
};
using AttachingWord = std::vector<SignedLetter>;

/// A boundary circle of a surface complex: exactly one 0-cell and one
/// 1-cell, the 1-cell a loop (zero boundary).
struct BoundaryCircle {
    std::string name;
    std::size_t vertex = 0;
    std::size_t edge = 0;
};

/// Cell structure of a compact orientable surface: a based chain complex of
/// top degree <= 2 together with its boundary-circle registry, one attaching
/// word per 2-cell, and a +-1 orientation per 2-cell making the fundamental
/// chain sum(orient_i * F_i) coherent.
struct SurfaceComplex {
    BasedChainComplex complex;
    std::vector<BoundaryCircle> boundary_circles;
    std::vector<AttachingWord> attaching_words;
    std::vector<int> face_orientations;

    std::size_t num_faces() const { return complex.dim(2); }
    const BoundaryCircle* find_circle(const std::string& name) const;
    /// Genus from chi and the boundary count; the complex must be connected.
    long genus() const;
};

/// Structural checks: valid complex, words reproduce the degree-2 boundary
/// by signed occurrence counts, circle cells are in range and cycles,
/// orientation data well formed.
ValidationResult validate_surface(const SurfaceComplex& s);

/// sum(orient_i * F_i) as a degree-2 chain.
RatVector fundamental_chain(const SurfaceComplex& s);

/// Coefficient (+-1) of the named circle's loop in the boundary of the
/// fundamental chain.
int circle_sigma(const SurfaceComplex& s, const BoundaryCircle& c);

/// S^1: one 0-cell, one 1-cell, zero boundary map.
SurfaceComplex circle();

/// Disjoint union of k circles, cells ordered circle by circle.
SurfaceComplex circles(std::size_t k);

/// S^1 x [-1,1] with the product cell structure: two vertices, boundary
/// loops "bottom" and "top", a vertical arc, and one square 2-cell with
/// boundary top - bottom.
SurfaceComplex cylinder();

/// The pair of pants: vertices v1,v2,v3, boundary loops c1,c2,c3, arcs
/// a1: v1->v2 and a2: v1->v3, one 2-cell attached along
/// c1 a1 c2^-1 a1^-1 a2 c3^-1 a2^-1, so its boundary is c1 - c2 - c3.
SurfaceComplex pants();

/// Cell index maps of a gluing, for building the associated short exact
/// sequence. Entry [degree][old cell] is the image cell in the glued
/// complex; the sign is -1 exactly for circle loops identified with a
/// reversal.
struct GlueMaps {
    struct Cell {
        std::size_t index = 0;
        int sign = 1;
    };
    std::vector<std::vector<Cell>> a_cells;
    std::vector<std::vector<Cell>> b_cells;
};

/// Glue two disjoint surfaces along the listed boundary-circle pairs (all at
/// once). Circle cells of b are identified onto the matching cells of a;
/// orientations of b's 2-cells are flipped when needed so the result carries
/// a coherent orientation. Glued circles leave the registry.
SurfaceComplex glue_many(const SurfaceComplex& a, const std::vector<std::string>& ca,
                         const SurfaceComplex& b, const std::vector<std::string>& cb,
                         GlueMaps* maps = nullptr);

/// Glue two boundary circles of one connected surface to each other. The
/// loop identification sign is chosen so the result stays orientable.
SurfaceComplex glue_self(const SurfaceComplex& x, const std::string& c1, const std::string& c2);

/// Glue along one circle pair. Accepts the same object on both sides (then
/// cX and cY must name distinct circles and glue_self applies); rejects
/// gluing a circle to itself.
SurfaceComplex glue(const SurfaceComplex& x, const std::string& cx,
                    const SurfaceComplex& y, const std::string& cy);

/// Two copies of x glued along every boundary circle; copy A keeps its
/// orientations, copy B is reversed. Cell labels are prefixed "A."/"B.".
SurfaceComplex double_surface(const SurfaceComplex& x, GlueMaps* maps = nullptr);

/// Combinatorial pants decomposition per the standard handle-chain scheme:
/// pieces nu = 1..2g-2+n (the first g are the handle pants, each bounded
/// twice by its primed circle), cutting circles S1..S{2g-3+n} and S'1..S'g,
/// boundary circles S0, S-1, ..., S-(n-1).
struct PantsDecomposition {
    struct Piece {
        int nu = 0;
        bool in_torus = false;                 ///< handle pants inside a one-holed torus
        std::array<std::string, 3> circles{};  ///< boundary labels, slot order
    };
    struct Circle {
        std::string name;
        bool is_boundary = false;
        std::vector<std::pair<int, int>> sides;  ///< (piece nu, slot)
    };
    int g = 0;
    int n = 0;
    std::vector<Piece> pieces;
    std::vector<Circle> circles;
};

/// The decomposition combinatorics only. Requires 2g-2+n >= 1.
PantsDecomposition pants_decomposition(int g, int n);

/// Sigma_{g,n} assembled by gluing pants (handles built as pants+cylinder)
/// following pants_decomposition(g,n); boundary circles end up named
/// S0, S-1, ... Requires 2g-2+n >= 1.
struct SurfaceWithDecomposition {
    SurfaceComplex surface;
    PantsDecomposition decomposition;
};
SurfaceWithDecomposition build_surface(int g, int n);

}  // namespace torsionkit

#endif  // TORSIONKIT_SURFACE_HPP
