#ifndef TORSIONKIT_MV_HPP
#define TORSIONKIT_MV_HPP

#include <memory>
#include <string>
#include <vector>

#include "torsionkit/surface.hpp"
#include "torsionkit/torsion.hpp"

namespace torsionkit {

/// A cellular chain map sending each source cell to a single target cell
/// with a sign (the only kind gluing produces).
struct CellMap {
    struct Image {
        std::size_t index = 0;
        int sign = 1;
    };
    std::vector<std::vector<Image>> cells;  ///< [degree][source cell]

    RatMatrix matrix(std::size_t degree, std::size_t target_dim) const;
    RatVector push(std::size_t degree, const RatVector& v, std::size_t target_dim) const;
};

/// X = A u B glued along I, with the four cellular inclusions. I is a
/// disjoint union of circles; every cell of X comes from A or from the
/// interior of B.
struct Decomposition {
    BasedChainComplex X, A, B, I;
    CellMap ia, ib, ja, jb;  // I->A, I->B, A->X, B->X
    std::vector<std::string> circle_names;
};

/// Decomposition record of gluing two disjoint surfaces along the listed
/// circle pairs (the result complex is rebuilt here and returned inside).
Decomposition glue_decomposition(const SurfaceComplex& a, const std::vector<std::string>& ca,
                                 const SurfaceComplex& b, const std::vector<std::string>& cb,
                                 SurfaceComplex* glued = nullptr);

/// Decomposition of double(x) into its two copies; A is the original.
Decomposition double_decomposition(const SurfaceComplex& x, SurfaceComplex* doubled = nullptr);

/// Degreewise maps of 0 -> C(I) -> C(A) + C(B) -> C(X) -> 0 with the
/// injection x |-> (x, -x) and surjection (u, v) |-> u + v. Verifies the
/// inclusions are chain maps and the sequence is exact; throws otherwise.
struct ShortExactSequence {
    std::vector<RatMatrix> inject;  ///< per degree
    std::vector<RatMatrix> surject;
};
ShortExactSequence short_exact(const Decomposition& dec);

/// The Mayer-Vietoris long exact sequence as a based chain complex. Terms
/// are indexed ascending from H_0(X) (term 0), following the zigzag
///   ... -> H_p(I) -> H_p(A)+H_p(B) -> H_p(X) -> H_{p-1}(I) -> ...
/// maps[k] is the matrix of term k -> term k-1 in the homology bases the
/// sequence was built with; trailing zero terms are trimmed. Reports print
/// terms in the conventional descending order.
struct LongExactSequence {
    enum class Space { X, AB, I };
    struct Term {
        Space space;
        std::size_t degree;  ///< homological degree p of the underlying group
        std::size_t dim;
        std::string label;
    };
    std::vector<Term> terms;
    std::vector<RatMatrix> maps;  ///< maps[k]: term k -> term k-1, k = 1..N

    GradedBases basis_i, basis_a, basis_b, basis_x;  ///< the bases used
    HomologyData hom_i, hom_a, hom_b, hom_x;

    std::size_t size() const { return terms.size(); }
    BasedChainComplex as_complex() const;
};

/// Builds the sequence in the given homology bases (each vector a cycle in
/// the respective complex's cell coordinates); exactness failure is a hard
/// error. Passing empty bases selects the canonical ones.
LongExactSequence les(const Decomposition& dec, const GradedBases& bi, const GradedBases& ba,
                      const GradedBases& bb, const GradedBases& bx);
LongExactSequence les(const Decomposition& dec);

/// The connecting homomorphism applied to a single cycle of X, returned as a
/// cycle in I. `perturbation` adds i(t) to the A-part and -i(t) to the
/// B-part of the canonical splitting before taking boundaries; the class of
/// the result must not change.
RatVector connecting_image(const Decomposition& dec, std::size_t degree, const RatVector& x_cycle,
                           const RatVector* perturbation = nullptr);

/// Which terms carry prescribed bases in the adapted-basis construction.
enum class AdaptedPattern {
    kPiecesGiven,  ///< pieces and circles fixed, X terms produced
    kWholeGiven,   ///< X and circles fixed, piece terms produced
};

/// Adapted bases making every change-of-basis determinant [h'_k, h_k] equal
/// to 1, so the torsion of the sequence is exactly 1. Fixed terms keep the
/// bases the sequence was built with (their image bases are rescaled by the
/// inverse determinant); free terms absorb the determinant into the first
/// basis vector of their first summand. Throws when a fixed term is pinned
/// by its neighbors to a determinant other than 1 (over-determined pattern,
/// e.g. a missing connecting-map normalization).
struct AdaptedBases {
    std::vector<BasisList> h;        ///< final basis per term, in term coordinates
    std::vector<BasisList> h_prime;  ///< b_k ++ s_k(b_{k-1}) per term
    std::vector<Rational> dets;      ///< [h'_k, h_k], all 1
    TorsionChoices choices;          ///< the b/s data as torsion choices for as_complex()
    TorsionValue les_torsion;        ///< torsion of the sequence in the adapted bases

    /// Bases of the underlying homology groups induced by the constructed
    /// term bases, as cycle vectors in the respective complexes.
    GradedBases out_x, out_a, out_b;
};
AdaptedBases adapted_bases(const LongExactSequence& l, AdaptedPattern pattern);

/// Non-throwing variant: reports the term and determinant of an
/// over-determined pin instead of failing.
struct AdaptedAttempt {
    bool ok = false;
    std::size_t failed_term = 0;
    Rational pinned_det;
    AdaptedBases bases;
};
AdaptedAttempt try_adapted_bases(const LongExactSequence& l, AdaptedPattern pattern);

/// kWholeGiven adapted bases with the connecting-map normalization: when a
/// circle term is pinned by its neighbors (closed X, nonzero H_2), the first
/// circle basis vector in that degree absorbs the pinned determinant — the
/// delta_2(h_2^X) = h_1^S condition — and the sequence is rebuilt. The
/// absorbed factor is reported; it is +-1 in every pipeline this library
/// constructs.
struct WholeGivenResult {
    LongExactSequence l;
    AdaptedBases bases;
    Rational circle_adjustment = Rational(1);
};
WholeGivenResult adapted_whole_given(const Decomposition& dec, const GradedBases& bx);

/// Both sides of the Milnor multiplicativity identity for the decomposition:
/// lhs = T(A) T(B), rhs = T(I) T(X) T(H), all in the bases carried by `l`.
struct MultiplicativityReport {
    Rational t_a, t_b, t_i, t_x, t_h;
    Rational lhs, rhs;
    bool equal_abs = false;
};
MultiplicativityReport multiplicativity(const Decomposition& dec, const LongExactSequence& l);

}  // namespace torsionkit

#endif  // TORSIONKIT_MV_HPP
