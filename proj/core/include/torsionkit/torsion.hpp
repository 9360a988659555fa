#ifndef TORSIONKIT_TORSION_HPP
#define TORSIONKIT_TORSION_HPP

#include <cstdint>
#include <vector>

#include "torsionkit/chain.hpp"

namespace torsionkit {

/// Reidemeister-Franz torsion value. Exact and nonzero; the sign depends on
/// basis ordering, so identities compare the absolute value.
struct TorsionValue {
    Rational value;
    std::vector<Rational> degree_factors;  ///< change-of-basis determinant per degree

    Rational abs() const { return torsionkit::abs(value); }
};

/// The free data in the torsion definition, one block per degree p:
///   b_p        a basis of B_p = Im d_{p+1}, as vectors in C_p,
///   s_images   preimages in C_p of the b_{p-1} vectors (d_p s = b),
///   l_images   cycle representatives in C_p of the chosen h_p classes.
/// The assembled set b_p ++ l_images ++ s_images must be a basis of C_p.
struct TorsionChoices {
    struct Degree {
        BasisList b;
        BasisList s_images;
        BasisList l_images;
    };
    std::vector<Degree> degrees;
};

/// Canonical choices: b_p is the image basis, sections come from the
/// canonical solve (non-pivot coordinates zero), lifts are the given
/// representatives themselves.
TorsionChoices default_choices(const BasedChainComplex& c, const HomologyData& hd);
TorsionChoices default_choices(const BasedChainComplex& c, const HomologyData& hd,
                               const GradedBases& h);

/// Valid choices randomized per seed (deterministic for a fixed seed):
/// b_p is an invertible recombination of the image basis, sections gain
/// random kernel elements, lifts gain random boundary elements. The torsion
/// must not depend on any of it.
TorsionChoices random_choices(const BasedChainComplex& c, const HomologyData& hd,
                              const GradedBases& h, std::uint64_t seed);

/// The torsion of (C, standard cell bases, h):
///
///   T = prod_p [ b_p ++ l_p(h_p) ++ s_p(b_{p-1}), c_p ]^((-1)^(p+1))
///
/// where [.,.] is the determinant of the matrix expressing the assembled
/// basis in the distinguished basis c_p. Throws if h has the wrong
/// cardinalities or the choices do not assemble to bases.
TorsionValue torsion(const BasedChainComplex& c, const GradedBases& h,
                     const TorsionChoices& choices);

/// Convenience: torsion with the canonical homology bases and default
/// choices.
TorsionValue torsion(const BasedChainComplex& c);

/// Torsion of an exact complex (all betti numbers zero); homology bases are
/// empty. Rejects non-acyclic input.
TorsionValue torsion_acyclic(const BasedChainComplex& c, const TorsionChoices& choices);
TorsionValue torsion_acyclic(const BasedChainComplex& c);

/// Independent verification path, used by the test suites: the torsion as
/// an alternating product of square subdeterminants
///
///   prod_p det[ d_{p+1}(cols R_{p+1}) | h_p | id(cols R_p) ]^((-1)^(p+1))
///
/// over an exhaustively searched family of pivot column subsets R_p, with
/// ranks certified by brute-force minor search. Every valid family must
/// yield the same value; the common value is returned. Rejects complexes of
/// total dimension > 12.
TorsionValue torsion_oracle(const BasedChainComplex& c, const GradedBases& h);
TorsionValue torsion_oracle(const BasedChainComplex& c);

}  // namespace torsionkit

#endif  // TORSIONKIT_TORSION_HPP
