#ifndef TORSIONKIT_CHAIN_HPP
#define TORSIONKIT_CHAIN_HPP

#include <string>
#include <vector>

#include "torsionkit/matrix.hpp"

namespace torsionkit {

/// Finite chain complex 0 -> C_n -> ... -> C_0 -> 0 with the standard basis
/// of each C_p as its distinguished (cell) basis. boundaries[p-1] is the
/// matrix of d_p : C_p -> C_{p-1}, so it has dims[p-1] rows and dims[p]
/// columns.
struct BasedChainComplex {
    std::vector<std::size_t> dims;
    std::vector<RatMatrix> boundaries;
    std::vector<std::vector<std::string>> cell_labels;  ///< optional, per degree

    std::size_t top_degree() const { return dims.empty() ? 0 : dims.size() - 1; }
    std::size_t dim(std::size_t p) const { return p < dims.size() ? dims[p] : 0; }
    std::size_t total_dim() const;

    /// d_p as a matrix, including the zero maps d_0 : C_0 -> 0 and
    /// d_{n+1} : 0 -> C_n, so degree loops need no edge cases.
    RatMatrix boundary_or_zero(std::size_t p) const;
};

struct ValidationResult {
    bool ok = true;
    std::size_t failing_degree = 0;
    std::string message;
};

/// Shape checks plus d_p . d_{p+1} = 0 for every valid p; reports the first
/// failing degree.
ValidationResult validate(const BasedChainComplex& c);

/// Cycles, boundaries and canonical homology representatives per degree.
struct HomologyData {
    std::vector<BasisList> cycles;          ///< Z_p = Ker d_p (Z_0 = C_0)
    std::vector<BasisList> boundary_bases;  ///< B_p = Im d_{p+1} (B_n empty)
    std::vector<BasisList> representatives; ///< h_p: cycles completing B_p to Z_p
    std::vector<std::size_t> betti;

    std::size_t top_degree() const { return betti.empty() ? 0 : betti.size() - 1; }
};

/// Homology with explicit basis tracking. Representatives are chosen
/// canonically: the boundary basis is extended to Z_p by greedy
/// first-independent selection from the kernel basis, so repeated calls give
/// identical output.
HomologyData homology(const BasedChainComplex& c);

/// One ordered basis of H_p per degree, each vector a cycle representing its
/// class.
struct GradedBases {
    std::vector<BasisList> h;

    BasisList& operator[](std::size_t p) { return h[p]; }
    const BasisList& operator[](std::size_t p) const { return h[p]; }
    std::size_t degrees() const { return h.size(); }
};

/// The canonical representatives of homology(c), packaged as a GradedBases.
GradedBases canonical_bases(const HomologyData& hd);

/// Block-diagonal direct sum; dims add, cell labels are prefixed by side.
BasedChainComplex direct_sum(const BasedChainComplex& a, const BasedChainComplex& b);

/// Alternating sum of dims; equals the alternating sum of betti numbers.
long long euler_characteristic(const BasedChainComplex& c);

}  // namespace torsionkit

#endif  // TORSIONKIT_CHAIN_HPP
