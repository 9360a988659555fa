#ifndef TORSIONKIT_MATRIX_HPP
#define TORSIONKIT_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "torsionkit/rational.hpp"

namespace torsionkit {

using RatVector = std::vector<Rational>;

/// Dense matrix of exact rationals, row-major. All linear algebra in the
/// library flows through this type.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> init);

    static RatMatrix identity(std::size_t n);
    static RatMatrix zero(std::size_t rows, std::size_t cols) { return RatMatrix(rows, cols); }
    /// Matrix whose columns are the given vectors (all of equal length).
    static RatMatrix from_columns(std::size_t ambient_dim, const std::vector<RatVector>& columns);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    RatVector row(std::size_t i) const;
    RatVector col(std::size_t j) const;

    bool operator==(const RatMatrix& other) const = default;

    bool is_zero() const;
    RatMatrix transpose() const;

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend RatVector operator*(const RatMatrix& a, const RatVector& v);
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

/// Ordered list of coordinate vectors in a common ambient space. Houses the
/// ordered bases the torsion machinery passes around; independence is not
/// enforced on construction but checkable via rank.
struct BasisList {
    std::size_t ambient_dim = 0;
    std::vector<RatVector> vectors;

    BasisList() = default;
    explicit BasisList(std::size_t dim) : ambient_dim(dim) {}
    BasisList(std::size_t dim, std::vector<RatVector> vecs);

    std::size_t size() const { return vectors.size(); }
    RatMatrix to_matrix() const { return RatMatrix::from_columns(ambient_dim, vectors); }
    void push_back(RatVector v);
};

struct RrefResult {
    RatMatrix R;                      ///< reduced row echelon form of the input
    std::vector<std::size_t> pivot_cols;  ///< strictly increasing
    RatMatrix T;                      ///< invertible transform with T*M = R
};

/// Reduced row echelon form with a tracked transform. Deterministic
/// pivoting: first nonzero entry in column order, no pivot-size heuristics,
/// so repeated runs produce identical output.
RrefResult rref(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);

/// Basis of the null space. One vector per free column, enumerated in
/// column order with the free coordinate set to 1.
BasisList kernel_basis(const RatMatrix& m);

/// Basis of the column space: the first linearly independent columns
/// (exactly the pivot columns), kept verbatim.
BasisList image_basis(const RatMatrix& m);

/// Exact solve of M x = b. Returns the canonical solution with every
/// non-pivot coordinate zero, or nullopt when b is outside the image.
std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b);

/// Determinant by fraction-free (Bareiss) elimination. Rejects non-square
/// input.
Rational det(const RatMatrix& m);

/// Determinant of the matrix expressing `new_basis` in coordinates of
/// `old_basis`. Both must have equal cardinality and ambient dimension and
/// be of full rank; the result is never zero.
Rational change_of_basis_det(const BasisList& new_basis, const BasisList& old_basis);

/// Coordinates of v in the given basis (must be full-rank and spanning for
/// v); nullopt when v is outside the span.
std::optional<RatVector> coordinates_in_basis(const BasisList& basis, const RatVector& v);

RatVector scaled(const RatVector& v, const Rational& s);
RatVector add(const RatVector& a, const RatVector& b);
RatVector sub(const RatVector& a, const RatVector& b);
bool is_zero(const RatVector& v);

}  // namespace torsionkit

#endif  // TORSIONKIT_MATRIX_HPP
