#include "torsionkit/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace torsionkit {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = text.find('/');
    auto parse_int = [](const std::string& s) -> BigInt {
        if (s.empty() || s == "-" || s == "+") throw std::invalid_argument("parse_rational: bad integer");
        for (std::size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (i == 0 && (c == '-' || c == '+')) continue;
            if (c < '0' || c > '9') throw std::invalid_argument("parse_rational: stray character");
        }
        return BigInt(s);
    };
    if (slash == std::string::npos) return Rational(parse_int(text));
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    entries_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_) throw std::invalid_argument("RatMatrix: ragged initializer");
        for (const auto& v : r) entries_.push_back(v);
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_columns(std::size_t ambient_dim, const std::vector<RatVector>& columns) {
    RatMatrix m(ambient_dim, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != ambient_dim)
            throw std::invalid_argument("from_columns: column length mismatch");
        for (std::size_t i = 0; i < ambient_dim; ++i) m(i, j) = columns[j][i];
    }
    return m;
}

RatVector RatMatrix::row(std::size_t i) const {
    RatVector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

RatVector RatMatrix::col(std::size_t j) const {
    RatVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

bool RatMatrix::is_zero() const {
    for (const auto& e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    RatMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rational& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

RatVector operator*(const RatMatrix& a, const RatVector& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    RatVector r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) r[i] += a(i, j) * v[j];
    return r;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix sum: shape mismatch");
    RatMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix difference: shape mismatch");
    RatMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

BasisList::BasisList(std::size_t dim, std::vector<RatVector> vecs)
    : ambient_dim(dim), vectors(std::move(vecs)) {
    for (const auto& v : vectors)
        if (v.size() != ambient_dim) throw std::invalid_argument("BasisList: vector length mismatch");
}

void BasisList::push_back(RatVector v) {
    if (v.size() != ambient_dim) throw std::invalid_argument("BasisList: vector length mismatch");
    vectors.push_back(std::move(v));
}

RrefResult rref(const RatMatrix& m) {
    const std::size_t nr = m.rows(), nc = m.cols();
    RatMatrix r = m;
    RatMatrix t = RatMatrix::identity(nr);
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < nc && lead < nr; ++col) {
        // first nonzero entry in column order
        std::size_t piv = lead;
        while (piv < nr && r(piv, col).is_zero()) ++piv;
        if (piv == nr) continue;
        if (piv != lead) {
            for (std::size_t j = 0; j < nc; ++j) std::swap(r(lead, j), r(piv, j));
            for (std::size_t j = 0; j < nr; ++j) std::swap(t(lead, j), t(piv, j));
        }
        const Rational inv = Rational(1) / r(lead, col);
        if (inv != 1) {
            for (std::size_t j = 0; j < nc; ++j) r(lead, j) *= inv;
            for (std::size_t j = 0; j < nr; ++j) t(lead, j) *= inv;
        }
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == lead || r(i, col).is_zero()) continue;
            const Rational f = r(i, col);
            for (std::size_t j = 0; j < nc; ++j) r(i, j) -= f * r(lead, j);
            for (std::size_t j = 0; j < nr; ++j) t(i, j) -= f * t(lead, j);
        }
        pivots.push_back(col);
        ++lead;
    }
    return {std::move(r), std::move(pivots), std::move(t)};
}

std::size_t rank(const RatMatrix& m) { return rref(m).pivot_cols.size(); }

BasisList kernel_basis(const RatMatrix& m) {
    const auto res = rref(m);
    const std::size_t nc = m.cols();
    std::vector<bool> is_pivot(nc, false);
    for (auto p : res.pivot_cols) is_pivot[p] = true;

    BasisList basis(nc);
    for (std::size_t free_col = 0; free_col < nc; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatVector v(nc);
        v[free_col] = 1;
        for (std::size_t k = 0; k < res.pivot_cols.size(); ++k)
            v[res.pivot_cols[k]] = -res.R(k, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

BasisList image_basis(const RatMatrix& m) {
    const auto res = rref(m);
    BasisList basis(m.rows());
    for (auto p : res.pivot_cols) basis.push_back(m.col(p));
    return basis;
}

std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    const auto res = rref(m);
    RatVector tb(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.rows(); ++j)
            if (!res.T(i, j).is_zero()) tb[i] += res.T(i, j) * b[j];
    }
    const std::size_t r = res.pivot_cols.size();
    for (std::size_t i = r; i < m.rows(); ++i)
        if (!tb[i].is_zero()) return std::nullopt;
    RatVector x(m.cols());
    for (std::size_t k = 0; k < r; ++k) x[res.pivot_cols[k]] = tb[k];
    return x;
}

Rational det(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return Rational(1);

    // Tracked Gaussian elimination: rows are never normalized, the pivots
    // are accumulated, det = sign * product of pivots.
    RatMatrix a = m;
    Rational factor(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k).is_zero()) ++piv;
        if (piv == n) return Rational(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        const Rational pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Rational f = a(i, k) / pivot;
            if (f.is_zero()) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
        factor *= pivot;
    }
    return sign * factor * a(n - 1, n - 1);
}

Rational change_of_basis_det(const BasisList& new_basis, const BasisList& old_basis) {
    if (new_basis.size() != old_basis.size() || new_basis.ambient_dim != old_basis.ambient_dim)
        throw std::invalid_argument("change_of_basis_det: size mismatch");
    const std::size_t k = new_basis.size();
    if (k == 0) return Rational(1);

    const RatMatrix old_m = old_basis.to_matrix();
    RatMatrix coeffs(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        auto x = solve(old_m, new_basis.vectors[j]);
        if (!x) throw std::invalid_argument("change_of_basis_det: vector outside span of old basis");
        for (std::size_t i = 0; i < k; ++i) coeffs(i, j) = (*x)[i];
    }
    Rational d = det(coeffs);
    if (d.is_zero()) throw std::invalid_argument("change_of_basis_det: dependent new basis");
    return d;
}

std::optional<RatVector> coordinates_in_basis(const BasisList& basis, const RatVector& v) {
    return solve(basis.to_matrix(), v);
}

RatVector scaled(const RatVector& v, const Rational& s) {
    RatVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
    return r;
}

RatVector add(const RatVector& a, const RatVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector add: length mismatch");
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RatVector sub(const RatVector& a, const RatVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector sub: length mismatch");
    RatVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

bool is_zero(const RatVector& v) {
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

}  // namespace torsionkit
