#include "torsionkit/chain.hpp"

#include <sstream>
#include <stdexcept>

namespace torsionkit {

std::size_t BasedChainComplex::total_dim() const {
    std::size_t t = 0;
    for (auto d : dims) t += d;
    return t;
}

RatMatrix BasedChainComplex::boundary_or_zero(std::size_t p) const {
    if (p == 0) return RatMatrix(0, dim(0));
    if (p >= 1 && p <= boundaries.size()) return boundaries[p - 1];
    return RatMatrix(dim(p - 1), dim(p));
}

ValidationResult validate(const BasedChainComplex& c) {
    if (c.dims.empty()) return {false, 0, "complex has no degrees"};
    if (c.boundaries.size() + 1 != c.dims.size())
        return {false, 0, "boundary count does not match degree count"};
    for (std::size_t p = 1; p < c.dims.size(); ++p) {
        const RatMatrix& d = c.boundaries[p - 1];
        if (d.rows() != c.dims[p - 1] || d.cols() != c.dims[p]) {
            std::ostringstream os;
            os << "boundary " << p << " has shape " << d.rows() << "x" << d.cols()
               << ", expected " << c.dims[p - 1] << "x" << c.dims[p];
            return {false, p, os.str()};
        }
    }
    if (!c.cell_labels.empty()) {
        if (c.cell_labels.size() != c.dims.size())
            return {false, 0, "label list does not match degree count"};
        for (std::size_t p = 0; p < c.dims.size(); ++p)
            if (c.cell_labels[p].size() != c.dims[p])
                return {false, p, "label count does not match dimension"};
    }
    for (std::size_t p = 2; p < c.dims.size(); ++p) {
        if (!(c.boundaries[p - 2] * c.boundaries[p - 1]).is_zero()) {
            std::ostringstream os;
            os << "d" << (p - 1) << " . d" << p << " != 0";
            return {false, p, os.str()};
        }
    }
    return {};
}

HomologyData homology(const BasedChainComplex& c) {
    const auto v = validate(c);
    if (!v.ok) throw std::invalid_argument("homology: invalid complex: " + v.message);

    const std::size_t n = c.top_degree();
    HomologyData hd;
    hd.cycles.resize(n + 1);
    hd.boundary_bases.resize(n + 1);
    hd.representatives.resize(n + 1);
    hd.betti.resize(n + 1);

    for (std::size_t p = 0; p <= n; ++p) {
        hd.cycles[p] = kernel_basis(c.boundary_or_zero(p));
        hd.boundary_bases[p] = image_basis(c.boundary_or_zero(p + 1));

        // Greedily extend B_p to Z_p; the appended cycles represent H_p.
        std::vector<RatVector> span = hd.boundary_bases[p].vectors;
        BasisList reps(c.dim(p));
        const std::size_t target = hd.cycles[p].size();
        for (const auto& z : hd.cycles[p].vectors) {
            if (span.size() == target) break;
            std::vector<RatVector> trial = span;
            trial.push_back(z);
            if (rank(RatMatrix::from_columns(c.dim(p), trial)) == trial.size()) {
                span.push_back(z);
                reps.push_back(z);
            }
        }
        if (span.size() != target)
            throw std::logic_error("homology: failed to complete boundary basis to cycles");
        hd.representatives[p] = std::move(reps);
        hd.betti[p] = hd.cycles[p].size() - hd.boundary_bases[p].size();
    }
    return hd;
}

GradedBases canonical_bases(const HomologyData& hd) {
    GradedBases g;
    g.h = hd.representatives;
    return g;
}

BasedChainComplex direct_sum(const BasedChainComplex& a, const BasedChainComplex& b) {
    const auto va = validate(a);
    if (!va.ok) throw std::invalid_argument("direct_sum: invalid first summand: " + va.message);
    const auto vb = validate(b);
    if (!vb.ok) throw std::invalid_argument("direct_sum: invalid second summand: " + vb.message);

    const std::size_t n = std::max(a.top_degree(), b.top_degree());
    BasedChainComplex c;
    c.dims.resize(n + 1);
    for (std::size_t p = 0; p <= n; ++p) c.dims[p] = a.dim(p) + b.dim(p);
    for (std::size_t p = 1; p <= n; ++p) {
        RatMatrix da = a.boundary_or_zero(p);
        RatMatrix db = b.boundary_or_zero(p);
        RatMatrix d(c.dims[p - 1], c.dims[p]);
        for (std::size_t i = 0; i < da.rows(); ++i)
            for (std::size_t j = 0; j < da.cols(); ++j) d(i, j) = da(i, j);
        for (std::size_t i = 0; i < db.rows(); ++i)
            for (std::size_t j = 0; j < db.cols(); ++j) d(a.dim(p - 1) + i, a.dim(p) + j) = db(i, j);
        c.boundaries.push_back(std::move(d));
    }

    const bool has_labels = !a.cell_labels.empty() || !b.cell_labels.empty();
    if (has_labels) {
        c.cell_labels.resize(n + 1);
        for (std::size_t p = 0; p <= n; ++p) {
            auto name = [&](const BasedChainComplex& side, const char* tag, std::size_t i) {
                if (!side.cell_labels.empty() && p < side.cell_labels.size())
                    return std::string(tag) + side.cell_labels[p][i];
                return std::string(tag) + "cell" + std::to_string(i);
            };
            for (std::size_t i = 0; i < a.dim(p); ++i) c.cell_labels[p].push_back(name(a, "A.", i));
            for (std::size_t i = 0; i < b.dim(p); ++i) c.cell_labels[p].push_back(name(b, "B.", i));
        }
    }
    return c;
}

long long euler_characteristic(const BasedChainComplex& c) {
    long long chi = 0;
    for (std::size_t p = 0; p < c.dims.size(); ++p)
        chi += (p % 2 == 0) ? static_cast<long long>(c.dims[p]) : -static_cast<long long>(c.dims[p]);
    return chi;
}

}  // namespace torsionkit
