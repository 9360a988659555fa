#include "torsionkit/mv.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace torsionkit {

RatMatrix CellMap::matrix(std::size_t degree, std::size_t target_dim) const {
    const auto& deg = degree < cells.size() ? cells[degree] : std::vector<Image>{};
    RatMatrix m(target_dim, deg.size());
    for (std::size_t j = 0; j < deg.size(); ++j) m(deg[j].index, j) = deg[j].sign;
    return m;
}

RatVector CellMap::push(std::size_t degree, const RatVector& v, std::size_t target_dim) const {
    RatVector r(target_dim);
    const auto& deg = cells.at(degree);
    if (v.size() != deg.size()) throw std::invalid_argument("CellMap::push: length mismatch");
    for (std::size_t j = 0; j < deg.size(); ++j)
        if (!v[j].is_zero()) r[deg[j].index] += Rational(deg[j].sign) * v[j];
    return r;
}

namespace {

CellMap circle_inclusion(const SurfaceComplex& s, const std::vector<std::string>& names) {
    CellMap m;
    m.cells.assign(2, {});
    for (const auto& name : names) {
        const BoundaryCircle* c = s.find_circle(name);
        if (!c) throw std::invalid_argument("decomposition: '" + name + "' is not a boundary circle");
        m.cells[0].push_back({c->vertex, 1});
        m.cells[1].push_back({c->edge, 1});
    }
    return m;
}

CellMap from_glue_cells(const std::vector<std::vector<GlueMaps::Cell>>& cells) {
    CellMap m;
    for (const auto& deg : cells) {
        m.cells.emplace_back();
        for (const auto& c : deg) m.cells.back().push_back({c.index, c.sign});
    }
    return m;
}

}  // namespace

Decomposition glue_decomposition(const SurfaceComplex& a, const std::vector<std::string>& ca,
                                 const SurfaceComplex& b, const std::vector<std::string>& cb,
                                 SurfaceComplex* glued) {
    GlueMaps maps;
    SurfaceComplex x = glue_many(a, ca, b, cb, &maps);

    Decomposition dec;
    dec.A = a.complex;
    dec.B = b.complex;
    dec.I = circles(ca.size()).complex;
    dec.X = x.complex;
    dec.ia = circle_inclusion(a, ca);
    dec.ib = circle_inclusion(b, cb);
    dec.ja = from_glue_cells(maps.a_cells);
    dec.jb = from_glue_cells(maps.b_cells);
    dec.circle_names = ca;
    if (glued) *glued = std::move(x);
    return dec;
}

Decomposition double_decomposition(const SurfaceComplex& x, SurfaceComplex* doubled) {
    if (x.boundary_circles.empty())
        throw std::invalid_argument("double_decomposition: surface is closed");
    GlueMaps maps;
    SurfaceComplex d = double_surface(x, &maps);

    Decomposition dec;
    dec.A = x.complex;
    dec.B = x.complex;
    dec.I = circles(x.boundary_circles.size()).complex;
    dec.X = d.complex;
    std::vector<std::string> names;
    for (const auto& c : x.boundary_circles) names.push_back(c.name);
    dec.ia = circle_inclusion(x, names);
    dec.ib = dec.ia;
    dec.ja = from_glue_cells(maps.a_cells);
    dec.jb = from_glue_cells(maps.b_cells);
    dec.circle_names = names;
    if (doubled) *doubled = std::move(d);
    return dec;
}

namespace {

void check_chain_map(const CellMap& f, const BasedChainComplex& src, const BasedChainComplex& dst,
                     const char* name) {
    const std::size_t top = std::max(src.top_degree(), dst.top_degree());
    for (std::size_t p = 1; p <= top; ++p) {
        const RatMatrix fp = f.matrix(p, dst.dim(p));
        const RatMatrix fpm1 = f.matrix(p - 1, dst.dim(p - 1));
        if (fp.cols() != src.dim(p) || fpm1.cols() != src.dim(p - 1))
            throw std::invalid_argument(std::string("decomposition: map ") + name +
                                        " has wrong cell counts");
        const RatMatrix lhs = dst.boundary_or_zero(p) * fp;
        const RatMatrix rhs = fpm1 * src.boundary_or_zero(p);
        if (!(lhs - rhs).is_zero())
            throw std::invalid_argument(std::string("decomposition: ") + name + " is not a chain map");
    }
}

}  // namespace

ShortExactSequence short_exact(const Decomposition& dec) {
    check_chain_map(dec.ia, dec.I, dec.A, "I->A");
    check_chain_map(dec.ib, dec.I, dec.B, "I->B");
    check_chain_map(dec.ja, dec.A, dec.X, "A->X");
    check_chain_map(dec.jb, dec.B, dec.X, "B->X");

    ShortExactSequence ses;
    const std::size_t top = dec.X.top_degree();
    for (std::size_t p = 0; p <= top; ++p) {
        const std::size_t da = dec.A.dim(p), db = dec.B.dim(p);
        const RatMatrix ia = dec.ia.matrix(p, da);
        const RatMatrix ib = dec.ib.matrix(p, db);
        RatMatrix inj(da + db, dec.I.dim(p));
        for (std::size_t j = 0; j < dec.I.dim(p); ++j) {
            for (std::size_t i = 0; i < da; ++i) inj(i, j) = ia(i, j);
            for (std::size_t i = 0; i < db; ++i) inj(da + i, j) = -ib(i, j);
        }
        const RatMatrix ja = dec.ja.matrix(p, dec.X.dim(p));
        const RatMatrix jb = dec.jb.matrix(p, dec.X.dim(p));
        RatMatrix sur(dec.X.dim(p), da + db);
        for (std::size_t i = 0; i < dec.X.dim(p); ++i) {
            for (std::size_t j = 0; j < da; ++j) sur(i, j) = ja(i, j);
            for (std::size_t j = 0; j < db; ++j) sur(i, da + j) = jb(i, j);
        }
        if (!(sur * inj).is_zero())
            throw std::invalid_argument("short_exact: composite is nonzero in degree " +
                                        std::to_string(p));
        const std::size_t ri = rank(inj), rs = rank(sur);
        if (ri != dec.I.dim(p))
            throw std::invalid_argument("short_exact: injection not injective in degree " +
                                        std::to_string(p));
        if (rs != dec.X.dim(p))
            throw std::invalid_argument("short_exact: surjection not surjective in degree " +
                                        std::to_string(p));
        if (ri + rs != da + db)
            throw std::invalid_argument("short_exact: not exact in the middle in degree " +
                                        std::to_string(p));
        ses.inject.push_back(std::move(inj));
        ses.surject.push_back(std::move(sur));
    }
    return ses;
}

namespace {

/// Coordinates of a cycle's class in the given homology basis: solve against
/// [h | boundary basis] and keep the h-part.
RatVector express_class(const BasisList& h, const BasisList& boundaries, const RatVector& cycle) {
    std::vector<RatVector> cols = h.vectors;
    cols.insert(cols.end(), boundaries.vectors.begin(), boundaries.vectors.end());
    auto x = solve(RatMatrix::from_columns(h.ambient_dim, cols), cycle);
    if (!x) throw std::logic_error("les: cycle is not spanned by the homology basis");
    return RatVector(x->begin(), x->begin() + h.size());
}

void check_graded_bases(const BasedChainComplex& c, const HomologyData& hd, const GradedBases& g,
                        const char* name) {
    if (g.degrees() != hd.betti.size())
        throw std::invalid_argument(std::string("les: basis for ") + name +
                                    " covers the wrong number of degrees");
    for (std::size_t p = 0; p < hd.betti.size(); ++p) {
        if (g[p].size() != hd.betti[p])
            throw std::invalid_argument(std::string("les: basis for ") + name +
                                        " has wrong cardinality in degree " + std::to_string(p));
        for (const auto& v : g[p].vectors)
            if (!is_zero(c.boundary_or_zero(p) * v))
                throw std::invalid_argument(std::string("les: basis vector for ") + name +
                                            " is not a cycle in degree " + std::to_string(p));
        std::vector<RatVector> cols = g[p].vectors;
        cols.insert(cols.end(), hd.boundary_bases[p].vectors.begin(),
                    hd.boundary_bases[p].vectors.end());
        if (rank(RatMatrix::from_columns(c.dim(p), cols)) != cols.size())
            throw std::invalid_argument(std::string("les: basis classes for ") + name +
                                        " are dependent in degree " + std::to_string(p));
    }
}

}  // namespace

RatVector connecting_image(const Decomposition& dec, std::size_t degree, const RatVector& x_cycle,
                           const RatVector* perturbation) {
    const std::size_t p = degree;
    if (x_cycle.size() != dec.X.dim(p))
        throw std::invalid_argument("connecting_image: cycle has wrong dimension");
    if (!is_zero(dec.X.boundary_or_zero(p) * x_cycle))
        throw std::invalid_argument("connecting_image: input is not a cycle");

    // Canonical cellwise splitting x = ja(u) + jb(v), v supported on the
    // interior cells of B.
    RatVector u(dec.A.dim(p)), v(dec.B.dim(p));
    for (std::size_t i = 0; i < dec.A.dim(p); ++i) {
        const auto& im = dec.ja.cells[p][i];
        u[i] = Rational(im.sign) * x_cycle[im.index];
    }
    for (std::size_t i = 0; i < dec.B.dim(p); ++i) {
        const auto& im = dec.jb.cells[p][i];
        if (im.index < dec.A.dim(p)) continue;  // identified circle cell, already in u
        v[i] = Rational(im.sign) * x_cycle[im.index];
    }
    if (perturbation) {
        if (perturbation->size() != dec.I.dim(p))
            throw std::invalid_argument("connecting_image: perturbation has wrong dimension");
        u = add(u, dec.ia.push(p, *perturbation, dec.A.dim(p)));
        v = sub(v, dec.ib.push(p, *perturbation, dec.B.dim(p)));
    }

    const RatVector du = dec.A.boundary_or_zero(p) * u;
    const RatVector dv = dec.B.boundary_or_zero(p) * v;

    // du = ia(w); pull back over the circle cells and check the support.
    RatVector w(dec.I.dim(p - 1));
    for (std::size_t j = 0; j < dec.I.dim(p - 1); ++j) {
        const auto& im = dec.ia.cells[p - 1][j];
        w[j] = Rational(im.sign) * du[im.index];
    }
    if (dec.ia.push(p - 1, w, dec.A.dim(p - 1)) != du ||
        dec.ib.push(p - 1, scaled(w, Rational(-1)), dec.B.dim(p - 1)) != dv)
        throw std::logic_error("connecting_image: boundary does not land on the intersection");
    return w;
}

BasedChainComplex LongExactSequence::as_complex() const {
    BasedChainComplex c;
    for (const auto& t : terms) c.dims.push_back(t.dim);
    c.boundaries = maps;
    return c;
}

LongExactSequence les(const Decomposition& dec, const GradedBases& bi, const GradedBases& ba,
                      const GradedBases& bb, const GradedBases& bx) {
    short_exact(dec);  // also re-validates the chain maps

    LongExactSequence l;
    l.hom_i = homology(dec.I);
    l.hom_a = homology(dec.A);
    l.hom_b = homology(dec.B);
    l.hom_x = homology(dec.X);
    l.basis_i = bi.degrees() ? bi : canonical_bases(l.hom_i);
    l.basis_a = ba.degrees() ? ba : canonical_bases(l.hom_a);
    l.basis_b = bb.degrees() ? bb : canonical_bases(l.hom_b);
    l.basis_x = bx.degrees() ? bx : canonical_bases(l.hom_x);
    check_graded_bases(dec.I, l.hom_i, l.basis_i, "I");
    check_graded_bases(dec.A, l.hom_a, l.basis_a, "A");
    check_graded_bases(dec.B, l.hom_b, l.basis_b, "B");
    check_graded_bases(dec.X, l.hom_x, l.basis_x, "X");

    const std::size_t top = dec.X.top_degree();
    auto betti_i = [&](std::size_t p) {
        return p < l.hom_i.betti.size() ? l.hom_i.betti[p] : 0;
    };
    auto betti_ab = [&](std::size_t p) {
        const std::size_t a = p < l.hom_a.betti.size() ? l.hom_a.betti[p] : 0;
        const std::size_t b = p < l.hom_b.betti.size() ? l.hom_b.betti[p] : 0;
        return a + b;
    };
    auto betti_x = [&](std::size_t p) {
        return p < l.hom_x.betti.size() ? l.hom_x.betti[p] : 0;
    };

    for (std::size_t p = 0; p <= top; ++p) {
        std::ostringstream hx, hab, hi;
        hx << "H" << p << "(X)";
        hab << "H" << p << "(A)+H" << p << "(B)";
        hi << "H" << p << "(I)";
        l.terms.push_back({LongExactSequence::Space::X, p, betti_x(p), hx.str()});
        l.terms.push_back({LongExactSequence::Space::AB, p, betti_ab(p), hab.str()});
        l.terms.push_back({LongExactSequence::Space::I, p, betti_i(p), hi.str()});
    }
    while (!l.terms.empty() && l.terms.back().dim == 0) l.terms.pop_back();
    if (l.terms.empty()) throw std::logic_error("les: empty sequence");

    auto h_of = [&](std::size_t p, LongExactSequence::Space s) -> const BasisList& {
        switch (s) {
            case LongExactSequence::Space::X: return l.basis_x[p];
            case LongExactSequence::Space::I: return l.basis_i[p];
            default: throw std::logic_error("les: no single basis for the sum term");
        }
    };

    for (std::size_t k = 1; k < l.terms.size(); ++k) {
        const auto& src = l.terms[k];
        const auto& dst = l.terms[k - 1];
        RatMatrix m(dst.dim, src.dim);
        const std::size_t p = src.degree;

        if (src.space == LongExactSequence::Space::AB) {
            // (u, v) |-> ja(u) + jb(v), expressed in the X basis
            std::size_t col = 0;
            auto push_side = [&](const CellMap& jmap, const BasedChainComplex& side,
                                 const BasisList& basis) {
                for (const auto& z : basis.vectors) {
                    const RatVector image = jmap.push(p, z, dec.X.dim(p));
                    const RatVector coords =
                        express_class(l.basis_x[p], l.hom_x.boundary_bases[p], image);
                    for (std::size_t i = 0; i < coords.size(); ++i) m(i, col) = coords[i];
                    ++col;
                }
            };
            push_side(dec.ja, dec.A, l.basis_a[p]);
            push_side(dec.jb, dec.B, l.basis_b[p]);
        } else if (src.space == LongExactSequence::Space::I) {
            // z |-> ([ia z], -[ib z]) in the A and B blocks
            const std::size_t da = l.basis_a[p].size();
            for (std::size_t j = 0; j < h_of(p, src.space).size(); ++j) {
                const RatVector& z = l.basis_i[p].vectors[j];
                const RatVector ca = express_class(l.basis_a[p], l.hom_a.boundary_bases[p],
                                                   dec.ia.push(p, z, dec.A.dim(p)));
                const RatVector cb = express_class(l.basis_b[p], l.hom_b.boundary_bases[p],
                                                   dec.ib.push(p, z, dec.B.dim(p)));
                for (std::size_t i = 0; i < ca.size(); ++i) m(i, j) = ca[i];
                for (std::size_t i = 0; i < cb.size(); ++i) m(da + i, j) = -cb[i];
            }
        } else {
            // connecting map H_p(X) -> H_{p-1}(I)
            for (std::size_t j = 0; j < l.basis_x[p].size(); ++j) {
                const RatVector w = connecting_image(dec, p, l.basis_x[p].vectors[j]);
                const RatVector coords =
                    express_class(l.basis_i[p - 1], l.hom_i.boundary_bases[p - 1], w);
                for (std::size_t i = 0; i < coords.size(); ++i) m(i, j) = coords[i];
            }
        }
        l.maps.push_back(std::move(m));
    }

    // Exactness is a hard invariant of a valid decomposition.
    const BasedChainComplex hc = l.as_complex();
    const auto vr = validate(hc);
    if (!vr.ok) throw std::logic_error("les: sequence is not a complex: " + vr.message);
    for (std::size_t k = 0; k < l.terms.size(); ++k) {
        const std::size_t rk = rank(hc.boundary_or_zero(k));
        const std::size_t rk1 = rank(hc.boundary_or_zero(k + 1));
        if (rk + rk1 != l.terms[k].dim) {
            std::ostringstream os;
            os << "les: sequence not exact at term " << k << " (" << l.terms[k].label << ")";
            throw std::logic_error(os.str());
        }
    }
    return l;
}

LongExactSequence les(const Decomposition& dec) {
    return les(dec, GradedBases{}, GradedBases{}, GradedBases{}, GradedBases{});
}

namespace {

BasisList standard_basis(std::size_t dim) {
    BasisList b(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        RatVector v(dim);
        v[i] = 1;
        b.push_back(std::move(v));
    }
    return b;
}

}  // namespace

AdaptedBases adapted_bases(const LongExactSequence& l, AdaptedPattern pattern) {
    AdaptedAttempt attempt = try_adapted_bases(l, pattern);
    if (!attempt.ok) {
        std::ostringstream os;
        os << "adapted_bases: over-determined pattern at term " << attempt.failed_term << " ("
           << l.terms[attempt.failed_term].label << "): pinned determinant is "
           << attempt.pinned_det.str() << "; the fixed bases are incompatible";
        throw std::invalid_argument(os.str());
    }
    return std::move(attempt.bases);
}

AdaptedAttempt try_adapted_bases(const LongExactSequence& l, AdaptedPattern pattern) {
    const BasedChainComplex hc = l.as_complex();
    const std::size_t N = l.terms.size() - 1;

    auto fixed = [&](std::size_t k) {
        const auto s = l.terms[k].space;
        if (s == LongExactSequence::Space::I) return true;
        if (pattern == AdaptedPattern::kPiecesGiven) return s == LongExactSequence::Space::AB;
        return s == LongExactSequence::Space::X;
    };

    AdaptedAttempt result;
    AdaptedBases& out = result.bases;
    out.h.resize(N + 1);
    out.h_prime.resize(N + 1);
    out.dets.resize(N + 1);
    out.choices.degrees.resize(N + 1);

    bool prev_pinned = false;
    std::size_t prev_b_count = 0;
    for (std::size_t k = 0; k <= N; ++k) {
        const std::size_t dim = l.terms[k].dim;

        BasisList s_part(dim);
        if (k > 0) {
            if (prev_pinned) {
                s_part = standard_basis(dim);
            } else {
                const RatMatrix mk = hc.boundary_or_zero(k);
                for (const auto& v : out.choices.degrees[k - 1].b.vectors) {
                    auto x = solve(mk, v);
                    if (!x) throw std::logic_error("adapted_bases: section solve failed");
                    s_part.push_back(std::move(*x));
                }
            }
            if (s_part.size() != prev_b_count)
                throw std::logic_error("adapted_bases: section count mismatch");
        }

        const BasisList ker = kernel_basis(hc.boundary_or_zero(k));
        BasisList b_part(dim);
        bool pinned = false;
        if (k < N && fixed(k + 1) && ker.size() > 0) {
            const BasisList next_ker = kernel_basis(hc.boundary_or_zero(k + 1));
            if (next_ker.size() == 0) {
                // The next fixed term has a unique section; its basis forces
                // b_k = m_{k+1}(h_{k+1}).
                const RatMatrix mk1 = hc.boundary_or_zero(k + 1);
                if (mk1.cols() != ker.size())
                    throw std::logic_error("adapted_bases: pinned dimension mismatch");
                for (std::size_t j = 0; j < mk1.cols(); ++j) b_part.push_back(mk1.col(j));
                pinned = true;
            }
        }
        if (!pinned) b_part = ker;

        BasisList h_prime(dim);
        for (const auto& v : b_part.vectors) h_prime.push_back(v);
        for (const auto& v : s_part.vectors) h_prime.push_back(v);
        if (h_prime.size() != dim) throw std::logic_error("adapted_bases: assembled set wrong size");
        Rational d = dim == 0 ? Rational(1) : det(h_prime.to_matrix());
        if (d.is_zero()) throw std::logic_error("adapted_bases: assembled set is not a basis");

        if (fixed(k)) {
            if (pinned || b_part.size() == 0) {
                if (d != 1) {
                    result.failed_term = k;
                    result.pinned_det = d;
                    return result;
                }
            } else if (d != 1) {
                // Rescale the first image-basis vector by the inverse
                // determinant, as in the degree-by-degree construction.
                b_part.vectors[0] = scaled(b_part.vectors[0], Rational(1) / d);
                h_prime.vectors[0] = b_part.vectors[0];
                d = 1;
            }
            out.h[k] = standard_basis(dim);
        } else {
            BasisList h = standard_basis(dim);
            if (dim > 0 && d != 1) h.vectors[0] = scaled(h.vectors[0], d);
            else if (dim == 0 && d != 1)
                throw std::invalid_argument("adapted_bases: empty free term with determinant != 1");
            out.h[k] = std::move(h);
        }

        out.h_prime[k] = h_prime;
        // [h'_k, h_k]
        out.dets[k] = dim == 0 ? Rational(1)
                               : change_of_basis_det(h_prime, out.h[k]);
        if (out.dets[k] != 1)
            throw std::logic_error("adapted_bases: determinant normalization failed");

        out.choices.degrees[k].b = b_part;
        out.choices.degrees[k].s_images = s_part;
        out.choices.degrees[k].l_images = BasisList(dim);

        prev_pinned = pinned;
        prev_b_count = b_part.size();
    }

    // End-to-end check: the torsion of the sequence, re-based so each term's
    // distinguished basis is the adapted h_k, with these b/s choices.
    BasedChainComplex rebased = hc;
    std::vector<RatMatrix> hmat(N + 1);
    for (std::size_t k = 0; k <= N; ++k) hmat[k] = out.h[k].to_matrix();
    TorsionChoices rebased_choices = out.choices;
    for (std::size_t k = 1; k <= N; ++k) {
        // H_{k-1}^{-1} m_k H_k, with H diagonal-scaled identities
        RatMatrix m = hc.boundary_or_zero(k) * hmat[k];
        RatMatrix res(m.rows(), m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            auto x = solve(hmat[k - 1], m.col(j));
            if (!x) throw std::logic_error("adapted_bases: rebase solve failed");
            for (std::size_t i = 0; i < m.rows(); ++i) res(i, j) = (*x)[i];
        }
        rebased.boundaries[k - 1] = std::move(res);
    }
    for (std::size_t k = 0; k <= N; ++k) {
        auto convert = [&](BasisList& part) {
            for (auto& v : part.vectors) {
                auto x = solve(hmat[k], v);
                if (!x) throw std::logic_error("adapted_bases: choice rebase failed");
                v = std::move(*x);
            }
        };
        convert(rebased_choices.degrees[k].b);
        convert(rebased_choices.degrees[k].s_images);
    }
    out.les_torsion = torsion_acyclic(rebased, rebased_choices);

    // Unpack the constructed term bases into homology bases of the
    // underlying spaces, as cycle vectors.
    auto combine = [](const BasisList& reference, const RatVector& coords, std::size_t offset,
                      std::size_t count) {
        RatVector v(reference.ambient_dim);
        for (std::size_t i = 0; i < count; ++i)
            if (!coords[offset + i].is_zero()) v = add(v, scaled(reference.vectors[i], coords[offset + i]));
        return v;
    };
    out.out_x.h.resize(l.basis_x.degrees());
    out.out_a.h.resize(l.basis_a.degrees());
    out.out_b.h.resize(l.basis_b.degrees());
    for (std::size_t p = 0; p < l.basis_x.degrees(); ++p)
        out.out_x.h[p] = BasisList(l.basis_x[p].ambient_dim);
    for (std::size_t p = 0; p < l.basis_a.degrees(); ++p)
        out.out_a.h[p] = BasisList(l.basis_a[p].ambient_dim);
    for (std::size_t p = 0; p < l.basis_b.degrees(); ++p)
        out.out_b.h[p] = BasisList(l.basis_b[p].ambient_dim);

    for (std::size_t k = 0; k <= N; ++k) {
        const auto& term = l.terms[k];
        const std::size_t p = term.degree;
        for (const auto& coords : out.h[k].vectors) {
            if (term.space == LongExactSequence::Space::X) {
                out.out_x.h[p].push_back(combine(l.basis_x[p], coords, 0, l.basis_x[p].size()));
            } else if (term.space == LongExactSequence::Space::AB) {
                const std::size_t da = l.basis_a[p].size();
                bool in_a = true;
                for (std::size_t i = da; i < coords.size(); ++i)
                    if (!coords[i].is_zero()) in_a = false;
                if (in_a) {
                    out.out_a.h[p].push_back(combine(l.basis_a[p], coords, 0, da));
                } else {
                    for (std::size_t i = 0; i < da; ++i)
                        if (!coords[i].is_zero())
                            throw std::logic_error("adapted_bases: sum-term basis vector mixes sides");
                    out.out_b.h[p].push_back(
                        combine(l.basis_b[p], coords, da, l.basis_b[p].size()));
                }
            }
            // circle terms keep the bases they were built with
        }
    }
    // Degrees of X/A/B above the trimmed sequence keep their input bases.
    for (std::size_t p = 0; p < out.out_x.h.size(); ++p)
        if (out.out_x.h[p].size() != l.basis_x[p].size()) {
            if (out.out_x.h[p].size() != 0)
                throw std::logic_error("adapted_bases: partial X basis in degree " + std::to_string(p));
            out.out_x.h[p] = l.basis_x[p];
        }
    for (std::size_t p = 0; p < out.out_a.h.size(); ++p)
        if (out.out_a.h[p].size() != l.basis_a[p].size()) {
            if (out.out_a.h[p].size() != 0)
                throw std::logic_error("adapted_bases: partial A basis in degree " + std::to_string(p));
            out.out_a.h[p] = l.basis_a[p];
        }
    for (std::size_t p = 0; p < out.out_b.h.size(); ++p)
        if (out.out_b.h[p].size() != l.basis_b[p].size()) {
            if (out.out_b.h[p].size() != 0)
                throw std::logic_error("adapted_bases: partial B basis in degree " + std::to_string(p));
            out.out_b.h[p] = l.basis_b[p];
        }
    result.ok = true;
    return result;
}

WholeGivenResult adapted_whole_given(const Decomposition& dec, const GradedBases& bx) {
    WholeGivenResult r;
    GradedBases bi = canonical_bases(homology(dec.I));
    const GradedBases ba = canonical_bases(homology(dec.A));
    const GradedBases bb = canonical_bases(homology(dec.B));

    for (std::size_t attempt_no = 0;; ++attempt_no) {
        r.l = les(dec, bi, ba, bb, bx);
        AdaptedAttempt attempt = try_adapted_bases(r.l, AdaptedPattern::kWholeGiven);
        if (attempt.ok) {
            r.bases = std::move(attempt.bases);
            return r;
        }
        const auto& term = r.l.terms[attempt.failed_term];
        if (term.space != LongExactSequence::Space::I || attempt_no >= r.l.terms.size())
            throw std::invalid_argument(
                "adapted_whole_given: over-determined pattern not resolvable at term " +
                term.label);
        // Absorb the pinned determinant into the circle basis of that degree
        // (the delta_2 normalization); the basis matrix row scales by the
        // determinant, making the pinned determinant exactly 1 on rebuild.
        bi.h[term.degree].vectors[0] = scaled(bi.h[term.degree].vectors[0], attempt.pinned_det);
        r.circle_adjustment *= attempt.pinned_det;
    }
}

MultiplicativityReport multiplicativity(const Decomposition& dec, const LongExactSequence& l) {
    MultiplicativityReport r;
    r.t_a = torsion(dec.A, l.basis_a, default_choices(dec.A, l.hom_a, l.basis_a)).value;
    r.t_b = torsion(dec.B, l.basis_b, default_choices(dec.B, l.hom_b, l.basis_b)).value;
    r.t_i = torsion(dec.I, l.basis_i, default_choices(dec.I, l.hom_i, l.basis_i)).value;
    r.t_x = torsion(dec.X, l.basis_x, default_choices(dec.X, l.hom_x, l.basis_x)).value;
    r.t_h = torsion_acyclic(l.as_complex()).value;
    r.lhs = r.t_a * r.t_b;
    r.rhs = r.t_i * r.t_x * r.t_h;
    r.equal_abs = abs(r.lhs) == abs(r.rhs);
    return r;
}

}  // namespace torsionkit
