#include "torsionkit/torsion.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace torsionkit {

namespace {

void check_homology_cardinalities(const HomologyData& hd, const GradedBases& h) {
    if (h.degrees() != hd.betti.size())
        throw std::invalid_argument("torsion: homology bases cover the wrong number of degrees");
    for (std::size_t p = 0; p < hd.betti.size(); ++p)
        if (h[p].size() != hd.betti[p]) {
            std::ostringstream os;
            os << "torsion: homology basis in degree " << p << " has " << h[p].size()
               << " vectors, betti is " << hd.betti[p];
            throw std::invalid_argument(os.str());
        }
}

Rational small_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    return Rational(num(rng), den(rng));
}

RatMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = small_rational(rng);
        if (!det(m).is_zero()) return m;
    }
}

RatVector random_combination(const BasisList& basis, std::size_t ambient,
                             std::mt19937_64& rng) {
    RatVector v(ambient);
    for (const auto& w : basis.vectors) {
        const Rational coeff = small_rational(rng);
        if (coeff.is_zero()) continue;
        for (std::size_t i = 0; i < ambient; ++i) v[i] += coeff * w[i];
    }
    return v;
}

}  // namespace

TorsionChoices default_choices(const BasedChainComplex& c, const HomologyData& hd) {
    return default_choices(c, hd, canonical_bases(hd));
}

TorsionChoices default_choices(const BasedChainComplex& c, const HomologyData& hd,
                               const GradedBases& h) {
    check_homology_cardinalities(hd, h);
    const std::size_t n = c.top_degree();
    TorsionChoices tc;
    tc.degrees.resize(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        auto& deg = tc.degrees[p];
        deg.b = hd.boundary_bases[p];
        deg.l_images = h[p];
        deg.s_images = BasisList(c.dim(p));
        if (p > 0) {
            const RatMatrix d = c.boundary_or_zero(p);
            for (const auto& v : hd.boundary_bases[p - 1].vectors) {
                auto x = solve(d, v);
                if (!x) throw std::logic_error("default_choices: boundary vector not in image");
                deg.s_images.push_back(std::move(*x));
            }
        }
    }
    return tc;
}

TorsionChoices random_choices(const BasedChainComplex& c, const HomologyData& hd,
                              const GradedBases& h, std::uint64_t seed) {
    TorsionChoices tc = default_choices(c, hd, h);
    std::mt19937_64 rng(seed);
    const std::size_t n = c.top_degree();

    // Recombine each b_p first; the sections of the recombined b_{p-1} must
    // be recomputed before noise is added, so this runs as a second pass.
    std::vector<RatMatrix> mixers(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        const std::size_t k = tc.degrees[p].b.size();
        mixers[p] = random_invertible(k, rng);
        BasisList mixed(c.dim(p));
        for (std::size_t j = 0; j < k; ++j) {
            RatVector v(c.dim(p));
            for (std::size_t i = 0; i < k; ++i) {
                if (mixers[p](i, j).is_zero()) continue;
                for (std::size_t t = 0; t < c.dim(p); ++t)
                    v[t] += mixers[p](i, j) * tc.degrees[p].b.vectors[i][t];
            }
            mixed.push_back(std::move(v));
        }
        tc.degrees[p].b = std::move(mixed);
    }
    for (std::size_t p = 1; p <= n; ++p) {
        const RatMatrix d = c.boundary_or_zero(p);
        const BasisList ker = kernel_basis(d);
        BasisList s(c.dim(p));
        for (const auto& v : tc.degrees[p - 1].b.vectors) {
            auto x = solve(d, v);
            if (!x) throw std::logic_error("random_choices: recombined vector not in image");
            s.push_back(add(*x, random_combination(ker, c.dim(p), rng)));
        }
        tc.degrees[p].s_images = std::move(s);
    }
    for (std::size_t p = 0; p <= n; ++p) {
        BasisList l(c.dim(p));
        for (const auto& v : tc.degrees[p].l_images.vectors)
            l.push_back(add(v, random_combination(hd.boundary_bases[p], c.dim(p), rng)));
        tc.degrees[p].l_images = std::move(l);
    }
    return tc;
}

TorsionValue torsion(const BasedChainComplex& c, const GradedBases& h,
                     const TorsionChoices& choices) {
    const auto v = validate(c);
    if (!v.ok) throw std::invalid_argument("torsion: invalid complex: " + v.message);
    const std::size_t n = c.top_degree();
    if (choices.degrees.size() != n + 1)
        throw std::invalid_argument("torsion: choices cover the wrong number of degrees");
    if (h.degrees() != n + 1)
        throw std::invalid_argument("torsion: homology bases cover the wrong number of degrees");

    TorsionValue result;
    result.value = 1;
    result.degree_factors.resize(n + 1);
    for (std::size_t p = 0; p <= n; ++p) {
        const auto& deg = choices.degrees[p];
        const std::size_t expected_s = p == 0 ? 0 : choices.degrees[p - 1].b.size();
        if (deg.s_images.size() != expected_s)
            throw std::invalid_argument("torsion: section count mismatch");
        if (deg.l_images.size() != h[p].size())
            throw std::invalid_argument("torsion: lift count mismatch");

        RatMatrix assembled(c.dim(p), deg.b.size() + deg.l_images.size() + deg.s_images.size());
        std::size_t col = 0;
        auto put = [&](const BasisList& part) {
            for (const auto& w : part.vectors) {
                if (w.size() != c.dim(p)) throw std::invalid_argument("torsion: vector dimension mismatch");
                for (std::size_t i = 0; i < c.dim(p); ++i) assembled(i, col) = w[i];
                ++col;
            }
        };
        put(deg.b);
        put(deg.l_images);
        put(deg.s_images);
        if (assembled.cols() != c.dim(p))
            throw std::invalid_argument("torsion: assembled set has wrong cardinality in degree " +
                                        std::to_string(p));

        const Rational d = det(assembled);
        if (d.is_zero())
            throw std::invalid_argument("torsion: assembled set is not a basis in degree " +
                                        std::to_string(p));
        result.degree_factors[p] = d;
        // degree-p factor enters with exponent (-1)^(p+1)
        if (p % 2 == 0)
            result.value /= d;
        else
            result.value *= d;
    }
    return result;
}

TorsionValue torsion(const BasedChainComplex& c) {
    const HomologyData hd = homology(c);
    const GradedBases h = canonical_bases(hd);
    return torsion(c, h, default_choices(c, hd, h));
}

TorsionValue torsion_acyclic(const BasedChainComplex& c, const TorsionChoices& choices) {
    const HomologyData hd = homology(c);
    for (std::size_t p = 0; p < hd.betti.size(); ++p)
        if (hd.betti[p] != 0)
            throw std::invalid_argument("torsion_acyclic: complex has homology in degree " +
                                        std::to_string(p));
    GradedBases empty;
    for (std::size_t p = 0; p <= c.top_degree(); ++p) empty.h.emplace_back(c.dim(p));
    return torsion(c, empty, choices);
}

TorsionValue torsion_acyclic(const BasedChainComplex& c) {
    const HomologyData hd = homology(c);
    for (std::size_t p = 0; p < hd.betti.size(); ++p)
        if (hd.betti[p] != 0)
            throw std::invalid_argument("torsion_acyclic: complex has homology in degree " +
                                        std::to_string(p));
    return torsion(c, canonical_bases(hd), default_choices(c, hd));
}

namespace {

// The oracle avoids the library's elimination entirely: ranks come from
// brute-force minor search, determinants from cofactor expansion.

Rational cofactor_det(const RatMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return Rational(1);
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Rational acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j).is_zero()) continue;
        RatMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, cc++) = m(i, k);
            }
        }
        const Rational term = m(0, j) * cofactor_det(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

bool next_subset(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    if (k == 0) return false;
    std::size_t i = k;
    while (i-- > 0) {
        if (idx[i] + (k - i) < n + 0) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_subset(std::size_t k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    return idx;
}

std::size_t minor_rank(const RatMatrix& m) {
    const std::size_t bound = std::min(m.rows(), m.cols());
    for (std::size_t r = bound; r >= 1; --r) {
        auto rows = first_subset(r);
        do {
            auto cols = first_subset(r);
            do {
                RatMatrix sub(r, r);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) sub(i, j) = m(rows[i], cols[j]);
                if (!cofactor_det(sub).is_zero()) return r;
            } while (next_subset(cols, m.cols()));
        } while (next_subset(rows, m.rows()));
    }
    return 0;
}

}  // namespace

TorsionValue torsion_oracle(const BasedChainComplex& c, const GradedBases& h) {
    if (c.total_dim() > 12)
        throw std::invalid_argument("torsion_oracle: total dimension exceeds 12");
    const auto v = validate(c);
    if (!v.ok) throw std::invalid_argument("torsion_oracle: invalid complex: " + v.message);
    const std::size_t n = c.top_degree();
    if (h.degrees() != n + 1)
        throw std::invalid_argument("torsion_oracle: homology bases cover the wrong number of degrees");

    std::vector<RatMatrix> d(n + 2);
    std::vector<std::size_t> r(n + 2, 0);
    for (std::size_t p = 0; p <= n + 1; ++p) {
        d[p] = c.boundary_or_zero(p);
        r[p] = minor_rank(d[p]);
    }
    for (std::size_t p = 0; p <= n; ++p) {
        if (r[p] + r[p + 1] + h[p].size() != c.dim(p))
            throw std::invalid_argument("torsion_oracle: basis cardinality mismatch in degree " +
                                        std::to_string(p));
    }

    // A family {R_p} of pivot column subsets (|R_p| = rank d_p) is valid when
    // every assembled square matrix below is invertible. Each degree is
    // independent of the others, so valid subsets can be collected per
    // degree; the torsion must agree across every combination, which reduces
    // to agreeing across the per-degree alternatives.
    std::optional<Rational> total;
    Rational first_value;
    std::vector<std::vector<Rational>> per_pair_dets(n + 1);

    // Degree p uses R_{p+1} (columns of d_{p+1}) and R_p (identity columns).
    // The determinant of [ d_{p+1}[:,R_{p+1}] | h_p | Id[:,R_p] ] couples
    // consecutive subsets, so enumerate pairs (R_p, R_{p+1}) jointly: choose
    // each R_p once, then validate all degree matrices.
    std::vector<std::vector<std::vector<std::size_t>>> candidates(n + 2);
    for (std::size_t p = 0; p <= n + 1; ++p) {
        if (r[p] == 0) {
            candidates[p].push_back({});
            continue;
        }
        auto idx = first_subset(r[p]);
        do {
            candidates[p].push_back(idx);
        } while (next_subset(idx, d[p].cols()));
    }

    // Depth-first over subset families; evaluate lazily per degree.
    std::vector<std::size_t> pick(n + 2, 0);
    std::vector<Rational> degree_dets(n + 1);
    std::size_t valid_families = 0;

    auto degree_det = [&](std::size_t p) -> Rational {
        const auto& rp1 = candidates[p + 1][pick[p + 1]];
        const auto& rp = candidates[p][pick[p]];
        RatMatrix m(c.dim(p), c.dim(p));
        std::size_t col = 0;
        for (auto j : rp1) {
            for (std::size_t i = 0; i < c.dim(p); ++i) m(i, col) = d[p + 1](i, j);
            ++col;
        }
        for (const auto& w : h[p].vectors) {
            for (std::size_t i = 0; i < c.dim(p); ++i) m(i, col) = w[i];
            ++col;
        }
        for (auto j : rp) m(j, col++) = 1;
        return cofactor_det(m);
    };

    // Enumerate recursively so partial failures prune early.
    std::vector<std::size_t> stack;
    auto rec = [&](auto&& self, std::size_t p) -> void {
        if (p > n + 1) {
            Rational value(1);
            for (std::size_t q = 0; q <= n; ++q) {
                if (q % 2 == 0)
                    value /= degree_dets[q];
                else
                    value *= degree_dets[q];
            }
            if (!total) {
                total = value;
            } else if (*total != value) {
                throw std::logic_error("torsion_oracle: inconsistent values across subset families");
            }
            ++valid_families;
            return;
        }
        for (pick[p] = 0; pick[p] < candidates[p].size(); ++pick[p]) {
            if (p >= 1) {
                degree_dets[p - 1] = degree_det(p - 1);
                if (degree_dets[p - 1].is_zero()) continue;
            }
            self(self, p + 1);
        }
    };
    rec(rec, 0);

    if (!total) throw std::logic_error("torsion_oracle: no valid subset family found");
    TorsionValue tv;
    tv.value = *total;
    return tv;
}

TorsionValue torsion_oracle(const BasedChainComplex& c) {
    const HomologyData hd = homology(c);
    return torsion_oracle(c, canonical_bases(hd));
}

}  // namespace torsionkit
