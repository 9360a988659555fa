#include "torsionkit/pairing.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace torsionkit {

namespace {

struct EdgeEnds {
    bool is_loop = false;
    std::size_t tail = 0, head = 0;
};

EdgeEnds edge_ends(const BasedChainComplex& c, std::size_t e) {
    EdgeEnds ends;
    const RatMatrix d1 = c.boundary_or_zero(1);
    bool have_tail = false, have_head = false;
    for (std::size_t v = 0; v < c.dim(0); ++v) {
        const Rational& coeff = d1(v, e);
        if (coeff.is_zero()) continue;
        if (coeff == 1 && !have_head) {
            ends.head = v;
            have_head = true;
        } else if (coeff == -1 && !have_tail) {
            ends.tail = v;
            have_tail = true;
        } else {
            throw std::invalid_argument("edge " + std::to_string(e) +
                                        " does not have an elementary boundary");
        }
    }
    ends.is_loop = !have_head && !have_tail;
    if (have_head != have_tail)
        throw std::invalid_argument("edge " + std::to_string(e) + " has a half-open boundary");
    return ends;
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

OneVertexModel one_vertex_reduction(const SurfaceComplex& x,
                                    const std::vector<std::size_t>* edge_preference) {
    if (!x.boundary_circles.empty())
        throw std::invalid_argument("one_vertex_reduction: surface has boundary");
    const auto vr = validate_surface(x);
    if (!vr.ok) throw std::invalid_argument("one_vertex_reduction: invalid surface: " + vr.message);

    const std::size_t nv = x.complex.dim(0), ne = x.complex.dim(1);
    std::vector<EdgeEnds> ends(ne);
    for (std::size_t e = 0; e < ne; ++e) ends[e] = edge_ends(x.complex, e);

    std::vector<std::size_t> order(ne);
    std::iota(order.begin(), order.end(), 0);
    if (edge_preference) {
        if (edge_preference->size() != ne)
            throw std::invalid_argument("one_vertex_reduction: preference must list every edge");
        order = *edge_preference;
    }

    DisjointSet dsu(nv);
    std::vector<bool> in_tree(ne, false);
    std::size_t tree_size = 0;
    for (std::size_t e : order) {
        if (ends[e].is_loop) continue;
        if (dsu.unite(ends[e].tail, ends[e].head)) {
            in_tree[e] = true;
            ++tree_size;
        }
    }
    if (tree_size + 1 != nv)
        throw std::invalid_argument("one_vertex_reduction: 1-skeleton is disconnected");

    OneVertexModel m;
    std::vector<std::size_t> new_index(ne, SIZE_MAX);
    for (std::size_t e = 0; e < ne; ++e) {
        if (in_tree[e]) {
            m.tree_edges.push_back(e);
            continue;
        }
        new_index[e] = m.kept_edges.size();
        m.kept_edges.push_back(e);
    }

    const std::size_t nl = m.kept_edges.size();
    m.model.complex.dims = {1, nl, x.complex.dim(2)};
    RatMatrix d1(1, nl);
    RatMatrix d2(nl, x.complex.dim(2));
    const RatMatrix xd2 = x.complex.boundary_or_zero(2);
    for (std::size_t j = 0; j < x.complex.dim(2); ++j)
        for (std::size_t e = 0; e < ne; ++e)
            if (new_index[e] != SIZE_MAX) d2(new_index[e], j) = xd2(e, j);
    m.model.complex.boundaries = {std::move(d1), std::move(d2)};
    for (const auto& w : x.attaching_words) {
        AttachingWord nw;
        for (const auto& letter : w)
            if (!in_tree[letter.edge]) nw.push_back({new_index[letter.edge], letter.sign});
        m.model.attaching_words.push_back(std::move(nw));
    }
    m.model.face_orientations = x.face_orientations;
    if (!x.complex.cell_labels.empty()) {
        m.model.complex.cell_labels.assign(3, {});
        m.model.complex.cell_labels[0] = {"v"};
        for (std::size_t e : m.kept_edges)
            m.model.complex.cell_labels[1].push_back(x.complex.cell_labels[1][e]);
        m.model.complex.cell_labels[2] = x.complex.cell_labels[2];
    }
    const auto mv = validate_surface(m.model);
    if (!mv.ok) throw std::logic_error("one_vertex_reduction: invalid model: " + mv.message);

    // projection kills tree edges
    m.project = RatMatrix(nl, ne);
    for (std::size_t e = 0; e < ne; ++e)
        if (new_index[e] != SIZE_MAX) m.project(new_index[e], e) = 1;

    // lift: loop + tree path closing it up (boundary of the lift vanishes)
    // Tree paths are found by BFS parents in the collapsed tree.
    std::vector<std::vector<std::pair<std::size_t, int>>> adj(nv);  // (edge, +1 tail->head)
    for (std::size_t e = 0; e < ne; ++e) {
        if (!in_tree[e]) continue;
        adj[ends[e].tail].emplace_back(e, 1);
        adj[ends[e].head].emplace_back(e, -1);
    }
    auto tree_path = [&](std::size_t from, std::size_t to) {
        // chain t with d(t) = v_to - v_from
        RatVector t(ne);
        if (from == to) return t;
        std::vector<int> parent_edge(nv, -1);
        std::vector<int> parent_dir(nv, 0);
        std::vector<std::size_t> parent(nv, SIZE_MAX);
        std::vector<std::size_t> queue{from};
        std::vector<bool> seen(nv, false);
        seen[from] = true;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const std::size_t v = queue[qi];
            for (auto [e, dir] : adj[v]) {
                const std::size_t w = dir == 1 ? ends[e].head : ends[e].tail;
                if (seen[w]) continue;
                seen[w] = true;
                parent[w] = v;
                parent_edge[w] = static_cast<int>(e);
                parent_dir[w] = dir;
                queue.push_back(w);
            }
        }
        if (!seen[to]) throw std::logic_error("one_vertex_reduction: tree path not found");
        std::size_t v = to;
        while (v != from) {
            t[parent_edge[v]] += parent_dir[v];
            v = parent[v];
        }
        return t;
    };
    m.lift = RatMatrix(ne, nl);
    for (std::size_t j = 0; j < nl; ++j) {
        const std::size_t e = m.kept_edges[j];
        RatVector v(ne);
        v[e] = 1;
        if (!ends[e].is_loop) v = add(v, tree_path(ends[e].head, ends[e].tail));
        if (!is_zero(x.complex.boundary_or_zero(1) * v))
            throw std::logic_error("one_vertex_reduction: lift is not a cycle");
        for (std::size_t i = 0; i < ne; ++i) m.lift(i, j) = v[i];
    }
    return m;
}

namespace {

/// The vertex link of a one-vertex model: the cyclic, oriented order of
/// edge end-points around the vertex, reconstructed from the corners of the
/// attaching words (faces with orientation -1 contribute their inverse
/// word). Returns position-by-end-point, ends indexed as 2*loop + (0 tail,
/// 1 head).
std::vector<std::size_t> link_positions(const SurfaceComplex& model) {
    const std::size_t nl = model.complex.dim(1);
    if (nl == 0) return {};
    const std::size_t points = 2 * nl;

    std::vector<AttachingWord> words;
    for (std::size_t f = 0; f < model.num_faces(); ++f) {
        AttachingWord w = model.attaching_words[f];
        if (model.face_orientations[f] == -1) {
            AttachingWord rev;
            for (auto it = w.rbegin(); it != w.rend(); ++it) rev.push_back({it->edge, -it->sign});
            w = std::move(rev);
        }
        words.push_back(std::move(w));
    }

    // Orientability: every loop letter occurs exactly once with each sign.
    std::vector<int> plus(nl, 0), minus(nl, 0);
    for (const auto& w : words)
        for (const auto& letter : w) (letter.sign == 1 ? plus : minus)[letter.edge]++;
    for (std::size_t e = 0; e < nl; ++e)
        if (plus[e] != 1 || minus[e] != 1)
            throw std::invalid_argument(
                "intersection form: complex is not a coherently oriented closed surface");

    auto end_point = [](const SignedLetter& s) {  // where the traversal ends
        return 2 * s.edge + (s.sign == 1 ? 1u : 0u);
    };
    auto start_point = [](const SignedLetter& s) {  // where the traversal starts
        return 2 * s.edge + (s.sign == 1 ? 0u : 1u);
    };

    // Corner after letter i runs from the end-point of w_i to the start
    // point of w_{i+1}; every point has exactly one outgoing corner.
    std::vector<std::size_t> next(points, SIZE_MAX);
    for (const auto& w : words) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            const auto& cur = w[i];
            const auto& nxt = w[(i + 1) % w.size()];
            if (next[end_point(cur)] != SIZE_MAX)
                throw std::logic_error("intersection form: vertex link is not a 1-manifold");
            next[end_point(cur)] = start_point(nxt);
        }
    }

    std::vector<std::size_t> pos(points, SIZE_MAX);
    std::size_t cur = 0;
    for (std::size_t step = 0; step < points; ++step) {
        if (pos[cur] != SIZE_MAX || next[cur] == SIZE_MAX)
            throw std::logic_error("intersection form: vertex link is not a single circle");
        pos[cur] = step;
        cur = next[cur];
    }
    if (cur != 0) throw std::logic_error("intersection form: vertex link does not close up");
    return pos;
}

/// I(a, b) for loop letters by chord interleaving around the oriented link.
int letter_intersection(const std::vector<std::size_t>& pos, std::size_t a, std::size_t b,
                        std::size_t points) {
    if (a == b) return 0;
    const std::size_t ha = pos[2 * a + 1], ta = pos[2 * a];
    const std::size_t hb = pos[2 * b + 1], tb = pos[2 * b];
    auto rel = [&](std::size_t p) { return (p + points - ha) % points; };
    const std::size_t rta = rel(ta), rhb = rel(hb), rtb = rel(tb);
    const bool hb_inside = rhb < rta;
    const bool tb_inside = rtb < rta;
    if (hb_inside == tb_inside) return 0;  // chords do not interleave
    // (ha, tb, ta, hb) reads +1, (ha, hb, ta, tb) reads -1
    return tb_inside ? 1 : -1;
}

}  // namespace

RatMatrix intersection_pairing(const SurfaceComplex& x, const BasisList& rows,
                               const BasisList& cols,
                               const std::vector<std::size_t>* edge_preference) {
    const OneVertexModel m = one_vertex_reduction(x, edge_preference);
    const std::size_t nl = m.model.complex.dim(1);
    const std::vector<std::size_t> pos = link_positions(m.model);

    RatMatrix letters(nl, nl);
    for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = 0; b < nl; ++b)
            letters(a, b) = letter_intersection(pos, a, b, 2 * nl);

    auto project_cycle = [&](const RatVector& v) {
        if (v.size() != x.complex.dim(1))
            throw std::invalid_argument("intersection pairing: cycle has wrong dimension");
        if (!is_zero(x.complex.boundary_or_zero(1) * v))
            throw std::invalid_argument("intersection pairing: input is not a cycle");
        return m.project * v;
    };
    std::vector<RatVector> r, c;
    for (const auto& v : rows.vectors) r.push_back(project_cycle(v));
    for (const auto& v : cols.vectors) c.push_back(project_cycle(v));

    RatMatrix result(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            Rational acc(0);
            for (std::size_t a = 0; a < nl; ++a) {
                if (r[i][a].is_zero()) continue;
                for (std::size_t b = 0; b < nl; ++b)
                    if (!letters(a, b).is_zero() && !c[j][b].is_zero())
                        acc += r[i][a] * c[j][b] * letters(a, b);
            }
            result(i, j) = acc;
        }
    return result;
}

RatMatrix intersection_form(const SurfaceComplex& x, const BasisList& basis,
                            const std::vector<std::size_t>* edge_preference) {
    RatMatrix f = intersection_pairing(x, basis, basis, edge_preference);
    for (std::size_t i = 0; i < f.rows(); ++i) {
        if (!f(i, i).is_zero()) throw std::logic_error("intersection form: nonzero diagonal");
        for (std::size_t j = i + 1; j < f.cols(); ++j)
            if (f(i, j) != -f(j, i)) throw std::logic_error("intersection form: not skew-symmetric");
    }
    return f;
}

BasisList symplectic_basis(const SurfaceComplex& x) {
    const HomologyData hd = homology(x.complex);
    const BasisList h1 = hd.representatives[1];
    const std::size_t m = h1.size();
    if (m == 0 || m % 2 != 0)
        throw std::invalid_argument("symplectic_basis: H_1 rank must be positive and even");
    const RatMatrix omega = intersection_form(x, h1);

    // Symplectic Gram-Schmidt over the rationals, coordinates w.r.t. h1.
    auto form = [&](const RatVector& u, const RatVector& v) {
        Rational acc(0);
        for (std::size_t i = 0; i < m; ++i) {
            if (u[i].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!omega(i, j).is_zero() && !v[j].is_zero()) acc += u[i] * omega(i, j) * v[j];
        }
        return acc;
    };
    std::vector<RatVector> pool;
    for (std::size_t i = 0; i < m; ++i) {
        RatVector e(m);
        e[i] = 1;
        pool.push_back(std::move(e));
    }
    std::vector<RatVector> es, fs;
    while (!pool.empty()) {
        RatVector u = pool.front();
        pool.erase(pool.begin());
        std::size_t partner = SIZE_MAX;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!form(u, pool[i]).is_zero()) {
                partner = i;
                break;
            }
        if (partner == SIZE_MAX)
            throw std::invalid_argument("symplectic_basis: form is degenerate");
        RatVector v = scaled(pool[partner], Rational(1) / form(u, pool[partner]));
        pool.erase(pool.begin() + partner);
        for (auto& w : pool) {
            // w' = w + Omega(w,u) v - Omega(w,v) u keeps the pairings clean
            w = add(w, sub(scaled(v, form(w, u)), scaled(u, form(w, v))));
        }
        es.push_back(std::move(u));
        fs.push_back(std::move(v));
    }

    BasisList gamma(x.complex.dim(1));
    auto to_cycle = [&](const RatVector& coords) {
        RatVector v(x.complex.dim(1));
        for (std::size_t i = 0; i < m; ++i)
            if (!coords[i].is_zero()) v = add(v, scaled(h1.vectors[i], coords[i]));
        return v;
    };
    for (const auto& e : es) gamma.push_back(to_cycle(e));
    for (const auto& f : fs) gamma.push_back(to_cycle(f));

    // Gamma_i . Gamma_{i+g} = +1, everything else 0.
    const RatMatrix check = intersection_form(x, gamma);
    const std::size_t g = m / 2;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Rational expect(0);
            if (j == i + g) expect = 1;
            if (i == j + g) expect = -1;
            if (check(i, j) != expect)
                throw std::logic_error("symplectic_basis: canonical form not reached");
        }
    return gamma;
}

RatMatrix period_matrix(const SurfaceComplex& x, const BasisList& gamma, const BasisList& h1) {
    RatMatrix p = intersection_pairing(x, gamma, h1);
    if (p.rows() != p.cols()) throw std::invalid_argument("period_matrix: size mismatch");
    if (det(p).is_zero()) throw std::logic_error("period_matrix: singular period matrix");
    return p;
}

RatVector fundamental_class_vector(const SurfaceComplex& x) {
    if (!x.boundary_circles.empty())
        throw std::invalid_argument("fundamental_class_vector: surface has boundary");
    RatVector z = fundamental_chain(x);
    if (!is_zero(x.complex.boundary_or_zero(2) * z))
        throw std::logic_error("fundamental_class_vector: orientation chain is not a cycle");
    return z;
}

RatMatrix delta_02(const SurfaceComplex& x, const RatVector& h0, const RatVector& h2) {
    if (h0.size() != x.complex.dim(0) || h2.size() != x.complex.dim(2))
        throw std::invalid_argument("delta_02: chain dimensions mismatch");
    // connected closed oriented surface: [h0] = lambda [point]
    Rational lambda(0);
    for (const auto& c : h0) lambda += c;

    const RatVector z = fundamental_class_vector(x);
    // h2 = mu z
    Rational mu(0);
    bool set = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i].is_zero()) {
            if (!h2[i].is_zero())
                throw std::invalid_argument("delta_02: h2 is not a multiple of the fundamental class");
            continue;
        }
        const Rational ratio = h2[i] / z[i];
        if (!set) {
            mu = ratio;
            set = true;
        } else if (ratio != mu) {
            throw std::invalid_argument("delta_02: h2 is not a multiple of the fundamental class");
        }
    }
    RatMatrix d(1, 1);
    d(0, 0) = lambda * mu;
    return d;
}

}  // namespace torsionkit
