#include "torsionkit/surface.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace torsionkit {

namespace {

RatVector signed_counts(const AttachingWord& w, std::size_t num_edges) {
    RatVector v(num_edges);
    for (const auto& letter : w) {
        if (letter.edge >= num_edges) throw std::invalid_argument("attaching word: edge out of range");
        v[letter.edge] += letter.sign;
    }
    return v;
}

std::string prefixed_label(const std::string& prefix, const std::string& label) {
    return prefix.empty() ? label : prefix + label;
}

}  // namespace

const BoundaryCircle* SurfaceComplex::find_circle(const std::string& name) const {
    for (const auto& c : boundary_circles)
        if (c.name == name) return &c;
    return nullptr;
}

long SurfaceComplex::genus() const {
    const long chi = euler_characteristic(complex);
    const long n = static_cast<long>(boundary_circles.size());
    const long two_g = 2 - n - chi;
    if (two_g < 0 || two_g % 2 != 0)
        throw std::logic_error("genus: chi and boundary count are inconsistent");
    return two_g / 2;
}

ValidationResult validate_surface(const SurfaceComplex& s) {
    auto v = validate(s.complex);
    if (!v.ok) return v;
    if (s.complex.dims.size() > 3) return {false, s.complex.top_degree(), "top degree exceeds 2"};

    const std::size_t faces = s.num_faces();
    if (s.attaching_words.size() != faces) return {false, 2, "attaching word count mismatch"};
    if (s.face_orientations.size() != faces) return {false, 2, "face orientation count mismatch"};
    for (int o : s.face_orientations)
        if (o != 1 && o != -1) return {false, 2, "face orientation must be +-1"};

    for (std::size_t f = 0; f < faces; ++f) {
        const RatVector counts = signed_counts(s.attaching_words[f], s.complex.dim(1));
        if (counts != s.complex.boundary_or_zero(2).col(f))
            return {false, 2, "attaching word does not reproduce the degree-2 boundary"};
    }

    std::set<std::size_t> circle_edges;
    for (const auto& c : s.boundary_circles) {
        if (c.vertex >= s.complex.dim(0) || c.edge >= s.complex.dim(1))
            return {false, 1, "boundary circle cell out of range"};
        if (!is_zero(s.complex.boundary_or_zero(1).col(c.edge)))
            return {false, 1, "boundary circle 1-cell is not a cycle"};
        if (!circle_edges.insert(c.edge).second)
            return {false, 1, "two boundary circles share a 1-cell"};
    }

    if (faces > 0) {
        // The fundamental chain's boundary must be +-1 on each registered
        // circle loop and zero elsewhere.
        const RatVector d = s.complex.boundary_or_zero(2) * fundamental_chain(s);
        std::map<std::size_t, int> expected;
        for (const auto& c : s.boundary_circles) expected[c.edge] = 1;
        for (std::size_t e = 0; e < d.size(); ++e) {
            if (expected.count(e)) {
                if (d[e] != 1 && d[e] != -1)
                    return {false, 1, "fundamental chain is not +-1 on a boundary circle"};
            } else if (!d[e].is_zero()) {
                return {false, 1, "fundamental chain has boundary off the circle registry"};
            }
        }
    }
    return {};
}

RatVector fundamental_chain(const SurfaceComplex& s) {
    RatVector z(s.num_faces());
    for (std::size_t f = 0; f < s.num_faces(); ++f) z[f] = s.face_orientations[f];
    return z;
}

int circle_sigma(const SurfaceComplex& s, const BoundaryCircle& c) {
    if (s.num_faces() == 0) throw std::invalid_argument("circle_sigma: surface has no 2-cells");
    const RatVector d = s.complex.boundary_or_zero(2) * fundamental_chain(s);
    const Rational& coeff = d[c.edge];
    if (coeff == 1) return 1;
    if (coeff == -1) return -1;
    throw std::logic_error("circle_sigma: boundary coefficient is not +-1");
}

SurfaceComplex circle() {
    SurfaceComplex s;
    s.complex.dims = {1, 1};
    s.complex.boundaries.push_back(RatMatrix(1, 1));
    s.complex.cell_labels = {{"v"}, {"c"}};
    s.boundary_circles.push_back({"c", 0, 0});
    return s;
}

SurfaceComplex circles(std::size_t k) {
    SurfaceComplex s;
    s.complex.dims = {k, k};
    s.complex.boundaries.push_back(RatMatrix(k, k));
    s.complex.cell_labels.resize(2);
    for (std::size_t j = 0; j < k; ++j) {
        const std::string suffix = std::to_string(j + 1);
        s.complex.cell_labels[0].push_back("v" + suffix);
        s.complex.cell_labels[1].push_back("c" + suffix);
        s.boundary_circles.push_back({"c" + suffix, j, j});
    }
    return s;
}

SurfaceComplex cylinder() {
    SurfaceComplex s;
    s.complex.dims = {2, 3, 1};
    RatMatrix d1(2, 3);  // edges: bottom, top, a (v1 -> v2)
    d1(0, 2) = -1;
    d1(1, 2) = 1;
    RatMatrix d2(3, 1);  // F = top - bottom
    d2(0, 0) = -1;
    d2(1, 0) = 1;
    s.complex.boundaries = {d1, d2};
    s.complex.cell_labels = {{"v1", "v2"}, {"bottom", "top", "a"}, {"F"}};
    // square boundary: a top a^-1 bottom^-1
    s.attaching_words = {{{2, 1}, {1, 1}, {2, -1}, {0, -1}}};
    s.face_orientations = {1};
    s.boundary_circles.push_back({"bottom", 0, 0});
    s.boundary_circles.push_back({"top", 1, 1});
    return s;
}

SurfaceComplex pants() {
    SurfaceComplex s;
    s.complex.dims = {3, 5, 1};
    RatMatrix d1(3, 5);  // edges: c1, c2, c3, a1 (v1->v2), a2 (v1->v3)
    d1(0, 3) = -1;
    d1(1, 3) = 1;
    d1(0, 4) = -1;
    d1(2, 4) = 1;
    RatMatrix d2(5, 1);  // F = c1 - c2 - c3
    d2(0, 0) = 1;
    d2(1, 0) = -1;
    d2(2, 0) = -1;
    s.complex.boundaries = {d1, d2};
    s.complex.cell_labels = {{"v1", "v2", "v3"}, {"c1", "c2", "c3", "a1", "a2"}, {"F"}};
    // c1 a1 c2^-1 a1^-1 a2 c3^-1 a2^-1
    s.attaching_words = {{{0, 1}, {3, 1}, {1, -1}, {3, -1}, {4, 1}, {2, -1}, {4, -1}}};
    s.face_orientations = {1};
    s.boundary_circles.push_back({"c1", 0, 0});
    s.boundary_circles.push_back({"c2", 1, 1});
    s.boundary_circles.push_back({"c3", 2, 2});
    return s;
}

namespace {

SurfaceComplex with_prefix(const SurfaceComplex& s, const std::string& prefix) {
    SurfaceComplex r = s;
    for (auto& per_degree : r.complex.cell_labels)
        for (auto& l : per_degree) l = prefixed_label(prefix, l);
    for (auto& c : r.boundary_circles) c.name = prefixed_label(prefix, c.name);
    return r;
}

struct GluePlan {
    std::vector<std::size_t> circ_a, circ_b;  // indices into the registries
    std::vector<int> eps;                     // loop identification sign per pair
    bool flip_b = false;
};

GluePlan plan_gluing(const SurfaceComplex& a, const std::vector<std::string>& ca,
                     const SurfaceComplex& b, const std::vector<std::string>& cb) {
    if (ca.size() != cb.size() || ca.empty())
        throw std::invalid_argument("glue: circle name lists must be nonempty and of equal length");
    if (a.num_faces() == 0 || b.num_faces() == 0)
        throw std::invalid_argument("glue: both sides need at least one 2-cell");

    GluePlan plan;
    auto locate = [](const SurfaceComplex& s, const std::string& name) {
        for (std::size_t i = 0; i < s.boundary_circles.size(); ++i)
            if (s.boundary_circles[i].name == name) return i;
        throw std::invalid_argument("glue: '" + name + "' is not a boundary circle");
    };
    std::set<std::size_t> seen_a, seen_b;
    for (std::size_t j = 0; j < ca.size(); ++j) {
        plan.circ_a.push_back(locate(a, ca[j]));
        plan.circ_b.push_back(locate(b, cb[j]));
        if (!seen_a.insert(plan.circ_a.back()).second || !seen_b.insert(plan.circ_b.back()).second)
            throw std::invalid_argument("glue: repeated circle in gluing list");
    }

    const int sa0 = circle_sigma(a, a.boundary_circles[plan.circ_a[0]]);
    const int sb0 = circle_sigma(b, b.boundary_circles[plan.circ_b[0]]);
    plan.flip_b = (-sa0 * sb0) == -1;
    for (std::size_t j = 0; j < ca.size(); ++j) {
        const int sa = circle_sigma(a, a.boundary_circles[plan.circ_a[j]]);
        int sb = circle_sigma(b, b.boundary_circles[plan.circ_b[j]]);
        if (plan.flip_b) sb = -sb;
        plan.eps.push_back(-sa * sb);
    }
    return plan;
}

}  // namespace

SurfaceComplex glue_many(const SurfaceComplex& a, const std::vector<std::string>& ca,
                         const SurfaceComplex& b, const std::vector<std::string>& cb,
                         GlueMaps* maps) {
    const GluePlan plan = plan_gluing(a, ca, b, cb);
    const std::size_t k = ca.size();

    // b-side cell -> (target index, sign) in the glued complex
    std::vector<std::size_t> bv_to_a(b.complex.dim(0), SIZE_MAX);
    std::vector<std::size_t> be_to_a(b.complex.dim(1), SIZE_MAX);
    std::vector<int> be_sign(b.complex.dim(1), 1);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& ca_rec = a.boundary_circles[plan.circ_a[j]];
        const auto& cb_rec = b.boundary_circles[plan.circ_b[j]];
        bv_to_a[cb_rec.vertex] = ca_rec.vertex;
        be_to_a[cb_rec.edge] = ca_rec.edge;
        be_sign[cb_rec.edge] = plan.eps[j];
    }

    const std::size_t av = a.complex.dim(0), ae = a.complex.dim(1), af = a.complex.dim(2);
    std::vector<std::size_t> bv_new(b.complex.dim(0)), be_new(b.complex.dim(1));
    std::size_t nv = av, ne = ae;
    for (std::size_t i = 0; i < b.complex.dim(0); ++i)
        bv_new[i] = (bv_to_a[i] != SIZE_MAX) ? bv_to_a[i] : nv++;
    for (std::size_t i = 0; i < b.complex.dim(1); ++i)
        be_new[i] = (be_to_a[i] != SIZE_MAX) ? be_to_a[i] : ne++;
    const std::size_t nf = af + b.complex.dim(2);

    SurfaceComplex x;
    x.complex.dims = {nv, ne, nf};
    RatMatrix d1(nv, ne), d2(ne, nf);
    const RatMatrix ad1 = a.complex.boundary_or_zero(1);
    const RatMatrix ad2 = a.complex.boundary_or_zero(2);
    const RatMatrix bd1 = b.complex.boundary_or_zero(1);
    const RatMatrix bd2 = b.complex.boundary_or_zero(2);
    for (std::size_t i = 0; i < av; ++i)
        for (std::size_t j = 0; j < ae; ++j) d1(i, j) = ad1(i, j);
    for (std::size_t j = 0; j < b.complex.dim(1); ++j) {
        if (be_to_a[j] != SIZE_MAX) continue;  // identified loops contribute no new column
        for (std::size_t i = 0; i < b.complex.dim(0); ++i)
            if (!bd1(i, j).is_zero()) d1(bv_new[i], be_new[j]) += bd1(i, j);
    }
    for (std::size_t i = 0; i < ae; ++i)
        for (std::size_t j = 0; j < af; ++j) d2(i, j) = ad2(i, j);
    for (std::size_t j = 0; j < b.complex.dim(2); ++j)
        for (std::size_t i = 0; i < b.complex.dim(1); ++i)
            if (!bd2(i, j).is_zero()) d2(be_new[i], af + j) += bd2(i, j) * be_sign[i];
    x.complex.boundaries = {std::move(d1), std::move(d2)};

    // labels; b labels get a "B." prefix on collision
    const bool has_labels = !a.complex.cell_labels.empty() && !b.complex.cell_labels.empty();
    if (has_labels) {
        x.complex.cell_labels.assign(3, {});
        auto fill = [&](std::size_t degree, std::size_t count,
                        const std::vector<std::size_t>* b_map, std::size_t a_count) {
            auto& out = x.complex.cell_labels[degree];
            out.resize(count);
            std::set<std::string> used;
            for (std::size_t i = 0; i < a_count; ++i) {
                out[i] = a.complex.cell_labels[degree][i];
                used.insert(out[i]);
            }
            const auto& bl = b.complex.cell_labels[degree];
            for (std::size_t i = 0; i < bl.size(); ++i) {
                const std::size_t target = b_map ? (*b_map)[i] : a_count + i;
                if (target < a_count) continue;  // identified cell keeps the a label
                std::string l = bl[i];
                if (used.count(l)) l = "B." + l;
                used.insert(l);
                out[target] = l;
            }
        };
        fill(0, nv, &bv_new, av);
        fill(1, ne, &be_new, ae);
        fill(2, nf, nullptr, af);
    }

    x.attaching_words = a.attaching_words;
    for (const auto& w : b.attaching_words) {
        AttachingWord nw;
        for (const auto& letter : w)
            nw.push_back({be_new[letter.edge], letter.sign * be_sign[letter.edge]});
        x.attaching_words.push_back(std::move(nw));
    }
    x.face_orientations = a.face_orientations;
    for (int o : b.face_orientations) x.face_orientations.push_back(plan.flip_b ? -o : o);

    std::set<std::size_t> glued_a(plan.circ_a.begin(), plan.circ_a.end());
    std::set<std::size_t> glued_b(plan.circ_b.begin(), plan.circ_b.end());
    std::set<std::string> circle_names;
    for (std::size_t i = 0; i < a.boundary_circles.size(); ++i) {
        if (glued_a.count(i)) continue;
        x.boundary_circles.push_back(a.boundary_circles[i]);
        circle_names.insert(a.boundary_circles[i].name);
    }
    for (std::size_t i = 0; i < b.boundary_circles.size(); ++i) {
        if (glued_b.count(i)) continue;
        BoundaryCircle c = b.boundary_circles[i];
        c.vertex = bv_new[c.vertex];
        c.edge = be_new[c.edge];
        if (circle_names.count(c.name)) c.name = "B." + c.name;
        x.boundary_circles.push_back(std::move(c));
    }

    if (maps) {
        maps->a_cells.assign(3, {});
        maps->b_cells.assign(3, {});
        for (std::size_t i = 0; i < av; ++i) maps->a_cells[0].push_back({i, 1});
        for (std::size_t i = 0; i < ae; ++i) maps->a_cells[1].push_back({i, 1});
        for (std::size_t i = 0; i < af; ++i) maps->a_cells[2].push_back({i, 1});
        for (std::size_t i = 0; i < b.complex.dim(0); ++i) maps->b_cells[0].push_back({bv_new[i], 1});
        for (std::size_t i = 0; i < b.complex.dim(1); ++i)
            maps->b_cells[1].push_back({be_new[i], be_sign[i]});
        for (std::size_t i = 0; i < b.complex.dim(2); ++i) maps->b_cells[2].push_back({af + i, 1});
    }

    const auto v = validate_surface(x);
    if (!v.ok) throw std::logic_error("glue_many: invalid result: " + v.message);
    return x;
}

SurfaceComplex glue_self(const SurfaceComplex& s, const std::string& c1, const std::string& c2) {
    if (c1 == c2) throw std::invalid_argument("glue: self-gluing of the same circle instance");
    const BoundaryCircle* r1 = s.find_circle(c1);
    const BoundaryCircle* r2 = s.find_circle(c2);
    if (!r1 || !r2) throw std::invalid_argument("glue: circle name not in the boundary registry");
    if (s.num_faces() == 0) throw std::invalid_argument("glue: surface has no 2-cells");

    const int eps = -circle_sigma(s, *r1) * circle_sigma(s, *r2);

    const std::size_t nv0 = s.complex.dim(0), ne0 = s.complex.dim(1), nf = s.complex.dim(2);
    std::vector<std::size_t> v_new(nv0), e_new(ne0);
    std::vector<int> e_sign(ne0, 1);
    std::size_t nv = 0, ne = 0;
    for (std::size_t i = 0; i < nv0; ++i) {
        if (i == r2->vertex) continue;
        v_new[i] = nv++;
    }
    v_new[r2->vertex] = v_new[r1->vertex];
    for (std::size_t i = 0; i < ne0; ++i) {
        if (i == r2->edge) continue;
        e_new[i] = ne++;
    }
    e_new[r2->edge] = e_new[r1->edge];
    e_sign[r2->edge] = eps;

    SurfaceComplex x;
    x.complex.dims = {nv, ne, nf};
    RatMatrix d1(nv, ne), d2(ne, nf);
    const RatMatrix sd1 = s.complex.boundary_or_zero(1);
    const RatMatrix sd2 = s.complex.boundary_or_zero(2);
    for (std::size_t j = 0; j < ne0; ++j) {
        if (j == r2->edge) continue;
        for (std::size_t i = 0; i < nv0; ++i)
            if (!sd1(i, j).is_zero()) d1(v_new[i], e_new[j]) += sd1(i, j);
    }
    for (std::size_t j = 0; j < nf; ++j)
        for (std::size_t i = 0; i < ne0; ++i)
            if (!sd2(i, j).is_zero()) d2(e_new[i], j) += sd2(i, j) * e_sign[i];
    x.complex.boundaries = {std::move(d1), std::move(d2)};

    if (!s.complex.cell_labels.empty()) {
        x.complex.cell_labels.assign(3, {});
        x.complex.cell_labels[0].resize(nv);
        x.complex.cell_labels[1].resize(ne);
        for (std::size_t i = 0; i < nv0; ++i)
            if (i != r2->vertex) x.complex.cell_labels[0][v_new[i]] = s.complex.cell_labels[0][i];
        for (std::size_t i = 0; i < ne0; ++i)
            if (i != r2->edge) x.complex.cell_labels[1][e_new[i]] = s.complex.cell_labels[1][i];
        x.complex.cell_labels[2] = s.complex.cell_labels[2];
    }

    for (const auto& w : s.attaching_words) {
        AttachingWord nw;
        for (const auto& letter : w)
            nw.push_back({e_new[letter.edge], letter.sign * e_sign[letter.edge]});
        x.attaching_words.push_back(std::move(nw));
    }
    x.face_orientations = s.face_orientations;

    for (const auto& c : s.boundary_circles) {
        if (c.name == c1 || c.name == c2) continue;
        x.boundary_circles.push_back({c.name, v_new[c.vertex], e_new[c.edge]});
    }

    const auto v = validate_surface(x);
    if (!v.ok) throw std::logic_error("glue_self: invalid result: " + v.message);
    return x;
}

SurfaceComplex glue(const SurfaceComplex& x, const std::string& cx,
                    const SurfaceComplex& y, const std::string& cy) {
    if (&x == &y) return glue_self(x, cx, cy);
    return glue_many(x, {cx}, y, {cy});
}

SurfaceComplex double_surface(const SurfaceComplex& x, GlueMaps* maps) {
    if (x.boundary_circles.empty())
        throw std::invalid_argument("double_surface: surface is closed");
    const SurfaceComplex a = with_prefix(x, "A.");
    const SurfaceComplex b = with_prefix(x, "B.");
    std::vector<std::string> ca, cb;
    for (const auto& c : a.boundary_circles) ca.push_back(c.name);
    for (const auto& c : b.boundary_circles) cb.push_back(c.name);
    return glue_many(a, ca, b, cb, maps);
}

namespace {

std::string cut_label(int k) { return "S" + std::to_string(k); }
std::string prime_label(int k) { return "S'" + std::to_string(k); }
std::string boundary_label(int k) { return k == 0 ? "S0" : "S-" + std::to_string(k); }

}  // namespace

PantsDecomposition pants_decomposition(int g, int n) {
    if (g < 0 || n < 0 || 2 * g - 2 + n < 1)
        throw std::invalid_argument("pants_decomposition: need g,n >= 0 and 2g-2+n >= 1");

    PantsDecomposition dec;
    dec.g = g;
    dec.n = n;
    auto piece = [&](bool in_torus, const std::string& s0, const std::string& s1,
                     const std::string& s2) {
        PantsDecomposition::Piece p;
        p.nu = static_cast<int>(dec.pieces.size()) + 1;
        p.in_torus = in_torus;
        p.circles = {s0, s1, s2};
        dec.pieces.push_back(std::move(p));
    };

    if (g == 0) {
        if (n == 3) {
            piece(false, boundary_label(0), boundary_label(1), boundary_label(2));
        } else {
            piece(false, boundary_label(0), boundary_label(1), cut_label(1));
            for (int nu = 2; nu <= n - 3; ++nu)
                piece(false, cut_label(nu - 1), boundary_label(nu), cut_label(nu));
            piece(false, cut_label(n - 3), boundary_label(n - 2), boundary_label(n - 1));
        }
    } else if (g == 1) {
        piece(true, prime_label(1), prime_label(1), n == 1 ? boundary_label(0) : cut_label(1));
        for (int nu = 2; nu <= n - 1; ++nu)
            piece(false, cut_label(nu - 1), boundary_label(nu - 2), cut_label(nu));
        if (n >= 2)
            piece(false, cut_label(n - 1), boundary_label(n - 2), boundary_label(n - 1));
    } else {
        for (int nu = 1; nu <= g; ++nu) {
            const bool shared = (g == 2 && n == 0 && nu == 2);
            piece(true, prime_label(nu), prime_label(nu), cut_label(shared ? 1 : nu));
        }
        if (n == 0) {
            if (g == 3) {
                piece(false, cut_label(1), cut_label(2), cut_label(3));
            } else if (g >= 4) {
                piece(false, cut_label(1), cut_label(2), cut_label(g + 1));
                for (int nu = 2; nu <= g - 3; ++nu)
                    piece(false, cut_label(g + nu), cut_label(nu + 1), cut_label(g + nu - 1));
                piece(false, cut_label(2 * g - 3), cut_label(g - 1), cut_label(g));
            }
        } else if (n == 1) {
            if (g == 2) {
                piece(false, cut_label(1), cut_label(2), boundary_label(0));
            } else {
                piece(false, cut_label(1), cut_label(2), cut_label(g + 1));
                for (int nu = 2; nu <= g - 2; ++nu)
                    piece(false, cut_label(g + nu), cut_label(nu + 1), cut_label(g + nu - 1));
                piece(false, boundary_label(0), cut_label(g), cut_label(2 * g - 2));
            }
        } else {
            piece(false, cut_label(1), cut_label(2), cut_label(g + 1));
            for (int nu = 2; nu <= g - 1; ++nu)
                piece(false, cut_label(g + nu), cut_label(nu + 1), cut_label(g + nu - 1));
            for (int nu = g; nu <= g + n - 3; ++nu)
                piece(false, cut_label(g + nu), cut_label(g + nu - 1), boundary_label(nu - g));
            piece(false, cut_label(2 * g + n - 3), boundary_label(n - 1), boundary_label(n - 2));
        }
    }

    if (dec.pieces.size() != static_cast<std::size_t>(2 * g - 2 + n))
        throw std::logic_error("pants_decomposition: piece count mismatch");

    std::map<std::string, PantsDecomposition::Circle> circles;
    for (const auto& p : dec.pieces)
        for (int slot = 0; slot < 3; ++slot) {
            auto& c = circles[p.circles[slot]];
            c.name = p.circles[slot];
            c.is_boundary = c.name.size() > 1 && (c.name[1] == '0' || c.name[1] == '-');
            c.sides.emplace_back(p.nu, slot);
        }
    for (auto& [name, c] : circles) {
        const std::size_t expected = c.is_boundary ? 1 : 2;
        if (c.sides.size() != expected)
            throw std::logic_error("pants_decomposition: circle " + name + " bounds " +
                                   std::to_string(c.sides.size()) + " sides");
        dec.circles.push_back(c);
    }
    return dec;
}

SurfaceWithDecomposition build_surface(int g, int n) {
    PantsDecomposition dec = pants_decomposition(g, n);

    // Cell-level pieces: handle pants come with their cylinder already glued
    // in, leaving one circle (slot 2); plain pants expose slots 0,1,2 as
    // c1,c2,c3.
    struct CellPiece {
        SurfaceComplex surf;
        std::vector<std::pair<std::string, std::string>> open;  // (label, circle name)
    };
    std::vector<CellPiece> pieces;
    for (const auto& p : dec.pieces) {
        const std::string prefix = "p" + std::to_string(p.nu) + ".";
        CellPiece cp;
        if (p.in_torus) {
            SurfaceComplex body = with_prefix(pants(), prefix);
            SurfaceComplex collar = with_prefix(cylinder(), "y" + std::to_string(p.nu) + ".");
            cp.surf = glue_many(body, {prefix + "c1", prefix + "c2"},
                                collar, {collar.boundary_circles[0].name, collar.boundary_circles[1].name});
            cp.open.emplace_back(p.circles[2], prefix + "c3");
        } else {
            cp.surf = with_prefix(pants(), prefix);
            for (int slot = 0; slot < 3; ++slot)
                cp.open.emplace_back(p.circles[slot], prefix + "c" + std::to_string(slot + 1));
        }
        pieces.push_back(std::move(cp));
    }

    std::map<std::string, std::string> open;  // decomposition label -> circle name
    SurfaceComplex assembly = pieces[0].surf;
    for (const auto& [label, circ] : pieces[0].open) open[label] = circ;
    std::vector<bool> done(pieces.size(), false);
    done[0] = true;

    for (std::size_t round = 1; round < pieces.size(); ++round) {
        std::size_t next = SIZE_MAX;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (done[i]) continue;
            for (const auto& [label, circ] : pieces[i].open)
                if (open.count(label)) {
                    next = i;
                    break;
                }
            if (next != SIZE_MAX) break;
        }
        if (next == SIZE_MAX) throw std::logic_error("build_surface: decomposition graph disconnected");

        std::vector<std::string> ca, cb;
        for (const auto& [label, circ] : pieces[next].open) {
            if (!open.count(label)) continue;
            ca.push_back(open[label]);
            cb.push_back(circ);
        }
        assembly = glue_many(assembly, ca, pieces[next].surf, cb);
        for (const auto& [label, circ] : pieces[next].open) {
            if (open.count(label))
                open.erase(label);
            else
                open[label] = circ;
        }
        done[next] = true;
    }

    if (open.size() != static_cast<std::size_t>(n))
        throw std::logic_error("build_surface: wrong number of open circles");
    for (auto& c : assembly.boundary_circles) {
        for (const auto& [label, circ] : open)
            if (c.name == circ) {
                c.name = label;
                break;
            }
    }

    const long chi = euler_characteristic(assembly.complex);
    if (chi != 2 - 2 * g - n) throw std::logic_error("build_surface: Euler characteristic mismatch");
    const auto v = validate_surface(assembly);
    if (!v.ok) throw std::logic_error("build_surface: invalid assembly: " + v.message);
    return {std::move(assembly), std::move(dec)};
}

}  // namespace torsionkit
