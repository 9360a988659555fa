#include "torsionkit/json_io.hpp"

#include <stdexcept>

namespace torsionkit {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const RatVector& v) {
    Json arr = Json::array();
    for (const auto& e : v) arr.push_back(to_string(e));
    return arr;
}

Json to_json(const BasisList& b) {
    Json arr = Json::array();
    for (const auto& v : b.vectors) arr.push_back(to_json(v));
    return arr;
}

Json complex_to_json(const BasedChainComplex& c) {
    Json j;
    j["dims"] = c.dims;
    Json bs = Json::array();
    for (const auto& b : c.boundaries) bs.push_back(to_json(b));
    j["boundaries"] = std::move(bs);
    if (!c.cell_labels.empty()) j["labels"] = c.cell_labels;
    return j;
}

namespace {

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw std::invalid_argument("expected a rational as string or integer");
}

RatMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
    if (!j.is_array() || j.size() != rows)
        throw std::invalid_argument("matrix: wrong row count");
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::invalid_argument("matrix: wrong column count");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_from_json(j[i][k]);
    }
    return m;
}

}  // namespace

BasedChainComplex complex_from_json(const Json& j) {
    if (!j.contains("dims") || !j["dims"].is_array())
        throw std::invalid_argument("complex: missing dims");
    BasedChainComplex c;
    for (const auto& d : j["dims"]) c.dims.push_back(d.get<std::size_t>());
    if (c.dims.empty()) throw std::invalid_argument("complex: dims is empty");
    const auto& bs = j.at("boundaries");
    if (!bs.is_array() || bs.size() + 1 != c.dims.size())
        throw std::invalid_argument("complex: boundary count must be one less than degree count");
    for (std::size_t p = 1; p < c.dims.size(); ++p)
        c.boundaries.push_back(matrix_from_json(bs[p - 1], c.dims[p - 1], c.dims[p]));
    if (j.contains("labels")) {
        for (const auto& per_degree : j["labels"]) {
            c.cell_labels.emplace_back();
            for (const auto& l : per_degree) c.cell_labels.back().push_back(l.get<std::string>());
        }
    }
    const auto v = validate(c);
    if (!v.ok) throw std::invalid_argument("complex: " + v.message);
    return c;
}

Json surface_to_json(const SurfaceComplex& s) {
    Json j;
    j["complex"] = complex_to_json(s.complex);
    Json circles = Json::array();
    for (const auto& c : s.boundary_circles)
        circles.push_back({{"name", c.name}, {"vertex", c.vertex}, {"edge", c.edge}});
    j["boundary_circles"] = std::move(circles);
    Json words = Json::array();
    for (const auto& w : s.attaching_words) {
        Json word = Json::array();
        for (const auto& letter : w) {
            std::string name = !s.complex.cell_labels.empty()
                                   ? s.complex.cell_labels[1][letter.edge]
                                   : "e" + std::to_string(letter.edge);
            word.push_back(letter.sign == 1 ? name : "-" + name);
        }
        words.push_back(std::move(word));
    }
    j["attaching_words"] = std::move(words);
    j["face_orientations"] = s.face_orientations;
    return j;
}

SurfaceComplex surface_from_json(const Json& j) {
    SurfaceComplex s;
    s.complex = complex_from_json(j.at("complex"));

    std::map<std::string, std::size_t> edge_by_label;
    if (!s.complex.cell_labels.empty())
        for (std::size_t e = 0; e < s.complex.cell_labels[1].size(); ++e)
            edge_by_label[s.complex.cell_labels[1][e]] = e;

    for (const auto& c : j.value("boundary_circles", Json::array()))
        s.boundary_circles.push_back(
            {c.at("name").get<std::string>(), c.at("vertex").get<std::size_t>(),
             c.at("edge").get<std::size_t>()});

    for (const auto& word : j.value("attaching_words", Json::array())) {
        AttachingWord w;
        for (const auto& letter : word) {
            std::string text = letter.get<std::string>();
            int sign = 1;
            if (!text.empty() && text[0] == '-') {
                sign = -1;
                text = text.substr(1);
            }
            std::size_t edge;
            if (auto it = edge_by_label.find(text); it != edge_by_label.end()) {
                edge = it->second;
            } else if (text.size() > 1 && text[0] == 'e') {
                edge = std::stoul(text.substr(1));
            } else {
                throw std::invalid_argument("surface: unknown edge '" + text + "' in word");
            }
            w.push_back({edge, sign});
        }
        s.attaching_words.push_back(std::move(w));
    }
    for (const auto& o : j.value("face_orientations", Json::array()))
        s.face_orientations.push_back(o.get<int>());
    if (s.face_orientations.empty() && s.complex.dim(2) > 0)
        s.face_orientations.assign(s.complex.dim(2), 1);

    const auto v = validate_surface(s);
    if (!v.ok) throw std::invalid_argument("surface: " + v.message);
    return s;
}

Json decomposition_to_json(const PantsDecomposition& d) {
    Json j;
    j["genus"] = d.g;
    j["boundary_count"] = d.n;
    j["piece_count"] = d.pieces.size();
    Json pieces = Json::array();
    for (const auto& p : d.pieces)
        pieces.push_back({{"nu", p.nu},
                          {"kind", "pants"},
                          {"in_torus", p.in_torus},
                          {"boundaries", p.circles}});
    j["pieces"] = std::move(pieces);
    Json circles = Json::array();
    for (const auto& c : d.circles) {
        Json sides = Json::array();
        for (const auto& [nu, slot] : c.sides) sides.push_back({{"piece", nu}, {"slot", slot}});
        circles.push_back({{"name", c.name},
                           {"kind", c.is_boundary ? "boundary" : "cut"},
                           {"sides", std::move(sides)}});
    }
    j["circles"] = std::move(circles);
    return j;
}

Json betti_to_json(const HomologyData& hd) {
    Json arr = Json::array();
    for (auto b : hd.betti) arr.push_back(b);
    return arr;
}

Json homology_report(const BasedChainComplex& c) {
    const HomologyData hd = homology(c);
    Json j;
    j["betti"] = betti_to_json(hd);
    j["euler_characteristic"] = euler_characteristic(c);
    Json degrees = Json::array();
    for (std::size_t p = 0; p < hd.betti.size(); ++p) {
        degrees.push_back({{"degree", p},
                           {"cycle_rank", hd.cycles[p].size()},
                           {"boundary_rank", hd.boundary_bases[p].size()},
                           {"representatives", to_json(hd.representatives[p])}});
    }
    j["degrees"] = std::move(degrees);
    return j;
}

Json torsion_value_to_json(const TorsionValue& t) {
    Json j;
    j["value"] = to_string(t.value);
    j["abs"] = to_string(t.abs());
    Json fs = Json::array();
    for (const auto& f : t.degree_factors) fs.push_back(to_string(f));
    j["degree_factors"] = std::move(fs);
    return j;
}

Json les_report(const LongExactSequence& l, const AdaptedBases* adapted) {
    Json j;
    Json terms = Json::array();
    for (auto it = l.terms.rbegin(); it != l.terms.rend(); ++it)
        terms.push_back({{"label", it->label}, {"dim", it->dim}});
    j["terms"] = std::move(terms);
    Json maps = Json::array();
    for (const auto& m : l.maps) maps.push_back(to_json(m));
    j["maps"] = std::move(maps);
    if (adapted) {
        Json dets = Json::array();
        for (auto it = adapted->dets.rbegin(); it != adapted->dets.rend(); ++it)
            dets.push_back(to_string(*it));
        j["adapted_dets"] = std::move(dets);
        j["torsion"] = to_string(adapted->les_torsion.value);
    }
    return j;
}

BasedChainComplex complex_from_string(const std::string& text) {
    Json j = Json::parse(text);
    if (j.contains("complex")) return complex_from_json(j.at("complex"));
    return complex_from_json(j);
}

SurfaceComplex surface_from_string(const std::string& text) {
    return surface_from_json(Json::parse(text));
}

}  // namespace torsionkit
