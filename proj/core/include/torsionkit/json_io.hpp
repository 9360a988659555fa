#ifndef TORSIONKIT_JSON_IO_HPP
#define TORSIONKIT_JSON_IO_HPP

#include <json.hpp>

#include "torsionkit/mv.hpp"
#include "torsionkit/surface.hpp"
#include "torsionkit/torsion.hpp"

namespace torsionkit {

using Json = nlohmann::ordered_json;

/// Rationals serialize as strings "p/q" ("/q" omitted when 1), always in
/// lowest terms with a positive denominator.
Json to_json(const Rational& q);
Json to_json(const RatMatrix& m);
Json to_json(const BasisList& b);
Json to_json(const RatVector& v);

/// {"dims": [...], "boundaries": [[...]], "labels": [[...]]}; labels are
/// optional. Round-trips exactly.
Json complex_to_json(const BasedChainComplex& c);
BasedChainComplex complex_from_json(const Json& j);

/// Complex plus boundary-circle registry, attaching words (letters "e" and
/// "-e" by label) and face orientations.
Json surface_to_json(const SurfaceComplex& s);
SurfaceComplex surface_from_json(const Json& j);

Json decomposition_to_json(const PantsDecomposition& d);

Json betti_to_json(const HomologyData& hd);
Json homology_report(const BasedChainComplex& c);

/// {"value": ..., "abs": ..., "degree_factors": [...]}
Json torsion_value_to_json(const TorsionValue& t);

/// Terms in descending (paper) order, maps, per-term adapted determinants
/// and the sequence torsion when adapted data is supplied.
Json les_report(const LongExactSequence& l, const AdaptedBases* adapted);

/// Parse "p/q" strings, complexes and surfaces from text; throws
/// std::invalid_argument with a useful message on malformed input.
BasedChainComplex complex_from_string(const std::string& text);
SurfaceComplex surface_from_string(const std::string& text);

}  // namespace torsionkit

#endif  // TORSIONKIT_JSON_IO_HPP
