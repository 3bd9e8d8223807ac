#pragma once

// JSON forms shared by the C API, the CLI and campaign reports. Rationals
// are always "p/q" strings.

#include <json.hpp>

#include "knaster/conjugacy.hpp"
#include "knaster/knaster.hpp"
#include "knaster/pl_map.hpp"

namespace knaster::io {

using nlohmann::json;

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const PLMap& f);
json to_json(const PLHomeo& f);
json to_json(const OpenPLMap& f);
/// {"breakpoints": [["x","y"], ...]}
PLMap map_from_json(const json& j);
PLHomeo homeo_from_json(const json& j);
OpenPLMap open_from_json(const json& j);

json to_json(const TruncatedKnasterPoint& x);
TruncatedKnasterPoint point_from_json(const json& j);
json to_json(const CertifiedDistance& d);
json to_json(const DiagonalHomeo& f);
DiagonalHomeo diagonal_from_json(const json& j);
json to_json(const GeneralDiagonalMap& f);
GeneralDiagonalMap general_from_json(const json& j);

json to_json(const ConjugatorCertificate& c);
json to_json(const BlockConjugateResult& r);
json to_json(const ModBoundCertificate& c);
json to_json(const TentWitness& w);
json to_json(const LowerBoundCertificate& c);

/// Parses text as JSON, throwing Parse with the parser's message.
json parse(std::string_view text);

}  // namespace knaster::io
