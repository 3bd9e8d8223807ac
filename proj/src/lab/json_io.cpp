#include "json_io.hpp"

#include "knaster/error.hpp"

namespace knaster::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

json points_to_json(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(json::array({p.x.str(), p.y.str()}));
  return {{"breakpoints", std::move(arr)}};
}

}  // namespace

json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw Error(ErrorCode::Parse, "rationals must be \"p/q\" strings, got " + j.dump());
}

json to_json(const PLMap& f) { return points_to_json(f.breakpoints()); }
json to_json(const PLHomeo& f) { return points_to_json(f.breakpoints()); }
json to_json(const OpenPLMap& f) { return points_to_json(f.breakpoints()); }

PLMap map_from_json(const json& j) {
  const json& bp = field(j, "breakpoints");
  if (!bp.is_array()) throw Error(ErrorCode::Parse, "'breakpoints' must be an array");
  std::vector<Point> pts;
  for (const auto& p : bp) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::Parse, "breakpoints are [x, y] pairs");
    pts.push_back({rational_from_json(p[0]), rational_from_json(p[1])});
  }
  return PLMap(std::move(pts));
}

PLHomeo homeo_from_json(const json& j) { return PLHomeo(map_from_json(j)); }
OpenPLMap open_from_json(const json& j) { return OpenPLMap(map_from_json(j)); }

json to_json(const TruncatedKnasterPoint& x) {
  json arr = json::array();
  for (const auto& c : x.coords) arr.push_back(c.str());
  return arr;
}

TruncatedKnasterPoint point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::Parse, "points are non-empty arrays of rationals");
  TruncatedKnasterPoint out;
  for (const auto& c : j) out.coords.push_back(rational_from_json(c));
  return out;
}

json to_json(const CertifiedDistance& d) {
  json out{{"lower", d.lower.str()}, {"upper", d.upper.str()}, {"N", d.depth}};
  out["witness"] = d.witness ? to_json(*d.witness) : json(nullptr);
  return out;
}

json to_json(const DiagonalHomeo& f) { return {{"coord", f.coord}, {"map", to_json(f.map)}}; }

DiagonalHomeo diagonal_from_json(const json& j) {
  return {field(j, "coord").get<std::size_t>(), homeo_from_json(field(j, "map"))};
}

json to_json(const GeneralDiagonalMap& f) {
  return {{"target", f.target}, {"source", f.source}, {"window", to_json(f.window)}};
}

GeneralDiagonalMap general_from_json(const json& j) {
  return {field(j, "target").get<std::size_t>(), field(j, "source").get<std::size_t>(),
          open_from_json(field(j, "window"))};
}

json to_json(const ConjugatorCertificate& c) {
  return {{"f", to_json(c.f)},
          {"g", to_json(c.g)},
          {"conjugator", to_json(c.conjugator)},
          {"achieved", c.achieved.str()},
          {"eta", c.eta.str()}};
}

json to_json(const BlockConjugateResult& r) {
  json parts = json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  return {{"conjugator", to_json(r.conjugator)},
          {"parts", std::move(parts)},
          {"achieved", r.achieved.str()},
          {"eta", r.eta.str()},
          {"norm", r.norm.str()},
          {"max_block_norm", r.max_block_norm.str()}};
}

json to_json(const ModBoundCertificate& c) {
  return {{"distance", to_json(c.distance)},
          {"epsilon", c.epsilon.str()},
          {"radius", c.radius.str()},
          {"certified", c.certified}};
}

json to_json(const TentWitness& w) {
  return {{"x", w.x.str()}, {"case", w.kind}, {"gap", w.gap.str()}, {"tf", w.tf.str()}, {"tg", w.tg.str()}};
}

json to_json(const LowerBoundCertificate& c) {
  json out{{"point", to_json(c.point)},
           {"image_f", to_json(c.image_f)},
           {"image_g", to_json(c.image_g)},
           {"lower", c.lower.str()},
           {"bound", c.bound.str()},
           {"coordinate", c.coordinate},
           {"term", c.term.str()},
           {"certified", c.certified}};
  if (c.tent) out["tent_witness"] = to_json(*c.tent);
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace knaster::io
