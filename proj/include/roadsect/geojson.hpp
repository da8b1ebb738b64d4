#pragma once

// GeoJSON feature collections in planar meters. Coordinates are written
// rounded to 9 decimals so repeated runs give byte-identical files.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadsect/error.hpp"
#include "roadsect/evaluate.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/roadgraph.hpp"
#include "roadsect/seeding.hpp"
#include "roadsect/tessellate.hpp"

namespace roadsect::geojson {

using nlohmann::json;

inline double round9(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r; // no negative zero
}

inline json to_json(Point2 p) { return json::array({round9(p.x), round9(p.y)}); }

inline json to_json(const Ring& r) {
  json out = json::array();
  for (const Point2& p : r) out.push_back(to_json(p));
  return out;
}

inline json to_json(const Polygon& p) {
  json rings = json::array({to_json(p.outer())});
  for (const Ring& h : p.inners()) rings.push_back(to_json(h));
  return rings;
}

inline json geometry_json(const Polyline& p) {
  json coords = json::array();
  for (const Point2& v : p.vertices()) coords.push_back(to_json(v));
  return {{"type", "LineString"}, {"coordinates", coords}};
}

inline json geometry_json(const Polygon& p) { return {{"type", "Polygon"}, {"coordinates", to_json(p)}}; }

inline json geometry_json(const MultiPolygon& m) {
  json parts = json::array();
  for (const Polygon& p : m) parts.push_back(to_json(p));
  return {{"type", "MultiPolygon"}, {"coordinates", parts}};
}

inline json geometry_json(Point2 p) { return {{"type", "Point"}, {"coordinates", to_json(p)}}; }

inline json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"properties", std::move(properties)}, {"geometry", std::move(geometry)}};
}

inline json collection(json features) { return {{"type", "FeatureCollection"}, {"features", std::move(features)}}; }

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed document " + path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << doc.dump(1) << '\n';
  if (!out) throw InputError("failed writing " + path);
}

namespace detail {

inline const json& features_of(const json& doc, const std::string& what) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
      !doc["features"].is_array())
    throw InputError(what + " is not a FeatureCollection");
  return doc["features"];
}

inline Point2 point_of(const json& c, std::size_t feature) {
  if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
    throw InputError("feature " + std::to_string(feature) + " has a malformed coordinate");
  return {c[0].get<double>(), c[1].get<double>()};
}

inline std::vector<Point2> points_of(const json& arr, std::size_t feature) {
  if (!arr.is_array()) throw InputError("feature " + std::to_string(feature) + " has malformed coordinates");
  std::vector<Point2> out;
  for (const json& c : arr) out.push_back(point_of(c, feature));
  return out;
}

inline Polygon polygon_of(const json& rings, std::size_t feature) {
  if (!rings.is_array() || rings.empty())
    throw InputError("feature " + std::to_string(feature) + " has a polygon without rings");
  Polygon p;
  const auto outer = points_of(rings[0], feature);
  p.outer().assign(outer.begin(), outer.end());
  for (std::size_t i = 1; i < rings.size(); ++i) {
    const auto hole = points_of(rings[i], feature);
    p.inners().emplace_back(hole.begin(), hole.end());
  }
  return p;
}

struct Bounds {
  bool any = false;
  bool geographic = true;
  void add(Point2 p) {
    any = true;
    if (std::abs(p.x) > 180.0 || std::abs(p.y) > 90.0) geographic = false;
  }
};

inline void reject_geographic(const Bounds& b, const std::string& what) {
  if (b.any && b.geographic)
    throw InputError(what + " looks like longitude/latitude; reproject it to a planar CRS in meters first");
}

// Feature id: the feature's own "id", else properties.id, else its index.
inline std::optional<EdgeId> explicit_id(const json& f) {
  auto parse = [](const json& v) -> std::optional<EdgeId> {
    if (v.is_number_integer()) return v.get<EdgeId>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d) return static_cast<EdgeId>(d);
    }
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      std::size_t used = 0;
      try {
        const long long n = std::stoll(s, &used);
        if (used == s.size()) return n;
      } catch (const std::exception&) {
      }
    }
    return std::nullopt;
  };
  if (f.contains("id")) return parse(f["id"]);
  if (f.contains("properties") && f["properties"].is_object() && f["properties"].contains("id"))
    return parse(f["properties"]["id"]);
  return std::nullopt;
}

inline json properties_of(const json& f) {
  if (f.contains("properties") && f["properties"].is_object()) return f["properties"];
  return json::object();
}

} // namespace detail

inline std::vector<LineFeature> parse_lines(const json& doc) {
  std::vector<LineFeature> out;
  detail::Bounds bounds;
  const json& features = detail::features_of(doc, "line input");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    if (!f.contains("geometry") || !f["geometry"].is_object())
      throw InputError("feature " + std::to_string(i) + " has no geometry");
    const json& g = f["geometry"];
    const std::string type = g.value("type", "");
    std::vector<Point2> pts;
    if (type == "LineString") {
      pts = detail::points_of(g["coordinates"], i);
    } else if (type == "MultiLineString" && g["coordinates"].is_array() && g["coordinates"].size() == 1) {
      pts = detail::points_of(g["coordinates"][0], i);
    } else {
      throw InputError("feature " + std::to_string(i) + " must be a LineString, found " + (type.empty() ? "nothing" : type));
    }
    for (const Point2& p : pts) bounds.add(p);
    LineFeature line;
    try {
      line.geometry = Polyline(pts);
    } catch (const InputError& e) {
      throw InputError("feature " + std::to_string(i) + ": " + e.what());
    }
    line.attributes = detail::properties_of(f);
    if (auto id = detail::explicit_id(f)) {
      line.id = *id;
      line.attributes.erase("id");
    } else {
      line.id = static_cast<EdgeId>(i);
    }
    out.push_back(std::move(line));
  }
  detail::reject_geographic(bounds, "line input");
  return out;
}

inline std::vector<Polygon> parse_surface(const json& doc) {
  std::vector<Polygon> out;
  detail::Bounds bounds;
  const json& features = detail::features_of(doc, "surface input");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    if (!f.contains("geometry") || !f["geometry"].is_object())
      throw InputError("feature " + std::to_string(i) + " has no geometry");
    const json& g = f["geometry"];
    const std::string type = g.value("type", "");
    if (type == "Polygon") {
      out.push_back(detail::polygon_of(g["coordinates"], i));
    } else if (type == "MultiPolygon" && g["coordinates"].is_array()) {
      for (const json& part : g["coordinates"]) out.push_back(detail::polygon_of(part, i));
    } else {
      throw InputError("feature " + std::to_string(i) + " must be a Polygon or MultiPolygon, found " +
                       (type.empty() ? "nothing" : type));
    }
  }
  for (const Polygon& p : out)
    for (const Point2& v : p.outer()) bounds.add(v);
  detail::reject_geographic(bounds, "surface input");
  return out;
}

inline std::vector<LineFeature> read_lines(const std::string& path) { return parse_lines(parse_file(path)); }
inline std::vector<Polygon> read_surface(const std::string& path) { return parse_surface(parse_file(path)); }

inline json lines_json(const std::vector<LineFeature>& lines) {
  json features = json::array();
  for (const LineFeature& l : lines) {
    json props = l.attributes.is_object() ? l.attributes : json::object();
    props["id"] = l.id;
    features.push_back(feature(geometry_json(l.geometry), props));
  }
  return collection(features);
}

inline json surface_json(const std::vector<Polygon>& polys) {
  json features = json::array();
  for (std::size_t i = 0; i < polys.size(); ++i)
    features.push_back(feature(geometry_json(polys[i]), {{"id", i}}));
  return collection(features);
}

inline json footprint_json(const Footprint& fp) {
  return collection(json::array(
      {feature(geometry_json(fp.geometry), {{"source_count", fp.source_count}, {"area_m2", round9(area(fp.geometry))}})}));
}

inline json sections_json(const std::vector<SurfaceSection>& sections) {
  json features = json::array();
  for (const SurfaceSection& s : sections) {
    json props = s.attributes.is_object() ? s.attributes : json::object();
    props["edge_id"] = s.edge;
    props["area_m2"] = round9(s.area);
    props["flags"] = s.flags;
    features.push_back(feature(geometry_json(s.geometry), props));
  }
  return collection(features);
}

inline std::vector<SurfaceSection> parse_sections(const json& doc) {
  std::vector<SurfaceSection> out;
  const json& features = detail::features_of(doc, "section file");
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    json props = detail::properties_of(f);
    if (!props.contains("edge_id") || !props["edge_id"].is_number_integer())
      throw InputError("section feature " + std::to_string(i) + " lacks an integer edge_id");
    SurfaceSection s;
    s.edge = props["edge_id"].get<EdgeId>();
    if (f.contains("geometry") && f["geometry"].is_object()) {
      const json& g = f["geometry"];
      const std::string type = g.value("type", "");
      if (type == "Polygon") s.geometry.push_back(detail::polygon_of(g["coordinates"], i));
      else if (type == "MultiPolygon")
        for (const json& part : g["coordinates"]) s.geometry.push_back(detail::polygon_of(part, i));
      else throw InputError("section feature " + std::to_string(i) + " has a non-areal geometry");
    }
    s.area = props.contains("area_m2") && props["area_m2"].is_number() ? props["area_m2"].get<double>() : area(s.geometry);
    if (props.contains("flags") && props["flags"].is_array())
      for (const json& fl : props["flags"]) s.flags.push_back(fl.get<std::string>());
    props.erase("edge_id");
    props.erase("area_m2");
    props.erase("flags");
    s.attributes = props;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<SurfaceSection> read_sections(const std::string& path) { return parse_sections(parse_file(path)); }

inline json reference_json(const std::vector<ReferenceArea>& ref) {
  json features = json::array();
  for (const ReferenceArea& r : ref) features.push_back(feature(nullptr, {{"edge_id", r.edge}, {"area_m2", round9(r.area)}}));
  return collection(features);
}

// Reference areas: any section-like collection (edge_id + area_m2).
inline std::vector<ReferenceArea> read_reference(const std::string& path) {
  std::vector<ReferenceArea> out;
  for (const SurfaceSection& s : read_sections(path)) out.push_back({s.edge, s.area});
  return out;
}

inline json seeds_json(const std::vector<SourcePoint>& seeds) {
  json features = json::array();
  for (const SourcePoint& s : seeds) {
    json props{{"seed_id", s.id}, {"edge_id", s.owner_edge}, {"kind", to_string(s.kind)}};
    if (s.origin_node) props["node_id"] = *s.origin_node;
    features.push_back(feature(geometry_json(s.position), props));
  }
  return collection(features);
}

inline json cells_json(const VoronoiDiagram& d) {
  json features = json::array();
  for (const VoronoiCell& c : d.cells) features.push_back(feature(geometry_json(c.polygon), {{"seed_id", c.seed}}));
  return collection(features);
}

inline json warnings_json(const std::vector<Warning>& ws) {
  json out = json::array();
  for (const Warning& w : ws) out.push_back({{"kind", w.kind}, {"edges", w.edges}, {"message", w.message}});
  return out;
}

inline json match_report_json(const MatchReport& r) {
  json pairs = json::array();
  for (const MatchPair& p : r.pairs)
    pairs.push_back({{"edge_id", p.edge},
                     {"modeled_m2", round9(p.modeled)},
                     {"reference_m2", round9(p.reference)},
                     {"deviation_pct", round9(p.deviation_pct)}});
  return {{"pairs", pairs},
          {"unmatched", r.unmatched},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"r_squared", r.r_squared},
          {"bucket_5", r.bucket_5},
          {"bucket_10", r.bucket_10},
          {"bucket_15", r.bucket_15}};
}

inline std::string match_report_table(const MatchReport& r, char sep = ',') {
  std::ostringstream out;
  out.precision(9);
  out << std::fixed;
  out << "edge_id" << sep << "modeled_m2" << sep << "reference_m2" << sep << "deviation_pct\n";
  for (const MatchPair& p : r.pairs)
    out << p.edge << sep << p.modeled << sep << p.reference << sep << p.deviation_pct << '\n';
  return out.str();
}

} // namespace roadsect::geojson
