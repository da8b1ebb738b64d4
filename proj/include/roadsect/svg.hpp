#pragma once

// Minimal SVG output for eyeballing runs.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "roadsect/evaluate.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/roadgraph.hpp"
#include "roadsect/seeding.hpp"

namespace roadsect::svg {

namespace detail {

inline void save(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << body;
}

// Stable pastel colour per id.
inline std::string colour(std::int64_t id) {
  const auto h = static_cast<unsigned>((id * 2654435761u) % 360u);
  return "hsl(" + std::to_string(h) + ",60%,70%)";
}

} // namespace detail

/// Sections filled per edge, centerlines and seeds on top.
inline void write_partition(const std::string& path, const PartitionResult& result, const RoadGraph& g,
                            const std::vector<SourcePoint>& seeds, double px_width = 1000.0) {
  Box box;
  bg::assign_inverse(box);
  for (const SurfaceSection& s : result.sections)
    if (!s.geometry.empty()) bg::expand(box, bounding_box(s.geometry));
  for (const RoadEdge& e : g.edges())
    for (const Point2& p : e.geometry.vertices()) bg::expand(box, p);
  const double w = std::max(box.max_corner().x - box.min_corner().x, 1e-6);
  const double h = std::max(box.max_corner().y - box.min_corner().y, 1e-6);
  const double scale = px_width / w;
  auto X = [&](double x) { return (x - box.min_corner().x) * scale; };
  auto Y = [&](double y) { return (box.max_corner().y - y) * scale; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_width << "\" height=\"" << h * scale << "\">\n";
  for (const SurfaceSection& s : result.sections) {
    o << "<path fill-rule=\"evenodd\" stroke=\"#444\" stroke-width=\"0.5\" fill=\"" << detail::colour(s.edge) << "\" d=\"";
    for (const Polygon& p : s.geometry) {
      auto ring = [&](const Ring& r) {
        for (std::size_t i = 0; i < r.size(); ++i) o << (i == 0 ? 'M' : 'L') << X(r[i].x) << ' ' << Y(r[i].y) << ' ';
        o << "Z ";
      };
      ring(p.outer());
      for (const Ring& hole : p.inners()) ring(hole);
    }
    o << "\"/>\n";
  }
  for (const RoadEdge& e : g.edges()) {
    o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (const Point2& p : e.geometry.vertices()) o << X(p.x) << ',' << Y(p.y) << ' ';
    o << "\"/>\n";
  }
  for (const SourcePoint& s : seeds)
    o << "<circle r=\"2\" fill=\"" << (s.kind == SeedKind::Buffer ? "red" : "blue") << "\" cx=\"" << X(s.position.x)
      << "\" cy=\"" << Y(s.position.y) << "\"/>\n";
  o << "</svg>\n";
  detail::save(path, o.str());
}

/// Modeled vs reference scatter with the fitted line and the identity line.
inline void write_scatter(const std::string& path, const MatchReport& r, double px = 600.0) {
  double hi = 0.0;
  for (const MatchPair& p : r.pairs) hi = std::max({hi, p.modeled, p.reference});
  hi = hi > 0.0 ? hi * 1.05 : 1.0;
  const double pad = 40.0;
  const double s = (px - 2 * pad) / hi;
  auto X = [&](double v) { return pad + v * s; };
  auto Y = [&](double v) { return px - pad - v * s; };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << px << "\" height=\"" << px << "\" fill=\"white\"/>\n";
  o << "<line stroke=\"#bbb\" x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(hi) << "\" y2=\"" << Y(hi) << "\"/>\n";
  o << "<line stroke=\"red\" x1=\"" << X(0) << "\" y1=\"" << Y(r.intercept) << "\" x2=\"" << X(hi) << "\" y2=\""
    << Y(r.intercept + r.slope * hi) << "\"/>\n";
  for (const MatchPair& p : r.pairs)
    o << "<circle r=\"2.5\" fill=\"steelblue\" cx=\"" << X(p.reference) << "\" cy=\"" << Y(p.modeled) << "\"/>\n";
  o << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">slope " << r.slope
    << "  intercept " << r.intercept << "  R2 " << r.r_squared << "</text>\n";
  o << "<text x=\"" << px / 2 << "\" y=\"" << px - 8 << "\" font-family=\"sans-serif\" font-size=\"12\">reference m2</text>\n";
  o << "</svg>\n";
  detail::save(path, o.str());
}

} // namespace roadsect::svg
