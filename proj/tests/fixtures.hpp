#pragma once

// Test fixtures and brute-force oracles. Nothing here calls into the
// Voronoi or partition code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "roadsect/roadsect.hpp"

namespace fixtures {

using namespace roadsect;

// Plus-shaped footprint: 10 x 10 central square, arms 10 wide reaching 15 m
// beyond it (to +-20), as one hand-written polygon.
inline MultiPolygon plus_footprint(Point2 o = {}) {
  std::vector<Point2> pts = {{5, -5},  {20, -5}, {20, 5},  {5, 5},   {5, 20},   {-5, 20},
                             {-5, 5},  {-20, 5}, {-20, -5}, {-5, -5}, {-5, -20}, {5, -20}};
  for (Point2& p : pts) p = p + o;
  return normalized(make_polygon(pts));
}

// The same plus as separate pieces: junction square plus four arms.
inline std::vector<Polygon> plus_pieces(Point2 o = {}) {
  return {make_rectangle(o.x - 5, o.y - 5, o.x + 5, o.y + 5), make_rectangle(o.x + 5, o.y - 5, o.x + 20, o.y + 5),
          make_rectangle(o.x - 20, o.y - 5, o.x - 5, o.y + 5), make_rectangle(o.x - 5, o.y + 5, o.x + 5, o.y + 20),
          make_rectangle(o.x - 5, o.y - 20, o.x + 5, o.y - 5)};
}

// Four 20 m arms leaving the origin: ids 1 (+x), 2 (+y), 3 (-x), 4 (-y).
inline std::vector<LineFeature> cross_lines(double arm = 20.0, Point2 o = {}) {
  return {{1, Polyline{o, o + Point2{arm, 0}}, {{"class", "primary"}}},
          {2, Polyline{o, o + Point2{0, arm}}, {{"class", "secondary"}}},
          {3, Polyline{o + Point2{-arm, 0}, o}, {{"class", "primary"}}},
          {4, Polyline{o + Point2{0, -arm}, o}, {{"class", "tertiary"}}}};
}

inline std::size_t brute_nearest(const std::vector<SourcePoint>& seeds, Point2 q) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const double dx = seeds[i].position.x - q.x;
    const double dy = seeds[i].position.y - q.y;
    const double d = dx * dx + dy * dy;
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

// Gap between the nearest and second-nearest seed distance; small values
// mark points on (or next to) a Voronoi boundary.
inline double nearest_gap(const std::vector<SourcePoint>& seeds, Point2 q) {
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = d1;
  for (const SourcePoint& s : seeds) {
    const double d = std::hypot(s.position.x - q.x, s.position.y - q.y);
    if (d < d1) {
      d2 = d1;
      d1 = d;
    } else if (d < d2) {
      d2 = d;
    }
  }
  return d2 - d1;
}

// All-pairs segment intersection by solving the 2x2 system directly.
inline std::size_t brute_crossing_count(const RoadGraph& g) {
  std::size_t count = 0;
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      std::vector<Point2> hits;
      for (std::size_t a = 1; a < edges[i].geometry.size(); ++a) {
        for (std::size_t b = 1; b < edges[j].geometry.size(); ++b) {
          const Point2 p = edges[i].geometry[a - 1];
          const Point2 r = edges[i].geometry[a] - p;
          const Point2 q = edges[j].geometry[b - 1];
          const Point2 s = edges[j].geometry[b] - q;
          const double den = r.x * s.y - r.y * s.x;
          const Point2 qp = q - p;
          if (den == 0.0) {
            // Collinear segments sharing a stretch of positive length count
            // once, at the middle of the shared stretch.
            if (qp.x * r.y - qp.y * r.x != 0.0) continue;
            const double rr = r.x * r.x + r.y * r.y;
            const double t0 = (qp.x * r.x + qp.y * r.y) / rr;
            const double t1 = ((qp.x + s.x) * r.x + (qp.y + s.y) * r.y) / rr;
            const double lo = std::max(0.0, std::min(t0, t1));
            const double hi = std::min(1.0, std::max(t0, t1));
            if (hi <= lo) continue;
            const Point2 x = p + 0.5 * (lo + hi) * r;
            bool seen = false;
            for (const Point2& h : hits) seen = seen || std::hypot(h.x - x.x, h.y - x.y) < 1e-9;
            if (!seen) hits.push_back(x);
            continue;
          }
          const double t = (qp.x * s.y - qp.y * s.x) / den;
          const double u = (qp.x * r.y - qp.y * r.x) / den;
          if (t < 0 || t > 1 || u < 0 || u > 1) continue;
          const Point2 x = p + t * r;
          bool shared = false;
          for (NodeId ni : {edges[i].source, edges[i].target})
            for (NodeId nj : {edges[j].source, edges[j].target})
              if (ni == nj && std::hypot(x.x - g.node(ni).position.x, x.y - g.node(ni).position.y) < 1e-9) shared = true;
          bool seen = false;
          for (const Point2& h : hits) seen = seen || std::hypot(h.x - x.x, h.y - x.y) < 1e-9;
          if (!shared && !seen) hits.push_back(x);
        }
      }
      count += hits.size();
    }
  }
  return count;
}

// Hand-computed reference of the 2x2 grid (block 50, width 6): rectangle
// (50 - 6) x 6 = 264 plus hub shares. Corner (degree 2) arms get 2 triangles
// (18), T bar arms 1.5 (13.5), T stems and cross arms 1 (9).
inline std::map<std::pair<double, double>, double> grid2x2_reference_by_midpoint() {
  std::map<std::pair<double, double>, double> ref;
  const double outer = 264 + 18 + 13.5;
  const double inner = 264 + 9 + 9;
  for (double y : {0.0, 100.0}) {
    ref[{25, y}] = outer;
    ref[{75, y}] = outer;
  }
  for (double x : {0.0, 100.0}) {
    ref[{x, 25}] = outer;
    ref[{x, 75}] = outer;
  }
  ref[{25, 50}] = inner;
  ref[{75, 50}] = inner;
  ref[{50, 25}] = inner;
  ref[{50, 75}] = inner;
  return ref;
}

struct Pipeline {
  Footprint footprint;
  RoadGraph graph;
  SeedingResult seeding;
  VoronoiDiagram diagram;
  PartitionResult result;
};

inline Pipeline run(const std::vector<LineFeature>& lines, const std::vector<Polygon>& surface, double margin = 10.0,
                    SeedingConfig cfg = {}) {
  Pipeline p;
  p.footprint = dissolve(surface);
  p.graph = build_graph(lines);
  p.seeding = seed_all(p.graph, cfg);
  p.diagram = voronoi(p.seeding.seeds, run_envelope(p.footprint.geometry, p.seeding.seeds, margin));
  p.result = partition(p.footprint, p.graph, p.seeding.seeds, p.diagram);
  return p;
}

inline Pipeline run(const SyntheticNetwork& net, double margin = 10.0) { return run(net.lines, net.surface, margin); }

struct OracleTally {
  std::size_t tested = 0;
  std::size_t agreed = 0;
};

// Footprint points vs. brute-force nearest seed owner, skipping points within
// `band` of a section boundary or equidistant (within band) to two seeds.
inline OracleTally nearest_owner_oracle(const Pipeline& p, std::size_t n, std::uint64_t seed, double band = 1e-6) {
  OracleTally tally;
  for (const Point2& q : sample_points_in(p.footprint.geometry, n, seed)) {
    if (nearest_gap(p.seeding.seeds, q) <= band) continue;
    const SurfaceSection* home = nullptr;
    bool near_boundary = false;
    for (const SurfaceSection& s : p.result.sections) {
      if (s.geometry.empty()) continue;
      const Box b = bounding_box(s.geometry);
      if (q.x < b.min_corner().x - band || q.x > b.max_corner().x + band || q.y < b.min_corner().y - band ||
          q.y > b.max_corner().y + band)
        continue;
      if (distance_to_boundary(q, s.geometry) <= band) near_boundary = true;
      if (!home && covers(s.geometry, q)) home = &s;
    }
    if (near_boundary) continue;
    ++tally.tested;
    if (home && home->edge == p.seeding.seeds[brute_nearest(p.seeding.seeds, q)].owner_edge) ++tally.agreed;
  }
  return tally;
}

inline double overlap_area(const MultiPolygon& a, const MultiPolygon& b) {
  MultiPolygon common;
  boost::geometry::intersection(a, b, common);
  return area(common);
}

} // namespace fixtures
