#pragma once

// Voronoi seeds. Every junction of degree >= 2 gets one seed per incident
// edge where the edge leaves a circle around the junction; edges then get
// evenly spaced seeds between their two circles.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/roadgraph.hpp"

namespace roadsect {

using SeedId = std::int64_t;

enum class SeedKind { Buffer, Intermediate };

inline const char* to_string(SeedKind k) { return k == SeedKind::Buffer ? "buffer" : "intermediate"; }

struct SourcePoint {
  SeedId id = 0;
  Point2 position;
  EdgeId owner_edge = 0;
  SeedKind kind = SeedKind::Intermediate;
  std::optional<NodeId> origin_node; // buffer seeds only
  double arclength = 0.0;            // along the owner edge, from its source node
};

struct SeedingConfig {
  double radius_max = 5.0;
  double radius_ratio = 0.4; // of the shortest incident edge
  double spacing = 10.0;

  void validate() const {
    if (!(radius_max > 0.0)) throw InputError("radius_max must be positive");
    if (!(radius_ratio > 0.0 && radius_ratio <= 0.5)) throw InputError("radius_ratio must lie in (0, 0.5]");
    if (!(spacing > 0.0)) throw InputError("spacing must be positive");
  }
};

/// Buffer radius of a junction: proportional to its shortest incident edge,
/// capped at radius_max.
inline double node_radius(const RoadGraph& g, NodeId node, const SeedingConfig& cfg) {
  const auto& incident = g.incident_indices(node);
  if (incident.empty()) throw InputError("node " + std::to_string(node) + " has no incident edge");
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t e : incident) shortest = std::min(shortest, g.edges()[e].length);
  return std::min(cfg.radius_max, cfg.radius_ratio * shortest);
}

// Radius that bounds intermediate seeding at each node: the buffer radius at
// junctions, zero at dead ends (no buffer circle there).
inline std::vector<double> placement_radii(const RoadGraph& g, const SeedingConfig& cfg) {
  std::vector<double> radii(g.nodes().size(), 0.0);
  for (const RoadNode& n : g.nodes())
    if (n.degree >= 2) radii[static_cast<std::size_t>(n.id)] = node_radius(g, n.id, cfg);
  return radii;
}

namespace detail {

struct BufferOutcome {
  std::vector<SourcePoint> points;
  std::vector<EdgeId> misses; // incident edges that never leave the circle
};

inline BufferOutcome buffer_points_checked(const RoadGraph& g, NodeId node, const SeedingConfig& cfg) {
  BufferOutcome out;
  const RoadNode& n = g.node(node);
  if (n.degree < 2) return out;
  const double r = node_radius(g, node, cfg);
  const auto& incident = g.incident_indices(node);
  // A self-loop is listed twice: once leaving from its source, once
  // arriving at its target.
  std::vector<bool> from_source(incident.size());
  for (std::size_t i = 0; i < incident.size(); ++i) {
    const RoadEdge& e = g.edges()[incident[i]];
    from_source[i] = e.source == node && (e.target != node || i == 0 || incident[i - 1] != incident[i]);
  }
  for (std::size_t i = 0; i < incident.size(); ++i) {
    const RoadEdge& e = g.edges()[incident[i]];
    const Polyline walk = from_source[i] ? e.geometry : e.geometry.reversed();
    const auto hits = circle_polyline_hits(n.position, r, walk);
    if (hits.empty()) {
      out.misses.push_back(e.id);
      continue;
    }
    const ArcPoint& first = hits.front();
    SourcePoint sp;
    sp.id = static_cast<SeedId>(out.points.size());
    sp.position = first.position;
    sp.owner_edge = e.id;
    sp.kind = SeedKind::Buffer;
    sp.origin_node = node;
    sp.arclength = from_source[i] ? first.arclength : e.length - first.arclength;
    out.points.push_back(sp);
  }
  return out;
}

} // namespace detail

/// One seed per incident edge, where that edge first crosses the junction's
/// buffer circle. Dead ends (degree 1) carry no buffer seeds.
inline std::vector<SourcePoint> buffer_points(const RoadGraph& g, NodeId node, const SeedingConfig& cfg) {
  cfg.validate();
  auto out = detail::buffer_points_checked(g, node, cfg);
  if (!out.misses.empty())
    throw SeedingError("edge " + std::to_string(out.misses.front()) + " lies entirely inside the buffer circle of node " +
                       std::to_string(node));
  return std::move(out.points);
}

/// Seeds at r_start + k * spacing (k >= 1) strictly before length - r_end.
inline std::vector<SourcePoint> intermediate_points(const RoadGraph& g, EdgeId edge, const SeedingConfig& cfg,
                                                    std::span<const double> radii) {
  cfg.validate();
  const RoadEdge& e = g.edge(edge);
  if (radii.size() != g.nodes().size()) throw InputError("one radius per node is required");
  const double r_start = radii[static_cast<std::size_t>(e.source)];
  const double stop = e.length - radii[static_cast<std::size_t>(e.target)];
  std::vector<SourcePoint> out;
  for (int k = 1;; ++k) {
    const double s = r_start + k * cfg.spacing;
    if (!(s < stop)) break;
    SourcePoint sp;
    sp.id = static_cast<SeedId>(out.size());
    sp.position = point_at(e.geometry, s);
    sp.owner_edge = e.id;
    sp.kind = SeedKind::Intermediate;
    sp.arclength = s;
    out.push_back(sp);
  }
  return out;
}

struct SeedingResult {
  std::vector<SourcePoint> seeds;
  std::vector<EdgeId> unseeded_edges;
  std::vector<Warning> warnings;
};

/// All seeds of the graph, ordered by owner edge then arclength, with ids
/// 0..n-1 in that order. Coincident seeds collapse onto the lowest owner.
inline SeedingResult seed_all(const RoadGraph& g, const SeedingConfig& cfg) {
  cfg.validate();
  SeedingResult result;
  std::vector<SourcePoint> all;
  for (const RoadNode& n : g.nodes()) {
    auto b = detail::buffer_points_checked(g, n.id, cfg);
    for (EdgeId miss : b.misses)
      result.warnings.push_back({"buffer-miss",
                                 {miss},
                                 "edge " + std::to_string(miss) + " never leaves the buffer circle of node " +
                                     std::to_string(n.id)});
    all.insert(all.end(), b.points.begin(), b.points.end());
  }
  const auto radii = placement_radii(g, cfg);
  for (const RoadEdge& e : g.edges()) {
    auto pts = intermediate_points(g, e.id, cfg, radii);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const SourcePoint& a, const SourcePoint& b) {
    return a.owner_edge != b.owner_edge ? a.owner_edge < b.owner_edge : a.arclength < b.arclength;
  });

  // Coincident positions: the earliest entry (lowest owner) survives.
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(all[a].position, all[b].position) || (all[a].position == all[b].position && a < b);
  });
  std::vector<bool> dropped(all.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (dropped[order[i]]) continue;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const SourcePoint& a = all[order[i]];
      const SourcePoint& b = all[order[j]];
      if (b.position.x - a.position.x > kMergeEpsilon) break;
      if (dropped[order[j]] || distance(a.position, b.position) > kMergeEpsilon) continue;
      const std::size_t keep = std::min(order[i], order[j]);
      const std::size_t drop = std::max(order[i], order[j]);
      if (dropped[keep]) continue;
      dropped[drop] = true;
      if (all[keep].owner_edge != all[drop].owner_edge)
        result.warnings.push_back({"seed-merge",
                                   {all[keep].owner_edge, all[drop].owner_edge},
                                   "coincident seeds of edges " + std::to_string(all[keep].owner_edge) + " and " +
                                       std::to_string(all[drop].owner_edge) + " merged into the lower id"});
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (dropped[i]) continue;
    all[i].id = static_cast<SeedId>(result.seeds.size());
    result.seeds.push_back(all[i]);
  }

  std::size_t cursor = 0;
  for (const RoadEdge& e : g.edges()) {
    while (cursor < result.seeds.size() && result.seeds[cursor].owner_edge < e.id) ++cursor;
    if (cursor < result.seeds.size() && result.seeds[cursor].owner_edge == e.id) continue;
    result.unseeded_edges.push_back(e.id);
    result.warnings.push_back({"unseeded", {e.id}, "edge " + std::to_string(e.id) + " received no seed"});
  }
  return result;
}

} // namespace roadsect
