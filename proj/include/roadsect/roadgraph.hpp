#pragma once

// Topological road graph built from raw centerlines. Endpoints within the
// snap tolerance collapse into one node; mid-span crossings are reported,
// never noded, because they usually mean a bridge or a tunnel.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/geometry/index/rtree.hpp>
#include <nlohmann/json.hpp>

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"

namespace roadsect {

using EdgeId = std::int64_t;
using NodeId = std::int64_t;

// Opaque feature attributes (JSON object).
using Attributes = nlohmann::json;

inline constexpr double kDefaultSnapTolerance = 0.05;

struct LineFeature {
  EdgeId id = 0;
  Polyline geometry;
  Attributes attributes = Attributes::object();
};

struct RoadNode {
  NodeId id = 0;
  Point2 position;
  int degree = 0;
};

struct RoadEdge {
  EdgeId id = 0;
  Polyline geometry;
  NodeId source = 0;
  NodeId target = 0;
  Attributes attributes = Attributes::object();
  double length = 0.0;
};

struct Incidence {
  EdgeId edge = 0;
  double length = 0.0;
};

struct Crossing {
  EdgeId first = 0;
  EdgeId second = 0;
  Point2 position;
};

class RoadGraph {
public:
  using SegmentEntry = std::pair<Box, std::pair<std::size_t, std::size_t>>; // edge index, segment index
  using SegmentIndex = boost::geometry::index::rtree<SegmentEntry, boost::geometry::index::quadratic<16>>;

  RoadGraph() = default;

  RoadGraph(std::vector<RoadNode> nodes, std::vector<RoadEdge> edges, double snap_tolerance)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), snap_tolerance_(snap_tolerance) {
    std::sort(edges_.begin(), edges_.end(), [](const RoadEdge& a, const RoadEdge& b) { return a.id < b.id; });
    incident_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].id != static_cast<NodeId>(i)) throw InputError("node ids must be dense and ordered");
    std::vector<SegmentEntry> entries;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const RoadEdge& edge = edges_[e];
      if (e > 0 && edges_[e - 1].id == edge.id) throw InputError("duplicate edge id " + std::to_string(edge.id));
      for (NodeId n : {edge.source, edge.target})
        if (n < 0 || n >= static_cast<NodeId>(nodes_.size()))
          throw InputError("edge " + std::to_string(edge.id) + " references a missing node");
      edge_index_.emplace(edge.id, e);
      incident_[edge.source].push_back(e);
      incident_[edge.target].push_back(e);
      for (std::size_t s = 1; s < edge.geometry.size(); ++s) {
        Box b;
        bg::envelope(Segment{edge.geometry[s - 1], edge.geometry[s]}, b);
        entries.emplace_back(b, std::make_pair(e, s - 1));
      }
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) nodes_[n].degree = static_cast<int>(incident_[n].size());
    segments_ = SegmentIndex(entries.begin(), entries.end());
  }

  const std::vector<RoadNode>& nodes() const { return nodes_; }
  const std::vector<RoadEdge>& edges() const { return edges_; }
  double snap_tolerance() const { return snap_tolerance_; }
  const SegmentIndex& segment_index() const { return segments_; }

  const RoadNode& node(NodeId id) const {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size())) throw InputError("unknown node id " + std::to_string(id));
    return nodes_[static_cast<std::size_t>(id)];
  }

  bool has_edge(EdgeId id) const { return edge_index_.contains(id); }

  const RoadEdge& edge(EdgeId id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw InputError("unknown edge id " + std::to_string(id));
    return edges_[it->second];
  }

  // Edge indices touching `id`; a self-loop appears twice.
  const std::vector<std::size_t>& incident_indices(NodeId id) const {
    node(id);
    return incident_[static_cast<std::size_t>(id)];
  }

private:
  std::vector<RoadNode> nodes_;
  std::vector<RoadEdge> edges_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::vector<std::vector<std::size_t>> incident_;
  SegmentIndex segments_;
  double snap_tolerance_ = kDefaultSnapTolerance;
};

namespace detail {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Offsets from the first member keep the centroid of identical points exact.
inline Point2 centroid_of(const std::vector<Point2>& pts) {
  const Point2 base = pts.front();
  double sx = 0.0;
  double sy = 0.0;
  for (const Point2& p : pts) {
    sx += p.x - base.x;
    sy += p.y - base.y;
  }
  const double n = static_cast<double>(pts.size());
  return {base.x + sx / n, base.y + sy / n};
}

// Joins every pair of points closer than `tol` (sweep over x).
inline void join_close(const std::vector<Point2>& pts, double tol, DisjointSet& sets) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(pts[a], pts[b]); });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (pts[order[j]].x - pts[order[i]].x > tol) break;
      if (distance(pts[order[i]], pts[order[j]]) <= tol) sets.join(order[i], order[j]);
    }
  }
}

} // namespace detail

/// Builds the road graph: endpoints closer than `snap_tol` (transitively)
/// become one node placed at the cluster centroid, and each edge is pulled
/// onto its node positions.
inline RoadGraph build_graph(const std::vector<LineFeature>& lines, double snap_tol = kDefaultSnapTolerance) {
  if (!(snap_tol > 0.0)) throw InputError("snap tolerance must be positive");
  if (lines.empty()) throw InputError("no input lines");

  // Endpoint k belongs to line k / 2; even k is the start.
  std::vector<std::size_t> by_id(lines.size());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return lines[a].id < lines[b].id; });
  for (std::size_t i = 1; i < by_id.size(); ++i)
    if (lines[by_id[i]].id == lines[by_id[i - 1]].id)
      throw InputError("duplicate line id " + std::to_string(lines[by_id[i]].id));

  std::vector<Point2> endpoints;
  endpoints.reserve(lines.size() * 2);
  for (std::size_t i : by_id) {
    endpoints.push_back(lines[i].geometry.front());
    endpoints.push_back(lines[i].geometry.back());
  }

  detail::DisjointSet sets(endpoints.size());
  detail::join_close(endpoints, snap_tol, sets);

  // Centroids can drift closer than the tolerance after clustering; keep
  // merging until every pair of clusters is separated.
  std::vector<std::size_t> cluster_of(endpoints.size());
  std::vector<Point2> centroids;
  for (;;) {
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t k = 0; k < endpoints.size(); ++k) members[sets.find(k)].push_back(k);
    centroids.clear();
    std::vector<std::size_t> roots;
    for (auto& [root, ks] : members) {
      std::vector<Point2> pts;
      for (std::size_t k : ks) pts.push_back(endpoints[k]);
      for (std::size_t k : ks) cluster_of[k] = centroids.size();
      centroids.push_back(detail::centroid_of(pts));
      roots.push_back(root);
    }
    detail::DisjointSet merge(centroids.size());
    detail::join_close(centroids, snap_tol, merge);
    bool merged = false;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (merge.find(c) != c) {
        sets.join(roots[c], roots[merge.find(c)]);
        merged = true;
      }
    }
    if (!merged) break;
  }

  // Node ids follow position order, so they do not depend on input order.
  std::vector<std::size_t> order(centroids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lex_less(centroids[a], centroids[b]); });
  std::vector<NodeId> node_of_cluster(centroids.size());
  std::vector<RoadNode> nodes;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    node_of_cluster[order[rank]] = static_cast<NodeId>(rank);
    nodes.push_back(RoadNode{static_cast<NodeId>(rank), centroids[order[rank]], 0});
  }

  std::vector<RoadEdge> edges;
  edges.reserve(lines.size());
  for (std::size_t slot = 0; slot < by_id.size(); ++slot) {
    const LineFeature& line = lines[by_id[slot]];
    const NodeId s = node_of_cluster[cluster_of[2 * slot]];
    const NodeId t = node_of_cluster[cluster_of[2 * slot + 1]];
    std::vector<Point2> verts = line.geometry.vertices();
    verts.front() = nodes[static_cast<std::size_t>(s)].position;
    verts.back() = nodes[static_cast<std::size_t>(t)].position;
    // Interior vertices swallowed by a moved endpoint collapse away.
    std::vector<Point2> kept;
    for (const Point2& p : verts)
      if (kept.empty() || distance(kept.back(), p) > kMergeEpsilon) kept.push_back(p);
    if (kept.size() >= 2 && distance(kept.back(), verts.back()) > 0.0) kept.back() = verts.back();
    if (kept.size() < 2) throw InputError("line " + std::to_string(line.id) + " has zero length after snapping");
    RoadEdge edge{line.id, Polyline(kept), s, t, line.attributes, 0.0};
    edge.length = length(edge.geometry);
    edges.push_back(std::move(edge));
  }
  return RoadGraph(std::move(nodes), std::move(edges), snap_tol);
}

inline std::vector<LineFeature> edges_as_lines(const RoadGraph& g) {
  std::vector<LineFeature> out;
  for (const RoadEdge& e : g.edges()) out.push_back({e.id, e.geometry, e.attributes});
  return out;
}

inline std::vector<Incidence> incident_edges(const RoadGraph& g, NodeId node) {
  std::vector<Incidence> out;
  for (std::size_t e : g.incident_indices(node)) out.push_back({g.edges()[e].id, g.edges()[e].length});
  return out;
}

namespace detail {

inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// Intersection of closed segments [a,b] and [c,d]; collinear overlaps yield
// the midpoint of the shared stretch.
inline std::optional<Point2> segment_intersection(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    const double t = d1 / (d1 - d2);
    return a + t * (b - a);
  }
  auto on_segment = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
    // Collinear: overlap along the dominant axis.
    const bool use_x = std::abs(b.x - a.x) >= std::abs(b.y - a.y);
    auto key = [use_x](Point2 p) { return use_x ? p.x : p.y; };
    const Point2 lo1 = key(a) <= key(b) ? a : b;
    const Point2 hi1 = key(a) <= key(b) ? b : a;
    const Point2 lo2 = key(c) <= key(d) ? c : d;
    const Point2 hi2 = key(c) <= key(d) ? d : c;
    const Point2 lo = key(lo1) >= key(lo2) ? lo1 : lo2;
    const Point2 hi = key(hi1) <= key(hi2) ? hi1 : hi2;
    if (key(lo) > key(hi)) return std::nullopt;
    return 0.5 * (lo + hi);
  }
  if (d1 == 0 && on_segment(c, d, a)) return a;
  if (d2 == 0 && on_segment(c, d, b)) return b;
  if (d3 == 0 && on_segment(a, b, c)) return c;
  if (d4 == 0 && on_segment(a, b, d)) return d;
  return std::nullopt;
}

} // namespace detail

/// Pairs of edges whose geometries meet anywhere other than at a node they
/// share. Each (pair, location) is reported once, ordered by edge ids.
inline std::vector<Crossing> detect_crossings(const RoadGraph& g) {
  namespace bgi = boost::geometry::index;
  std::vector<Crossing> out;
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const RoadEdge& ea = edges[e];
    std::vector<Crossing> found;
    for (std::size_t s = 1; s < ea.geometry.size(); ++s) {
      const Point2 a = ea.geometry[s - 1];
      const Point2 b = ea.geometry[s];
      Box box;
      bg::envelope(Segment{a, b}, box);
      std::vector<RoadGraph::SegmentEntry> hits;
      g.segment_index().query(bgi::intersects(box), std::back_inserter(hits));
      for (const auto& [hb, key] : hits) {
        const auto [f, t] = key;
        if (f <= e) continue;
        const RoadEdge& eb = edges[f];
        auto p = detail::segment_intersection(a, b, eb.geometry[t], eb.geometry[t + 1]);
        if (!p) continue;
        bool at_shared_node = false;
        for (NodeId na : {ea.source, ea.target})
          for (NodeId nb : {eb.source, eb.target})
            if (na == nb && distance(*p, g.node(na).position) <= kMergeEpsilon) at_shared_node = true;
        if (at_shared_node) continue;
        found.push_back({ea.id, eb.id, *p});
      }
    }
    std::sort(found.begin(), found.end(), [](const Crossing& l, const Crossing& r) {
      return l.second != r.second ? l.second < r.second : lex_less(l.position, r.position);
    });
    const std::size_t start = out.size();
    for (const Crossing& c : found) {
      bool dup = false;
      for (std::size_t k = start; k < out.size() && !dup; ++k) {
        const Crossing& o = out[k];
        if (o.second == c.second && distance(o.position, c.position) <= kMergeEpsilon) dup = true;
      }
      if (!dup) out.push_back(c);
    }
  }
  return out;
}

} // namespace roadsect
