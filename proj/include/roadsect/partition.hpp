#pragma once

// Footprint partitioning: dissolve the raw surface into one footprint, clip
// the Voronoi cells against it and merge the pieces per owning edge. The
// result pairs every seeded edge with exactly one surface section.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/geometry/index/rtree.hpp>

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/roadgraph.hpp"
#include "roadsect/seeding.hpp"
#include "roadsect/tessellate.hpp"

namespace roadsect {

struct Footprint {
  MultiPolygon geometry;
  std::size_t source_count = 0;
};

struct SurfaceSection {
  EdgeId edge = 0;
  MultiPolygon geometry;
  double area = 0.0;
  Attributes attributes = Attributes::object();
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
  void add_flag(const std::string& f) {
    if (!has_flag(f)) flags.push_back(f);
  }
};

struct PartitionResult {
  std::vector<SurfaceSection> sections; // sorted by edge id
  double footprint_area = 0.0;
  double unassigned_area = 0.0;
  std::vector<Warning> warnings;

  double residual() const { return footprint_area > 0.0 ? std::abs(unassigned_area) / footprint_area : 0.0; }
};

/// Union of all raw surface polygons into one footprint.
inline Footprint dissolve(const std::vector<Polygon>& raw) {
  if (raw.empty()) throw InputError("dissolve needs at least one polygon");
  std::vector<MultiPolygon> parts;
  parts.reserve(raw.size());
  for (const Polygon& p : raw) {
    MultiPolygon m = normalized(p);
    if (!m.empty()) parts.push_back(std::move(m));
  }
  if (parts.empty()) throw InputError("every surface polygon is empty or degenerate");
  Footprint fp;
  fp.source_count = raw.size();
  fp.geometry = union_all(std::move(parts));
  if (!(area(fp.geometry) > 0.0)) throw InputError("dissolved footprint has no area");
  return fp;
}

namespace detail {

// The footprint cut into small pieces (binary space partition) so that each
// cell only meets a handful of short rings.
class FootprintPieces {
public:
  explicit FootprintPieces(const MultiPolygon& footprint, std::size_t max_vertices = 192) {
    split(footprint, bounding_box(footprint), 0, max_vertices);
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < pieces_.size(); ++i) entries.emplace_back(bounding_box(pieces_[i]), i);
    tree_ = Tree(entries.begin(), entries.end());
  }

  const std::vector<Polygon>& pieces() const { return pieces_; }

  // cell ∩ footprint as a list of polygons (not merged across pieces).
  void clip(const Polygon& cell, std::vector<Polygon>& out) const {
    const Box cb = bounding_box(cell);
    std::vector<Entry> hits;
    tree_.query(boost::geometry::index::intersects(cb), std::back_inserter(hits));
    std::sort(hits.begin(), hits.end(), [](const Entry& a, const Entry& b) { return a.second < b.second; });
    for (const auto& [box, i] : hits) {
      const Point2 corners[4] = {box.min_corner(),
                                 {box.max_corner().x, box.min_corner().y},
                                 box.max_corner(),
                                 {box.min_corner().x, box.max_corner().y}};
      bool inside = true;
      for (const Point2& c : corners) inside = inside && bg::covered_by(c, cell);
      if (inside) {
        out.push_back(pieces_[i]);
        continue;
      }
      MultiPolygon part;
      bg::intersection(cell, pieces_[i], part);
      for (Polygon& p : part)
        if (p.outer().size() >= 4 && area(p) > 0.0) out.push_back(std::move(p));
    }
  }

private:
  void split(const MultiPolygon& m, const Box& box, int depth, std::size_t max_vertices) {
    if (m.empty()) return;
    if (vertex_count(m) <= max_vertices || depth >= 24) {
      for (const Polygon& p : m) pieces_.push_back(p);
      return;
    }
    const double w = box.max_corner().x - box.min_corner().x;
    const double h = box.max_corner().y - box.min_corner().y;
    // Off-centre cut so the seam rarely lands on a grid-aligned road edge.
    constexpr double kCut = 0.4937;
    Box lo = box;
    Box hi = box;
    if (w >= h) {
      const double x = box.min_corner().x + kCut * w;
      lo.max_corner().x = x;
      hi.min_corner().x = x;
    } else {
      const double y = box.min_corner().y + kCut * h;
      lo.max_corner().y = y;
      hi.min_corner().y = y;
    }
    for (const Box& b : {lo, hi}) {
      MultiPolygon part;
      bg::intersection(m, b, part);
      std::erase_if(part, [](const Polygon& p) { return p.outer().size() < 4 || area(p) <= 0.0; });
      split(part, b, depth + 1, max_vertices);
    }
  }

  using Entry = std::pair<Box, std::size_t>;
  using Tree = boost::geometry::index::rtree<Entry, boost::geometry::index::quadratic<16>>;
  std::vector<Polygon> pieces_;
  Tree tree_;
};

} // namespace detail

/// Sections of the footprint, one per seeded edge: the union over the
/// edge's seeds of (Voronoi cell ∩ footprint). Edge attributes are copied.
inline PartitionResult partition(const Footprint& footprint, const RoadGraph& g, const std::vector<SourcePoint>& seeds,
                                 const VoronoiDiagram& diagram) {
  if (footprint.geometry.empty()) throw InputError("empty footprint");
  if (diagram.cells.size() != seeds.size()) throw InputError("diagram and seeds disagree on the number of cells");
  std::map<SeedId, EdgeId> owner;
  for (const SourcePoint& s : seeds) {
    if (!g.has_edge(s.owner_edge)) throw InputError("seed " + std::to_string(s.id) + " owned by an unknown edge");
    if (!owner.emplace(s.id, s.owner_edge).second) throw InputError("duplicate seed id " + std::to_string(s.id));
  }
  for (const VoronoiCell& c : diagram.cells)
    if (!owner.contains(c.seed)) throw InputError("cell for unknown seed " + std::to_string(c.seed));

  const detail::FootprintPieces pieces(footprint.geometry);
  std::map<EdgeId, std::vector<MultiPolygon>> shares;
  for (const SourcePoint& s : seeds) shares[s.owner_edge];

  std::vector<const VoronoiCell*> ordered;
  for (const VoronoiCell& c : diagram.cells) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](const VoronoiCell* a, const VoronoiCell* b) { return a->seed < b->seed; });
  std::vector<Polygon> clipped;
  for (const VoronoiCell* c : ordered) {
    clipped.clear();
    pieces.clip(c->polygon, clipped);
    auto& bucket = shares[owner.at(c->seed)];
    for (Polygon& p : clipped) bucket.push_back(MultiPolygon{std::move(p)});
  }

  PartitionResult result;
  result.footprint_area = area(footprint.geometry);
  double assigned = 0.0;
  for (auto& [edge, parts] : shares) {
    SurfaceSection section;
    section.edge = edge;
    section.geometry = union_all(std::move(parts));
    section.area = area(section.geometry);
    section.attributes = g.edge(edge).attributes;
    if (section.geometry.size() > 1) section.add_flag("multi-part");
    assigned += section.area;
    result.sections.push_back(std::move(section));
  }
  result.unassigned_area = result.footprint_area - assigned;
  return result;
}

inline constexpr double kDefaultWidthHint = 6.0;

/// Attaches review flags: `suspicious-area` when a section's area falls
/// outside [0.2, 5] x (edge length x width_hint), `fragmented` beyond three
/// parts, `overlap-risk` on sections touched by an unnoded crossing.
inline PartitionResult flag_suspicious(PartitionResult result, const RoadGraph& g, double width_hint) {
  if (!(width_hint > 0.0)) throw InputError("width hint must be positive");
  for (SurfaceSection& s : result.sections) {
    const double expected = g.edge(s.edge).length * width_hint;
    const double ratio = s.area / expected;
    if (ratio < 0.2 || ratio > 5.0) {
      s.add_flag("suspicious-area");
      result.warnings.push_back({"suspicious-area",
                                 {s.edge},
                                 "section of edge " + std::to_string(s.edge) + " has area " + std::to_string(s.area) +
                                     " m2, " + std::to_string(ratio) + " x the expected"});
    }
    if (s.geometry.size() > 3) {
      s.add_flag("fragmented");
      result.warnings.push_back({"fragmented",
                                 {s.edge},
                                 "section of edge " + std::to_string(s.edge) + " has " +
                                     std::to_string(s.geometry.size()) + " parts"});
    }
  }
  for (const Crossing& c : detect_crossings(g)) {
    for (SurfaceSection& s : result.sections)
      if (s.edge == c.first || s.edge == c.second || (!s.geometry.empty() && covers(s.geometry, c.position)))
        s.add_flag("overlap-risk");
    result.warnings.push_back({"overlap-risk",
                               {c.first, c.second},
                               "edges " + std::to_string(c.first) + " and " + std::to_string(c.second) +
                                   " cross without a shared node"});
  }
  return result;
}

} // namespace roadsect
