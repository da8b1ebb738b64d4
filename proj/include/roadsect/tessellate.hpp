#pragma once

// Bounded Voronoi diagram by half-plane clipping.
//
// Each cell starts as the (convex) envelope and is cut by the bisector of
// every neighbouring seed, nearest first, until no unvisited seed can be
// close enough to cut it (distance >= twice the cell's radius). Every cell
// vertex is computed from its generators in a canonical order (sorted seed
// indices), so neighbouring cells share bit-identical vertices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <boost/geometry/index/rtree.hpp>

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/seeding.hpp"

namespace roadsect {

struct VoronoiCell {
  SeedId seed = 0;
  Polygon polygon;
};

struct VoronoiDiagram {
  std::vector<VoronoiCell> cells; // sorted by seed id
  Polygon envelope;
};

/// Bounding rectangle of the footprint grown by `margin` on every side.
inline Polygon envelope_for(const MultiPolygon& footprint, double margin) {
  if (footprint.empty()) throw InputError("envelope of an empty footprint");
  if (!(margin >= 0.0)) throw InputError("envelope margin must be non-negative");
  const Box b = bounding_box(footprint);
  return make_rectangle(b.min_corner().x - margin, b.min_corner().y - margin, b.max_corner().x + margin,
                        b.max_corner().y + margin);
}

namespace detail {

// Edge label: >= 0 is the seed index whose bisector carries the edge,
// < 0 is envelope side (-label - 1).
struct CellVertex {
  Point2 p;
  std::int64_t label;
};

class CellBuilder {
public:
  CellBuilder(const std::vector<Point2>& sites, const Ring& envelope) : sites_(sites), env_(envelope) {}

  std::vector<CellVertex> initial() const {
    std::vector<CellVertex> poly;
    for (std::size_t j = 0; j + 1 < env_.size(); ++j) poly.push_back({env_[j], -static_cast<std::int64_t>(j) - 1});
    return poly;
  }

  // Keeps the part of `poly` at least as close to site s as to site t.
  void clip(std::vector<CellVertex>& poly, std::size_t s, std::size_t t) const {
    const Point2 ps = sites_[s];
    const Point2 pt = sites_[t];
    const Point2 mid = 0.5 * (ps + pt);
    const Point2 dir = pt - ps;
    f_.resize(poly.size());
    bool any_out = false;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      f_[k] = dot(poly[k].p - mid, dir);
      any_out = any_out || f_[k] > 0.0;
    }
    if (!any_out) return;
    out_.clear();
    const std::size_t n = poly.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t nk = (k + 1) % n;
      const bool in_cur = f_[k] <= 0.0;
      const bool in_nxt = f_[nk] <= 0.0;
      if (in_cur) {
        push(poly[k].p, poly[k].label);
        if (!in_nxt) push(crossing(poly[k], poly[nk], f_[k], f_[nk], s, t), static_cast<std::int64_t>(t));
      } else if (in_nxt) {
        push(crossing(poly[k], poly[nk], f_[k], f_[nk], s, t), poly[k].label);
      }
    }
    if (out_.size() > 1 && distance(out_.back().p, out_.front().p) <= kMergeEpsilon) out_.pop_back();
    poly.swap(out_);
  }

private:
  void push(Point2 p, std::int64_t label) const {
    if (!out_.empty() && distance(out_.back().p, p) <= kMergeEpsilon) {
      out_.back().label = label;
      return;
    }
    out_.push_back({p, label});
  }

  // Intersection of the edge a->b (carried by a.label) with bisector(s, t).
  Point2 crossing(const CellVertex& a, const CellVertex& b, double fa, double fb, std::size_t s, std::size_t t) const {
    Point2 x;
    bool ok = false;
    if (a.label >= 0) {
      ok = circumcenter(s, static_cast<std::size_t>(a.label), t, x);
    } else {
      const std::size_t side = static_cast<std::size_t>(-a.label - 1);
      const std::size_t lo = std::min(s, t);
      const std::size_t hi = std::max(s, t);
      const Point2 e0 = env_[side];
      const Point2 e1 = env_[side + 1];
      const Point2 m = 0.5 * (sites_[lo] + sites_[hi]);
      const Point2 d = sites_[hi] - sites_[lo];
      const double denom = dot(e1 - e0, d);
      if (denom != 0.0) {
        x = e0 + (dot(m - e0, d) / denom) * (e1 - e0);
        ok = true;
      }
    }
    const double tol = 1e-7 * (1.0 + norm(b.p - a.p));
    if (ok && std::isfinite(x.x) && std::isfinite(x.y) && point_segment_distance(x, a.p, b.p) <= tol) return x;
    // Ill-conditioned generators: interpolate along the edge instead.
    const double u = fa / (fa - fb);
    return a.p + u * (b.p - a.p);
  }

  bool circumcenter(std::size_t i, std::size_t j, std::size_t k, Point2& out) const {
    std::size_t idx[3] = {i, j, k};
    std::sort(idx, idx + 3);
    const Point2 a = sites_[idx[0]];
    const Point2 b = sites_[idx[1]] - a;
    const Point2 c = sites_[idx[2]] - a;
    const double d = 2.0 * cross(b, c);
    if (d == 0.0) return false;
    const double b2 = dot(b, b);
    const double c2 = dot(c, c);
    out = {a.x + (c.y * b2 - b.y * c2) / d, a.y + (b.x * c2 - c.x * b2) / d};
    return true;
  }

  const std::vector<Point2>& sites_;
  const Ring& env_;
  mutable std::vector<double> f_;
  mutable std::vector<CellVertex> out_;
};

// Uniform bucket grid over the sites.
class SiteGrid {
public:
  SiteGrid(const std::vector<Point2>& sites, const Box& box) {
    const double w = std::max(box.max_corner().x - box.min_corner().x, 1e-9);
    const double h = std::max(box.max_corner().y - box.min_corner().y, 1e-9);
    cell_ = std::sqrt(w * h / static_cast<double>(sites.size()));
    cell_ = std::max({cell_, w / 4096.0, h / 4096.0});
    origin_ = box.min_corner();
    nx_ = static_cast<std::int64_t>(w / cell_) + 1;
    ny_ = static_cast<std::int64_t>(h / cell_) + 1;
    buckets_.resize(static_cast<std::size_t>(nx_ * ny_));
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const auto [cx, cy] = cell_of(sites[i]);
      buckets_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(i);
    }
  }

  std::pair<std::int64_t, std::int64_t> cell_of(Point2 p) const {
    auto cx = static_cast<std::int64_t>(std::floor((p.x - origin_.x) / cell_));
    auto cy = static_cast<std::int64_t>(std::floor((p.y - origin_.y) / cell_));
    return {std::clamp<std::int64_t>(cx, 0, nx_ - 1), std::clamp<std::int64_t>(cy, 0, ny_ - 1)};
  }

  // Sites in the square ring at Chebyshev distance `k` around (cx, cy).
  // Returns false once the ring lies entirely outside the grid.
  bool ring(std::int64_t cx, std::int64_t cy, std::int64_t k, std::vector<std::size_t>& out) const {
    out.clear();
    bool inside = false;
    auto visit = [&](std::int64_t x, std::int64_t y) {
      if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return;
      inside = true;
      const auto& b = buckets_[static_cast<std::size_t>(y * nx_ + x)];
      out.insert(out.end(), b.begin(), b.end());
    };
    if (k == 0) {
      visit(cx, cy);
      return inside;
    }
    for (std::int64_t x = cx - k; x <= cx + k; ++x) {
      visit(x, cy - k);
      visit(x, cy + k);
    }
    for (std::int64_t y = cy - k + 1; y <= cy + k - 1; ++y) {
      visit(cx - k, y);
      visit(cx + k, y);
    }
    return inside;
  }

  double cell_size() const { return cell_; }

private:
  double cell_ = 1.0;
  Point2 origin_;
  std::int64_t nx_ = 1;
  std::int64_t ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

inline bool is_convex(const Ring& r) {
  for (std::size_t i = 0; i + 2 < r.size() + 1; ++i) {
    const std::size_t n = r.size() - 1;
    const Point2 a = r[i % n];
    const Point2 b = r[(i + 1) % n];
    const Point2 c = r[(i + 2) % n];
    if (cross(b - a, c - b) < 0.0) return false;
  }
  return true;
}

} // namespace detail

/// Voronoi diagram of `seeds` clipped to `envelope` (a convex polygon).
inline VoronoiDiagram voronoi(const std::vector<SourcePoint>& seeds, const Polygon& envelope) {
  if (seeds.empty()) throw InputError("voronoi needs at least one seed");
  MultiPolygon env_norm = normalized(envelope);
  if (env_norm.size() != 1 || !env_norm.front().inners().empty())
    throw InputError("voronoi envelope must be a single polygon without holes");
  const Ring env = env_norm.front().outer();
  if (!detail::is_convex(env)) throw InputError("voronoi envelope must be convex");

  std::vector<std::size_t> by_id(seeds.size());
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return seeds[a].id < seeds[b].id; });
  // Work in seed-id order so results do not depend on input order.
  std::vector<Point2> sites;
  sites.reserve(seeds.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) {
    if (i > 0 && seeds[by_id[i]].id == seeds[by_id[i - 1]].id)
      throw InputError("duplicate seed id " + std::to_string(seeds[by_id[i]].id));
    const Point2 p = seeds[by_id[i]].position;
    if (!bg::covered_by(p, env_norm.front()))
      throw InputError("seed " + std::to_string(seeds[by_id[i]].id) + " lies outside the envelope");
    sites.push_back(p);
  }
  {
    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(sites[a], sites[b]); });
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size() && sites[order[j]].x - sites[order[i]].x <= kMergeEpsilon; ++j)
        if (distance(sites[order[i]], sites[order[j]]) <= kMergeEpsilon)
          throw InputError("duplicate seeds " + std::to_string(seeds[by_id[order[i]]].id) + " and " +
                           std::to_string(seeds[by_id[order[j]]].id));
  }

  const detail::SiteGrid grid(sites, bounding_box(env_norm));
  const detail::CellBuilder builder(sites, env);
  VoronoiDiagram diagram;
  diagram.envelope = env_norm.front();
  diagram.cells.reserve(sites.size());
  std::vector<std::size_t> ring;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    auto poly = builder.initial();
    const auto [cx, cy] = grid.cell_of(sites[s]);
    for (std::int64_t k = 0;; ++k) {
      double reach2 = 0.0;
      for (const auto& v : poly) reach2 = std::max(reach2, squared_distance(v.p, sites[s]));
      // Unvisited sites are at least (k - 1) cells away; they cannot cut the
      // cell once that exceeds twice its radius.
      const double guaranteed = static_cast<double>(k - 1) * grid.cell_size();
      if (k > 0 && guaranteed > 0.0 && guaranteed * guaranteed >= 4.0 * reach2) break;
      if (!grid.ring(cx, cy, k, ring)) break;
      std::sort(ring.begin(), ring.end(), [&](std::size_t a, std::size_t b) {
        const double da = squared_distance(sites[a], sites[s]);
        const double db = squared_distance(sites[b], sites[s]);
        return da != db ? da < db : a < b;
      });
      for (std::size_t t : ring)
        if (t != s) builder.clip(poly, s, t);
    }
    VoronoiCell cell;
    cell.seed = seeds[by_id[s]].id;
    for (const auto& v : poly) cell.polygon.outer().push_back(v.p);
    cell.polygon.outer().push_back(poly.front().p);
    detail::rotate_ring_to_min(cell.polygon.outer());
    diagram.cells.push_back(std::move(cell));
  }
  return diagram;
}

/// Point location over a diagram: the lowest seed id whose cell covers the
/// point (ties on shared boundaries go to the lower id).
class CellLocator {
public:
  explicit CellLocator(const VoronoiDiagram& d) : diagram_(&d) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < d.cells.size(); ++i) entries.emplace_back(bounding_box(d.cells[i].polygon), i);
    tree_ = Tree(entries.begin(), entries.end());
  }

  std::optional<SeedId> locate(Point2 p) const {
    std::vector<Entry> hits;
    tree_.query(boost::geometry::index::intersects(p), std::back_inserter(hits));
    std::optional<SeedId> best;
    for (const auto& [box, i] : hits) {
      const auto& cell = diagram_->cells[i];
      if (bg::covered_by(p, cell.polygon) && (!best || cell.seed < *best)) best = cell.seed;
    }
    return best;
  }

  const VoronoiCell* cell_covering(Point2 p) const {
    std::vector<Entry> hits;
    tree_.query(boost::geometry::index::intersects(p), std::back_inserter(hits));
    const VoronoiCell* best = nullptr;
    for (const auto& [box, i] : hits) {
      const auto& cell = diagram_->cells[i];
      if (bg::covered_by(p, cell.polygon) && (!best || cell.seed < best->seed)) best = &cell;
    }
    return best;
  }

private:
  using Entry = std::pair<Box, std::size_t>;
  using Tree = boost::geometry::index::rtree<Entry, boost::geometry::index::quadratic<16>>;
  const VoronoiDiagram* diagram_;
  Tree tree_;
};

} // namespace roadsect
