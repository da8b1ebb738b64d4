#pragma once

// Planar geometry kernel. Coordinates are projected meters; nothing here
// knows about ellipsoids. Polygon booleans are delegated to Boost.Geometry.
// Its default integer rescaling moves intersection vertices by up to ~1e-7 m
// on street-scale extents, which is too coarse for the area conservation
// bounds. Overlays instead run on doubles over operands snap-rounded to a
// nanometre grid (see kSnapGrid).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#ifndef BOOST_GEOMETRY_NO_ROBUSTNESS
#if defined(BOOST_GEOMETRY_USE_RESCALING)
#error "include roadsect headers before Boost.Geometry, or define BOOST_GEOMETRY_NO_ROBUSTNESS globally"
#endif
#define BOOST_GEOMETRY_NO_ROBUSTNESS
#endif
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/register/point.hpp>

#include "roadsect/error.hpp"

namespace roadsect {

// Distance below which two computed vertices are the same vertex.
inline constexpr double kMergeEpsilon = 1e-9;

// Overlay operands are rounded to this binary grid (2^-30 m, just under a
// nanometre). Intersection points computed twice from the same pair of
// segments can differ in their last bits, and the floating-point overlay
// mis-sorts such near-twins; on the grid they become exact twins. A power of
// two keeps the rounding exact wherever the grid is finer than a double's
// resolution.
inline constexpr double kSnapGrid = 0x1p-30;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Lexicographic (x, then y).
inline bool lex_less(Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

} // namespace roadsect

BOOST_GEOMETRY_REGISTER_POINT_2D(roadsect::Point2, double, boost::geometry::cs::cartesian, x, y)

namespace roadsect {

namespace bg = boost::geometry;

// Exterior counter-clockwise, holes clockwise, rings explicitly closed.
using Polygon = bg::model::polygon<Point2, false, true>;
using Ring = Polygon::ring_type;
using MultiPolygon = bg::model::multi_polygon<Polygon>;
using Box = bg::model::box<Point2>;
using Segment = bg::model::segment<Point2>;

/// Ordered vertex chain with at least two distinct vertices.
///
/// Consecutive vertices closer than kMergeEpsilon are merged at construction;
/// anything that leaves fewer than two vertices is rejected.
class Polyline {
public:
  Polyline() = default;

  explicit Polyline(std::vector<Point2> vertices) {
    for (const Point2& p : vertices) {
      if (!is_finite(p)) throw InputError("polyline has a non-finite coordinate");
      if (!vertices_.empty() && distance(vertices_.back(), p) <= kMergeEpsilon) continue;
      vertices_.push_back(p);
    }
    if (vertices_.size() < 2) throw InputError("polyline is degenerate (fewer than two distinct vertices)");
  }

  Polyline(std::initializer_list<Point2> vertices) : Polyline(std::vector<Point2>(vertices)) {}

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& front() const { return vertices_.front(); }
  const Point2& back() const { return vertices_.back(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

  Polyline reversed() const {
    Polyline r;
    r.vertices_.assign(vertices_.rbegin(), vertices_.rend());
    return r;
  }

  friend bool operator==(const Polyline&, const Polyline&) = default;

private:
  std::vector<Point2> vertices_;
};

inline double length(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) total += distance(p[i - 1], p[i]);
  return total;
}

// Point at arclength s from the first vertex; s is clamped to [0, length].
inline Point2 point_at(const Polyline& p, double s) {
  if (s <= 0.0) return p.front();
  double walked = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double seg = distance(p[i - 1], p[i]);
    if (walked + seg >= s) {
      const double t = (s - walked) / seg;
      return p[i - 1] + t * (p[i] - p[i - 1]);
    }
    walked += seg;
  }
  return p.back();
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

inline double distance_to_polyline(Point2 q, const Polyline& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < p.size(); ++i) best = std::min(best, point_segment_distance(q, p[i - 1], p[i]));
  return best;
}

struct ArcPoint {
  double arclength = 0.0;
  Point2 position;
};

/// Points of `p` at exactly `radius` from `center`, with their arclength
/// along `p`, ordered by arclength. Hits closer than kMergeEpsilon (segment
/// joints, tangencies) are reported once.
inline std::vector<ArcPoint> circle_polyline_hits(Point2 center, double radius, const Polyline& p) {
  if (!(radius > 0.0)) throw InputError("circle radius must be positive");
  std::vector<ArcPoint> hits;
  double walked = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const Point2 a = p[i - 1];
    const Point2 d = p[i] - a;
    const double seg = norm(d);
    // |a + t d - c|^2 = r^2, t in [0, 1]
    const Point2 f = a - center;
    const double qa = dot(d, d);
    const double qb = 2.0 * dot(f, d);
    const double qc = dot(f, f) - radius * radius;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      // Numerically stable pair of roots.
      const double q = -0.5 * (qb + std::copysign(root, qb));
      double t0 = q / qa;
      double t1 = q != 0.0 ? qc / q : t0;
      if (t0 > t1) std::swap(t0, t1);
      for (double t : {t0, t1}) {
        if (t < 0.0 || t > 1.0) continue;
        Point2 hit = a + t * d;
        // Pull the hit back onto the circle to remove rounding drift.
        const Point2 rel = hit - center;
        const double rn = norm(rel);
        if (rn > 0.0) hit = center + (radius / rn) * rel;
        const ArcPoint ap{walked + t * seg, hit};
        if (!hits.empty() && distance(hits.back().position, ap.position) <= kMergeEpsilon) continue;
        hits.push_back(ap);
      }
    }
    walked += seg;
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const ArcPoint& l, const ArcPoint& r) { return l.arclength < r.arclength; });
  return hits;
}

inline std::vector<Point2> circle_polyline_intersections(Point2 center, double radius, const Polyline& p) {
  std::vector<Point2> out;
  for (const ArcPoint& h : circle_polyline_hits(center, radius, p)) out.push_back(h.position);
  return out;
}

inline double area(const Ring& r) { return std::abs(bg::area(r)); }

inline double area(const Polygon& g) {
  double a = area(g.outer());
  for (const Ring& hole : g.inners()) a -= area(hole);
  return a;
}

inline double area(const MultiPolygon& g) {
  double a = 0.0;
  for (const Polygon& p : g) a += area(p);
  return a;
}

inline std::size_t vertex_count(const MultiPolygon& g) {
  std::size_t n = 0;
  for (const Polygon& p : g) {
    n += p.outer().size();
    for (const Ring& r : p.inners()) n += r.size();
  }
  return n;
}

inline Polygon make_rectangle(double minx, double miny, double maxx, double maxy) {
  Polygon p;
  p.outer() = {{minx, miny}, {maxx, miny}, {maxx, maxy}, {minx, maxy}, {minx, miny}};
  return p;
}

inline Polygon make_polygon(std::vector<Point2> exterior, std::vector<std::vector<Point2>> holes = {}) {
  Polygon p;
  p.outer().assign(exterior.begin(), exterior.end());
  for (auto& h : holes) p.inners().emplace_back(h.begin(), h.end());
  bg::correct(p);
  return p;
}

inline Box bounding_box(const MultiPolygon& g) { return bg::return_envelope<Box>(g); }
inline Box bounding_box(const Polygon& g) { return bg::return_envelope<Box>(g); }

namespace detail {

inline void rotate_ring_to_min(Ring& r) {
  if (r.size() < 4) return;
  r.pop_back();
  auto it = std::min_element(r.begin(), r.end(), lex_less);
  std::rotate(r.begin(), it, r.end());
  r.push_back(r.front());
}

inline void drop_repeated(Ring& r) {
  Ring out;
  out.reserve(r.size());
  for (const Point2& p : r) {
    if (!out.empty() && distance(out.back(), p) <= kMergeEpsilon) continue;
    out.push_back(p);
  }
  if (out.size() > 1 && distance(out.front(), out.back()) <= kMergeEpsilon) out.back() = out.front();
  r.swap(out);
}

// Canonical vertex order: each ring starts at its lexicographically smallest
// vertex, parts sorted by that vertex, holes likewise.
inline void canonicalize(MultiPolygon& g) {
  for (Polygon& p : g) {
    rotate_ring_to_min(p.outer());
    for (Ring& h : p.inners()) rotate_ring_to_min(h);
    std::sort(p.inners().begin(), p.inners().end(),
              [](const Ring& a, const Ring& b) { return lex_less(a.front(), b.front()); });
  }
  std::sort(g.begin(), g.end(),
            [](const Polygon& a, const Polygon& b) { return lex_less(a.outer().front(), b.outer().front()); });
}

} // namespace detail

namespace detail {

// Every vertex on the line through the first two distinct ones. A bow-tie
// has zero net area too, but is not flat.
inline bool is_flat(const Ring& r) {
  if (r.empty()) return true;
  const Point2 o = r.front();
  std::size_t k = 0;
  while (k < r.size() && distance(r[k], o) <= kMergeEpsilon) ++k;
  if (k == r.size()) return true;
  const Point2 d = r[k] - o;
  const double scale = norm(d);
  for (const Point2& p : r)
    if (std::abs(cross(d, p - o)) > kMergeEpsilon * scale) return false;
  return true;
}

} // namespace detail

/// Reorients rings, closes them, removes repeated vertices and zero-width
/// spikes, then insists on validity. Anything deeper than that is a
/// TopologyError; the input is never reshaped beyond those repairs.
inline MultiPolygon normalized(MultiPolygon g) {
  for (Polygon& p : g) {
    if (!p.outer().empty() && !(p.outer().front() == p.outer().back())) p.outer().push_back(p.outer().front());
    for (Ring& h : p.inners())
      if (!h.empty() && !(h.front() == h.back())) h.push_back(h.front());
    detail::drop_repeated(p.outer());
    for (Ring& h : p.inners()) detail::drop_repeated(h);
  }
  bg::correct(g);
  bg::remove_spikes(g);
  std::erase_if(g, [](const Polygon& p) { return p.outer().size() < 4 || detail::is_flat(p.outer()); });
  for (Polygon& p : g)
    std::erase_if(p.inners(), [](const Ring& h) { return h.size() < 4 || detail::is_flat(h); });
  std::string reason;
  if (!bg::is_valid(g, reason)) throw TopologyError("invalid polygon geometry: " + reason);
  detail::canonicalize(g);
  return g;
}

inline MultiPolygon normalized(const Polygon& p) { return normalized(MultiPolygon{p}); }

enum class BooleanOp { Union, Intersection, Difference };

namespace detail {

inline double snap(double v) { return std::round(v / kSnapGrid) * kSnapGrid; }

inline MultiPolygon snapped(MultiPolygon g) {
  auto snap_ring = [](Ring& r) {
    for (Point2& p : r) p = {snap(p.x), snap(p.y)};
    drop_repeated(r);
  };
  for (Polygon& p : g) {
    snap_ring(p.outer());
    for (Ring& h : p.inners()) snap_ring(h);
    std::erase_if(p.inners(), [](const Ring& h) { return h.size() < 4; });
  }
  std::erase_if(g, [](const Polygon& p) { return p.outer().size() < 4; });
  return g;
}

// Overlay without input validation. Callers guarantee valid operands.
inline MultiPolygon overlay(const MultiPolygon& a, const MultiPolygon& b, BooleanOp op) {
  const MultiPolygon sa = snapped(a);
  const MultiPolygon sb = snapped(b);
  MultiPolygon out;
  switch (op) {
    case BooleanOp::Union: bg::union_(sa, sb, out); break;
    case BooleanOp::Intersection: bg::intersection(sa, sb, out); break;
    case BooleanOp::Difference: bg::difference(sa, sb, out); break;
  }
  std::erase_if(out, [](const Polygon& p) { return p.outer().size() < 4 || area(p) <= 0.0; });
  canonicalize(out);
  return out;
}

} // namespace detail

inline MultiPolygon boolean(const MultiPolygon& a, const MultiPolygon& b, BooleanOp op) {
  return detail::overlay(normalized(a), normalized(b), op);
}

// Union of many operands by pairwise tree reduction.
inline MultiPolygon union_all(std::vector<MultiPolygon> parts) {
  std::erase_if(parts, [](const MultiPolygon& m) { return m.empty(); });
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<MultiPolygon> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
      next.push_back(detail::overlay(parts[i], parts[i + 1], BooleanOp::Union));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts.swap(next);
  }
  detail::canonicalize(parts.front());
  return std::move(parts.front());
}

inline bool covers(const MultiPolygon& g, Point2 p) { return bg::covered_by(p, g); }
inline bool covers(const Polygon& g, Point2 p) { return bg::covered_by(p, g); }

inline double distance_to_boundary(Point2 q, const Ring& r) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r.size(); ++i) best = std::min(best, point_segment_distance(q, r[i - 1], r[i]));
  return best;
}

inline double distance_to_boundary(Point2 q, const Polygon& g) {
  double best = distance_to_boundary(q, g.outer());
  for (const Ring& h : g.inners()) best = std::min(best, distance_to_boundary(q, h));
  return best;
}

inline double distance_to_boundary(Point2 q, const MultiPolygon& g) {
  double best = std::numeric_limits<double>::infinity();
  for (const Polygon& p : g) best = std::min(best, distance_to_boundary(q, p));
  return best;
}

/// `n` points drawn uniformly from the interior of `g` by rejection over its
/// bounding box. Same seed, same points.
inline std::vector<Point2> sample_points_in(const MultiPolygon& g, std::size_t n, std::uint64_t seed) {
  if (g.empty() || !(area(g) > 0.0)) throw InputError("cannot sample points in an empty geometry");
  if (n == 0) throw InputError("sample count must be at least 1");
  const Box box = bounding_box(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.min_corner().x, box.max_corner().x);
  std::uniform_real_distribution<double> uy(box.min_corner().y, box.max_corner().y);
  std::vector<Point2> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = ux(rng);
    const double y = uy(rng);
    const Point2 p{x, y};
    if (bg::within(p, g)) out.push_back(p);
  }
  return out;
}

} // namespace roadsect
