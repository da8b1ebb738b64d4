#pragma once

// Validation against reference decompositions: per-section area comparison
// with an OLS regression and deviation buckets, plus the correspondence
// typology (1-1, 1-n, n-1, n-p) between two object collections.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <boost/geometry/index/rtree.hpp>

#include "roadsect/error.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/roadgraph.hpp"

namespace roadsect {

struct ReferenceArea {
  EdgeId edge = 0;
  double area = 0.0;
};

struct MatchPair {
  EdgeId edge = 0;
  double modeled = 0.0;
  double reference = 0.0;
  double deviation_pct = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<EdgeId> unmatched; // reference ids absent from the model (or with no area)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double bucket_5 = 0.0;
  double bucket_10 = 0.0;
  double bucket_15 = 0.0;
};

/// Regresses modeled area (y) on reference area (x) over the sections that
/// exist on both sides. Buckets count deviations strictly below 5/10/15 %.
/// The intercept is free unless every reference area is the same.
inline MatchReport compare(const std::vector<SurfaceSection>& modeled, const std::vector<ReferenceArea>& reference) {
  std::map<EdgeId, double> model_area;
  for (const SurfaceSection& s : modeled) model_area[s.edge] = s.area;
  MatchReport report;
  for (const ReferenceArea& r : reference) {
    auto it = model_area.find(r.edge);
    if (it == model_area.end() || !(r.area > 0.0)) {
      report.unmatched.push_back(r.edge);
      continue;
    }
    const double dev = std::abs(it->second - r.area) * 100.0 / r.area;
    report.pairs.push_back({r.edge, it->second, r.area, dev});
  }
  std::sort(report.pairs.begin(), report.pairs.end(), [](const MatchPair& a, const MatchPair& b) { return a.edge < b.edge; });
  std::sort(report.unmatched.begin(), report.unmatched.end());
  if (report.pairs.size() < 2) throw InputError("regression needs at least two matched sections");

  const double n = static_cast<double>(report.pairs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const MatchPair& p : report.pairs) {
    mx += p.reference;
    my += p.modeled;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const MatchPair& p : report.pairs) {
    const double dx = p.reference - mx;
    const double dy = p.modeled - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx > 0.0) {
    report.slope = sxy / sxx;
    report.intercept = my - report.slope * mx;
    report.r_squared = syy == 0.0 ? 0.0 : std::clamp((sxy / sxx) * (sxy / syy), 0.0, 1.0);
  } else {
    // All reference areas equal (symmetric fixtures): the free-intercept fit
    // is undefined, so fit through the origin with the uncentred R².
    double sx2 = 0.0;
    double sxy0 = 0.0;
    double sy2 = 0.0;
    for (const MatchPair& p : report.pairs) {
      sx2 += p.reference * p.reference;
      sxy0 += p.reference * p.modeled;
      sy2 += p.modeled * p.modeled;
    }
    report.slope = sxy0 / sx2;
    report.intercept = 0.0;
    double rss = 0.0;
    for (const MatchPair& p : report.pairs) {
      const double r = p.modeled - report.slope * p.reference;
      rss += r * r;
    }
    report.r_squared = sy2 == 0.0 ? 0.0 : std::clamp(1.0 - rss / sy2, 0.0, 1.0);
  }

  std::size_t b5 = 0;
  std::size_t b10 = 0;
  std::size_t b15 = 0;
  for (const MatchPair& p : report.pairs) {
    b5 += p.deviation_pct < 5.0;
    b10 += p.deviation_pct < 10.0;
    b15 += p.deviation_pct < 15.0;
  }
  report.bucket_5 = static_cast<double>(b5) / n;
  report.bucket_10 = static_cast<double>(b10) / n;
  report.bucket_15 = static_cast<double>(b15) / n;
  return report;
}

enum class RelationLabel { OneToOne, OneToMany, ManyToOne, ManyToMany, None };

inline const char* to_string(RelationLabel l) {
  switch (l) {
    case RelationLabel::OneToOne: return "1-1";
    case RelationLabel::OneToMany: return "1-n";
    case RelationLabel::ManyToOne: return "n-1";
    case RelationLabel::ManyToMany: return "n-p";
    case RelationLabel::None: return "none";
  }
  return "none";
}

using Geometry = std::variant<Polyline, MultiPolygon>;

// Both lists label the component an object belongs to as "#A-#B": one A
// polygon covering n B polylines is "1-n" for all of them.
struct RelationResult {
  std::vector<RelationLabel> a;
  std::vector<RelationLabel> b;
};

inline constexpr double kDefaultMinOverlap = 0.05;

namespace detail {

using Linestring = bg::model::linestring<Point2>;
using MultiLinestring = bg::model::multi_linestring<Linestring>;

inline Linestring as_linestring(const Polyline& p) { return Linestring(p.vertices().begin(), p.vertices().end()); }

inline double measure(const Geometry& g) {
  if (const auto* line = std::get_if<Polyline>(&g)) return length(*line);
  return area(std::get<MultiPolygon>(g));
}

inline Box box_of(const Geometry& g) {
  if (const auto* line = std::get_if<Polyline>(&g)) return bg::return_envelope<Box>(as_linestring(*line));
  return bounding_box(std::get<MultiPolygon>(g));
}

// Measure of x ∩ y in the lower of the two dimensions, together with the
// measure of the lower-dimensional operand(s) it is compared against.
inline std::pair<double, double> overlap(const Geometry& x, const Geometry& y) {
  const auto* lx = std::get_if<Polyline>(&x);
  const auto* ly = std::get_if<Polyline>(&y);
  if (lx && ly) {
    MultiLinestring common;
    bg::intersection(as_linestring(*lx), as_linestring(*ly), common);
    return {bg::length(common), std::min(length(*lx), length(*ly))};
  }
  if (lx || ly) {
    const Polyline& line = lx ? *lx : *ly;
    const MultiPolygon& poly = std::get<MultiPolygon>(lx ? y : x);
    MultiLinestring inside;
    bg::intersection(as_linestring(line), poly, inside);
    return {bg::length(inside), length(line)};
  }
  const MultiPolygon& px = std::get<MultiPolygon>(x);
  const MultiPolygon& py = std::get<MultiPolygon>(y);
  MultiPolygon common;
  bg::intersection(px, py, common);
  return {area(common), std::min(area(px), area(py))};
}

} // namespace detail

/// Labels every object of A and B by the shape of the correspondence
/// component it belongs to. x and y correspond when their overlap exceeds
/// min_overlap times the measure of the smaller (or lower-dimensional) one.
inline RelationResult classify_relation(const std::vector<Geometry>& a, const std::vector<Geometry>& b,
                                        double min_overlap = kDefaultMinOverlap) {
  if (!(min_overlap > 0.0 && min_overlap < 1.0)) throw InputError("min_overlap must lie in (0, 1)");
  namespace bgi = boost::geometry::index;
  using Entry = std::pair<Box, std::size_t>;
  std::vector<Entry> entries;
  for (std::size_t j = 0; j < b.size(); ++j) entries.emplace_back(detail::box_of(b[j]), j);
  const bgi::rtree<Entry, bgi::quadratic<16>> tree(entries.begin(), entries.end());

  // Union-find over A (0..|A|-1) and B (|A|..).
  detail::DisjointSet sets(a.size() + b.size());
  std::vector<std::size_t> links_a(a.size(), 0);
  std::vector<std::size_t> links_b(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (detail::measure(a[i]) <= 0.0) continue;
    std::vector<Entry> hits;
    tree.query(bgi::intersects(detail::box_of(a[i])), std::back_inserter(hits));
    for (const auto& [box, j] : hits) {
      const auto [common, base] = detail::overlap(a[i], b[j]);
      if (base > 0.0 && common > min_overlap * base) {
        sets.join(i, a.size() + j);
        ++links_a[i];
        ++links_b[j];
      }
    }
  }
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> shape; // root -> (#A, #B)
  for (std::size_t i = 0; i < a.size(); ++i) ++shape[sets.find(i)].first;
  for (std::size_t j = 0; j < b.size(); ++j) ++shape[sets.find(a.size() + j)].second;

  auto label = [](std::size_t na, std::size_t nb) {
    if (na == 1 && nb == 1) return RelationLabel::OneToOne;
    if (na == 1) return RelationLabel::OneToMany;
    if (nb == 1) return RelationLabel::ManyToOne;
    return RelationLabel::ManyToMany;
  };
  RelationResult out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto [na, nb] = shape[sets.find(i)];
    out.a.push_back(links_a[i] == 0 ? RelationLabel::None : label(na, nb));
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto [na, nb] = shape[sets.find(a.size() + j)];
    out.b.push_back(links_b[j] == 0 ? RelationLabel::None : label(na, nb));
  }
  return out;
}

} // namespace roadsect
