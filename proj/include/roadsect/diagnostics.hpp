#pragma once

// Brute-force checks of a finished partition, usable on real data.

#include <cstdint>
#include <limits>
#include <vector>

#include <boost/geometry/index/rtree.hpp>

#include "roadsect/geom.hpp"
#include "roadsect/partition.hpp"
#include "roadsect/seeding.hpp"

namespace roadsect {

struct OwnerCheck {
  std::size_t sampled = 0;
  std::size_t tested = 0;   // outside the boundary band
  std::size_t agreed = 0;
  std::size_t unlocated = 0; // inside the footprint but in no section

  double agreement() const { return tested == 0 ? 1.0 : static_cast<double>(agreed) / static_cast<double>(tested); }
};

/// Samples footprint points and compares the section that contains each one
/// against the owner of its nearest seed (linear scan over all seeds).
/// Points within `band` of a section boundary are skipped.
inline OwnerCheck nearest_owner_check(const PartitionResult& result, const std::vector<SourcePoint>& seeds,
                                      const MultiPolygon& footprint, std::size_t samples, std::uint64_t rng_seed,
                                      double band = 1e-6) {
  namespace bgi = boost::geometry::index;
  using Entry = std::pair<Box, std::size_t>;
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < result.sections.size(); ++i)
    for (const Polygon& p : result.sections[i].geometry) entries.emplace_back(bounding_box(p), i);
  const bgi::rtree<Entry, bgi::quadratic<16>> tree(entries.begin(), entries.end());

  OwnerCheck check;
  for (const Point2& q : sample_points_in(footprint, samples, rng_seed)) {
    ++check.sampled;
    std::vector<Entry> hits;
    tree.query(bgi::intersects(q), std::back_inserter(hits));
    const SurfaceSection* home = nullptr;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [box, i] : hits) {
      const SurfaceSection& s = result.sections[i];
      margin = std::min(margin, distance_to_boundary(q, s.geometry));
      if (!home && covers(s.geometry, q)) home = &s;
    }
    if (margin <= band) continue;
    if (!home) {
      ++check.unlocated;
      ++check.tested;
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    EdgeId owner = 0;
    for (const SourcePoint& s : seeds) {
      const double d = squared_distance(s.position, q);
      if (d < best) {
        best = d;
        owner = s.owner_edge;
      }
    }
    ++check.tested;
    check.agreed += owner == home->edge;
  }
  return check;
}

} // namespace roadsect
