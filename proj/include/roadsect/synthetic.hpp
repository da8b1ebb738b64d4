#pragma once

// Synthetic road networks with an analytically known decomposition.
//
// Junctions carry a hub polygon (a w x w square for axis-aligned kinds, a
// regular polygon with arms flush on its sides for y/star); edges carry a
// rectangle from hub to hub. The reference share of a hub is computed from
// the bisector construction: each arm owns the hub triangle it faces, and
// the triangle of a missing direction goes to the perpendicular arms (half
// each when both exist), or to the opposite arm when neither exists.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "roadsect/error.hpp"
#include "roadsect/evaluate.hpp"
#include "roadsect/geom.hpp"
#include "roadsect/roadgraph.hpp"

namespace roadsect {

enum class SyntheticKind { Grid, Cross, T, Y, Star, Parallel, CloseJunctions };

inline const char* to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::Grid: return "grid";
    case SyntheticKind::Cross: return "cross";
    case SyntheticKind::T: return "t";
    case SyntheticKind::Y: return "y";
    case SyntheticKind::Star: return "star";
    case SyntheticKind::Parallel: return "parallel";
    case SyntheticKind::CloseJunctions: return "close-junctions";
  }
  return "grid";
}

inline SyntheticKind parse_synthetic_kind(const std::string& s) {
  for (SyntheticKind k : {SyntheticKind::Grid, SyntheticKind::Cross, SyntheticKind::T, SyntheticKind::Y,
                          SyntheticKind::Star, SyntheticKind::Parallel, SyntheticKind::CloseJunctions})
    if (s == to_string(k)) return k;
  throw InputError("unknown synthetic kind '" + s + "'");
}

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Grid;
  int rows = 2;         // grid: blocks per column
  int cols = 2;         // grid: blocks per row
  double block = 50.0;  // grid block length; arm length for cross/t/y/star/close-junctions; edge length for parallel
  double width = 6.0;   // road width; slab width for parallel
  int arms = 5;         // star only
  double gap = 8.0;     // parallel: distance between the two centerlines
  double link = 8.0;    // close-junctions: length of the short edge
  std::uint64_t seed = 0; // grid: nonzero jitters block lengths by up to 20 %
  Point2 origin;
};

struct SyntheticNetwork {
  std::vector<LineFeature> lines;
  std::vector<Polygon> surface;
  std::vector<ReferenceArea> reference;
};

namespace detail {

enum Dir { East = 0, North = 1, West = 2, South = 3 };

inline Point2 unit(Dir d) {
  static constexpr std::array<Point2, 4> u{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  return u[d];
}

// Network whose edges are axis-aligned straight segments.
class AxisNetwork {
public:
  AxisNetwork(double width, Point2 origin) : half_(width / 2.0), origin_(origin) {}

  std::size_t add_node(Point2 p) {
    nodes_.push_back({p, {}});
    return nodes_.size() - 1;
  }

  // Straight edge from a to b; they must share x or y.
  void add_edge(std::size_t a, std::size_t b) {
    const Point2 d = nodes_[b].p - nodes_[a].p;
    Dir da;
    if (d.y == 0.0) da = d.x > 0 ? East : West;
    else if (d.x == 0.0) da = d.y > 0 ? North : South;
    else throw InputError("synthetic edge is not axis-aligned");
    const Dir db = static_cast<Dir>((da + 2) % 4);
    if (nodes_[a].arm[da] || nodes_[b].arm[db]) throw InputError("two synthetic edges leave a node the same way");
    nodes_[a].arm[da] = edges_.size();
    nodes_[b].arm[db] = edges_.size();
    edges_.push_back({a, b, da});
  }

  SyntheticNetwork build() const {
    SyntheticNetwork net;
    const double w = 2.0 * half_;
    const double tri = w * w / 4.0;
    std::vector<double> share(edges_.size(), 0.0);
    for (const Node& n : nodes_) {
      if (degree(n) < 2) continue;
      net.surface.push_back(rect(n.p.x - half_, n.p.y - half_, n.p.x + half_, n.p.y + half_));
      for (int d = 0; d < 4; ++d) {
        if (n.arm[d]) {
          share[*n.arm[d]] += tri;
          continue;
        }
        const auto& left = n.arm[(d + 1) % 4];
        const auto& right = n.arm[(d + 3) % 4];
        if (left && right) {
          share[*left] += tri / 2.0;
          share[*right] += tri / 2.0;
        } else if (left || right) {
          share[*(left ? left : right)] += tri;
        } else {
          share[*n.arm[(d + 2) % 4]] += tri;
        }
      }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      const Node& a = nodes_[edge.a];
      const Node& b = nodes_[edge.b];
      const Point2 u = unit(edge.dir);
      const double off_a = degree(a) >= 2 ? half_ : 0.0;
      const double off_b = degree(b) >= 2 ? half_ : 0.0;
      const Point2 pa = a.p + off_a * u;
      const Point2 pb = b.p - off_b * u;
      const double len = norm(pb - pa);
      if (!(len > 0.0)) throw InputError("synthetic road width leaves no room between junctions");
      net.surface.push_back(rect(std::min(pa.x, pb.x) - (u.y != 0 ? half_ : 0.0),
                                 std::min(pa.y, pb.y) - (u.x != 0 ? half_ : 0.0),
                                 std::max(pa.x, pb.x) + (u.y != 0 ? half_ : 0.0),
                                 std::max(pa.y, pb.y) + (u.x != 0 ? half_ : 0.0)));
      const auto id = static_cast<EdgeId>(e);
      net.lines.push_back({id, Polyline{origin_ + a.p, origin_ + b.p}, Attributes{{"name", "road " + std::to_string(e)}}});
      net.reference.push_back({id, len * w + share[e]});
    }
    return net;
  }

private:
  struct Node {
    Point2 p;
    std::array<std::optional<std::size_t>, 4> arm;
  };
  struct Edge {
    std::size_t a;
    std::size_t b;
    Dir dir;
  };

  static int degree(const Node& n) {
    int d = 0;
    for (const auto& a : n.arm) d += a.has_value();
    return d;
  }

  Polygon rect(double x0, double y0, double x1, double y1) const {
    return make_rectangle(origin_.x + x0, origin_.y + y0, origin_.x + x1, origin_.y + y1);
  }

  double half_;
  Point2 origin_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

// n arms at equal angles (first one pointing north) around a regular hub.
inline SyntheticNetwork radial(int n, double arm, double width, Point2 origin) {
  const double pi = std::numbers::pi;
  const double apothem = width / (2.0 * std::tan(pi / n));
  const double circum = width / (2.0 * std::sin(pi / n));
  if (!(arm > apothem + width)) throw InputError("synthetic arms are too short for the hub");
  std::vector<Point2> corner(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double phi = pi / 2.0 + 2.0 * pi * k / n - pi / n;
    corner[static_cast<std::size_t>(k)] = origin + Point2{circum * std::cos(phi), circum * std::sin(phi)};
  }
  SyntheticNetwork net;
  net.surface.push_back(make_polygon(corner));
  for (int k = 0; k < n; ++k) {
    const double theta = pi / 2.0 + 2.0 * pi * k / n;
    const Point2 u{std::cos(theta), std::sin(theta)};
    const Point2 c0 = corner[static_cast<std::size_t>(k)];
    const Point2 c1 = corner[static_cast<std::size_t>((k + 1) % n)];
    net.surface.push_back(make_polygon({c0, c0 + (arm - apothem) * u, c1 + (arm - apothem) * u, c1}));
    net.lines.push_back({k, Polyline{origin, origin + arm * u}, Attributes{{"name", "arm " + std::to_string(k)}}});
    net.reference.push_back({k, width * (arm - apothem) + apothem * width / 2.0});
  }
  return net;
}

} // namespace detail

/// Generates a network, its raw surface pieces and the reference area of
/// every edge's section.
inline SyntheticNetwork synthesize(const SyntheticSpec& spec) {
  if (!(spec.width > 0.0) || !(spec.block > 0.0)) throw InputError("synthetic dimensions must be positive");
  switch (spec.kind) {
    case SyntheticKind::Grid: {
      if (spec.rows < 1 || spec.cols < 1) throw InputError("grid needs at least one row and one column");
      std::mt19937_64 rng(spec.seed);
      std::uniform_real_distribution<double> jitter(0.8, 1.2);
      auto steps = [&](int count) {
        std::vector<double> at{0.0};
        for (int i = 0; i < count; ++i) at.push_back(at.back() + spec.block * (spec.seed == 0 ? 1.0 : jitter(rng)));
        return at;
      };
      const auto xs = steps(spec.cols);
      const auto ys = steps(spec.rows);
      for (std::size_t i = 1; i < xs.size(); ++i)
        if (spec.width >= xs[i] - xs[i - 1]) throw InputError("grid road width must be below the block length");
      for (std::size_t i = 1; i < ys.size(); ++i)
        if (spec.width >= ys[i] - ys[i - 1]) throw InputError("grid road width must be below the block length");
      detail::AxisNetwork net(spec.width, spec.origin);
      std::vector<std::vector<std::size_t>> id(ys.size(), std::vector<std::size_t>(xs.size()));
      for (std::size_t r = 0; r < ys.size(); ++r)
        for (std::size_t c = 0; c < xs.size(); ++c) id[r][c] = net.add_node({xs[c], ys[r]});
      for (std::size_t r = 0; r < ys.size(); ++r)
        for (std::size_t c = 0; c + 1 < xs.size(); ++c) net.add_edge(id[r][c], id[r][c + 1]);
      for (std::size_t c = 0; c < xs.size(); ++c)
        for (std::size_t r = 0; r + 1 < ys.size(); ++r) net.add_edge(id[r][c], id[r + 1][c]);
      return net.build();
    }
    case SyntheticKind::Cross:
    case SyntheticKind::T: {
      if (spec.width >= spec.block) throw InputError("arm length must exceed the road width");
      detail::AxisNetwork net(spec.width, spec.origin);
      const std::size_t hub = net.add_node({0, 0});
      std::vector<detail::Dir> dirs{detail::East, detail::North, detail::West};
      if (spec.kind == SyntheticKind::Cross) dirs.push_back(detail::South);
      for (detail::Dir d : dirs) net.add_edge(hub, net.add_node(spec.block * detail::unit(d)));
      return net.build();
    }
    case SyntheticKind::Y: return detail::radial(3, spec.block, spec.width, spec.origin);
    case SyntheticKind::Star:
      if (spec.arms < 3 || spec.arms > 12) throw InputError("star needs between 3 and 12 arms");
      return detail::radial(spec.arms, spec.block, spec.width, spec.origin);
    case SyntheticKind::Parallel: {
      if (!(spec.gap > 0.0) || spec.gap >= spec.width) throw InputError("parallel gap must lie inside the slab width");
      const double margin = (spec.width - spec.gap) / 2.0;
      const double mid = spec.gap / 2.0;
      SyntheticNetwork net;
      const Point2 o = spec.origin;
      net.lines.push_back({0, Polyline{o, o + Point2{spec.block, 0}}, Attributes{{"name", "south carriageway"}}});
      net.lines.push_back({1, Polyline{o + Point2{0, spec.gap}, o + Point2{spec.block, spec.gap}},
                           Attributes{{"name", "north carriageway"}}});
      net.surface.push_back(make_rectangle(o.x, o.y - margin, o.x + spec.block, o.y + mid));
      net.surface.push_back(make_rectangle(o.x, o.y + mid, o.x + spec.block, o.y + spec.gap + margin));
      net.reference.push_back({0, spec.block * spec.width / 2.0});
      net.reference.push_back({1, spec.block * spec.width / 2.0});
      return net;
    }
    case SyntheticKind::CloseJunctions: {
      if (spec.width >= spec.link || spec.width >= spec.block)
        throw InputError("close-junctions needs a road width below the link and arm lengths");
      detail::AxisNetwork net(spec.width, spec.origin);
      const std::size_t a = net.add_node({0, 0});
      const std::size_t b = net.add_node({spec.link, 0});
      net.add_edge(a, b);
      for (detail::Dir d : {detail::North, detail::West, detail::South})
        net.add_edge(a, net.add_node(spec.block * detail::unit(d)));
      for (detail::Dir d : {detail::East, detail::North, detail::South})
        net.add_edge(b, net.add_node(Point2{spec.link, 0} + spec.block * detail::unit(d)));
      return net.build();
    }
  }
  throw InputError("unsupported synthetic kind");
}

} // namespace roadsect
