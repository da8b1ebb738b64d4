#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"

using namespace roadsect;

namespace {

NodeId node_at(const RoadGraph& g, Point2 p) {
  for (const RoadNode& n : g.nodes())
    if (distance(n.position, p) < 1e-9) return n.id;
  throw std::runtime_error("no node there");
}

std::vector<Point2> positions(const std::vector<SourcePoint>& pts) {
  std::vector<Point2> out;
  for (const SourcePoint& s : pts) out.push_back(s.position);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

void expect_points(const std::vector<SourcePoint>& got, std::vector<Point2> want) {
  std::sort(want.begin(), want.end(), lex_less);
  const auto have = positions(got);
  ASSERT_EQ(have.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(have[i].x, want[i].x, 1e-12);
    EXPECT_NEAR(have[i].y, want[i].y, 1e-12);
  }
}

} // namespace

TEST(NodeRadius, Examples) {
  const SeedingConfig cfg;
  const RoadGraph t = build_graph({{1, Polyline{{0, 0}, {30, 0}}, {}},
                                   {2, Polyline{{0, 0}, {-40, 0}}, {}},
                                   {3, Polyline{{0, 0}, {0, 50}}, {}}});
  EXPECT_DOUBLE_EQ(node_radius(t, node_at(t, {0, 0}), cfg), 5.0);

  const RoadGraph close = build_graph({{1, Polyline{{0, 0}, {8, 0}}, {}}, {2, Polyline{{0, 0}, {0, 30}}, {}}});
  EXPECT_DOUBLE_EQ(node_radius(close, node_at(close, {0, 0}), cfg), 0.4 * 8);

  const RoadGraph dead = build_graph({{1, Polyline{{0, 0}, {100, 0}}, {}}});
  EXPECT_DOUBLE_EQ(node_radius(dead, node_at(dead, {0, 0}), cfg), 5.0);
}

TEST(SeedingConfig, Validation) {
  EXPECT_THROW((SeedingConfig{0, 0.4, 10}.validate()), InputError);
  EXPECT_THROW((SeedingConfig{5, 0.6, 10}.validate()), InputError);
  EXPECT_THROW((SeedingConfig{5, 0.0, 10}.validate()), InputError);
  EXPECT_THROW((SeedingConfig{5, 0.4, -1}.validate()), InputError);
  EXPECT_NO_THROW((SeedingConfig{5, 0.5, 10}.validate()));
}

TEST(BufferPoints, Cross) {
  const RoadGraph g = build_graph(fixtures::cross_lines());
  const auto pts = buffer_points(g, node_at(g, {0, 0}), SeedingConfig{});
  expect_points(pts, {{5, 0}, {-5, 0}, {0, 5}, {0, -5}});
  std::set<EdgeId> owners;
  for (const SourcePoint& s : pts) {
    owners.insert(s.owner_edge);
    EXPECT_EQ(s.kind, SeedKind::Buffer);
    EXPECT_EQ(s.origin_node, node_at(g, {0, 0}));
  }
  EXPECT_EQ(owners.size(), 4u);
}

TEST(BufferPoints, TAndDegreeTwo) {
  const RoadGraph t = build_graph({{1, Polyline{{0, 0}, {30, 0}}, {}},
                                   {2, Polyline{{-30, 0}, {0, 0}}, {}},
                                   {3, Polyline{{0, 0}, {0, 30}}, {}}});
  expect_points(buffer_points(t, node_at(t, {0, 0}), SeedingConfig{}), {{5, 0}, {-5, 0}, {0, 5}});

  const RoadGraph two = build_graph({{1, Polyline{{0, 0}, {30, 0}}, {}}, {2, Polyline{{-30, 0}, {0, 0}}, {}}});
  expect_points(buffer_points(two, node_at(two, {0, 0}), SeedingConfig{}), {{5, 0}, {-5, 0}});

  const RoadGraph dead = build_graph({{1, Polyline{{0, 0}, {30, 0}}, {}}});
  EXPECT_TRUE(buffer_points(dead, node_at(dead, {0, 0}), SeedingConfig{}).empty());
}

TEST(BufferPoints, WigglyEdgeUsesFirstExit) {
  // Leaves the 5 m circle at (5,0), comes back inside, leaves again.
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {8, 0}, {2, 1}, {2, 30}}, {}},
                                   {2, Polyline{{0, 0}, {-30, 0}}, {}}});
  const auto pts = buffer_points(g, node_at(g, {0, 0}), SeedingConfig{});
  const auto mine = std::find_if(pts.begin(), pts.end(), [](const SourcePoint& s) { return s.owner_edge == 1; });
  ASSERT_NE(mine, pts.end());
  EXPECT_NEAR(mine->position.x, 5, 1e-12);
  EXPECT_NEAR(mine->position.y, 0, 1e-12);
  EXPECT_NEAR(mine->arclength, 5, 1e-12);
}

TEST(BufferPoints, EdgeThatNeverLeavesTheCircle) {
  // Edge 1 zigzags inside the circle long enough that 0.4 * length > 5.
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {3, 0}, {0, 0.5}, {3, 1}, {0, 1.5}, {3, 2}, {0, 2.5}, {1, 3}}, {}},
                                   {2, Polyline{{0, 0}, {-30, 0}}, {}},
                                   {3, Polyline{{1, 3}, {1, 40}}, {}}});
  EXPECT_THROW(buffer_points(g, node_at(g, {0, 0}), SeedingConfig{}), SeedingError);
  const SeedingResult r = seed_all(g, SeedingConfig{});
  EXPECT_TRUE(std::any_of(r.warnings.begin(), r.warnings.end(), [](const Warning& w) { return w.kind == "buffer-miss"; }));
}

TEST(IntermediatePoints, Examples) {
  const SeedingConfig cfg;
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {35, 0}}, {}},
                                   {2, Polyline{{100, 0}, {112, 0}}, {}},
                                   {3, Polyline{{0, 100}, {100, 100}}, {}}});
  const std::vector<double> five(g.nodes().size(), 5.0);
  auto a = intermediate_points(g, 1, cfg, five);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[0].arclength, 15);
  EXPECT_DOUBLE_EQ(a[1].arclength, 25);
  EXPECT_DOUBLE_EQ(a[1].position.x, 25);

  const std::vector<double> small(g.nodes().size(), 4.8);
  EXPECT_TRUE(intermediate_points(g, 2, cfg, small).empty());

  auto c = intermediate_points(g, 3, cfg, five);
  ASSERT_EQ(c.size(), 8u);
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_DOUBLE_EQ(c[k].arclength, 15 + 10.0 * k);
    EXPECT_EQ(c[k].kind, SeedKind::Intermediate);
    EXPECT_EQ(c[k].owner_edge, 3);
  }
  EXPECT_THROW(intermediate_points(g, 1, cfg, std::vector<double>{5}), InputError);
}

TEST(SeedAll, IsolatedEdgeHasNoBufferSeeds) {
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {100, 0}}, {}}});
  const SeedingResult r = seed_all(g, SeedingConfig{});
  EXPECT_FALSE(r.seeds.empty());
  for (const SourcePoint& s : r.seeds) EXPECT_EQ(s.kind, SeedKind::Intermediate);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(SeedAll, CrossHasEightSeeds) {
  // All four arms drawn outward from the junction.
  const std::vector<LineFeature> lines = {{1, Polyline{{0, 0}, {20, 0}}, {}},
                                          {2, Polyline{{0, 0}, {0, 20}}, {}},
                                          {3, Polyline{{0, 0}, {-20, 0}}, {}},
                                          {4, Polyline{{0, 0}, {0, -20}}, {}}};
  const SeedingResult r = seed_all(build_graph(lines), SeedingConfig{});
  ASSERT_EQ(r.seeds.size(), 8u);
  std::map<EdgeId, std::vector<double>> per_edge;
  int buffers = 0;
  for (const SourcePoint& s : r.seeds) {
    buffers += s.kind == SeedKind::Buffer;
    per_edge[s.owner_edge].push_back(distance(s.position, {0, 0}));
  }
  EXPECT_EQ(buffers, 4);
  for (auto& [edge, d] : per_edge) {
    std::sort(d.begin(), d.end());
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[0], 5, 1e-12);
    EXPECT_NEAR(d[1], 15, 1e-12);
  }
  for (std::size_t i = 0; i < r.seeds.size(); ++i) EXPECT_EQ(r.seeds[i].id, static_cast<SeedId>(i));
}

TEST(SeedAll, InwardArmsMeasureFromTheirSource) {
  // Arms 3 and 4 run from a dead end into the hub, so their intermediate
  // seed sits 10 m along from the dead end, which is also 10 m from the hub.
  const SeedingResult r = seed_all(build_graph(fixtures::cross_lines()), SeedingConfig{});
  ASSERT_EQ(r.seeds.size(), 8u);
  for (const SourcePoint& s : r.seeds) {
    if (s.kind == SeedKind::Buffer) {
      EXPECT_NEAR(distance(s.position, {0, 0}), 5, 1e-12);
      continue;
    }
    const double hub = distance(s.position, {0, 0});
    EXPECT_NEAR(hub, s.owner_edge <= 2 ? 15 : 10, 1e-12) << "edge " << s.owner_edge;
  }
}

TEST(SeedAll, ParallelEdgesKeepTheirOwnSeeds) {
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {100, 0}}, {}}, {2, Polyline{{0, 8}, {100, 8}}, {}}});
  const SeedingResult r = seed_all(g, SeedingConfig{});
  std::map<EdgeId, int> count;
  for (const SourcePoint& s : r.seeds) {
    ++count[s.owner_edge];
    EXPECT_LT(distance_to_polyline(s.position, g.edge(s.owner_edge).geometry), 1e-6);
    const EdgeId other = s.owner_edge == 1 ? 2 : 1;
    EXPECT_NEAR(distance_to_polyline(s.position, g.edge(other).geometry), 8, 1e-9);
  }
  EXPECT_EQ(count[1], count[2]);
  EXPECT_GT(count[1], 0);
}

TEST(SeedAll, CoincidentSeedsMergeOntoLowerEdge) {
  // Two distinct edges with identical geometry between the same nodes.
  const RoadGraph g = build_graph({{5, Polyline{{0, 0}, {50, 0}}, {}},
                                   {3, Polyline{{0, 0}, {50, 0}}, {}},
                                   {9, Polyline{{0, 0}, {0, 50}}, {}}});
  const SeedingResult r = seed_all(g, SeedingConfig{});
  for (const SourcePoint& s : r.seeds) EXPECT_NE(s.owner_edge, 5);
  EXPECT_EQ(r.unseeded_edges, std::vector<EdgeId>{5});
  const auto kinds = [&](const std::string& k) {
    return std::count_if(r.warnings.begin(), r.warnings.end(), [&](const Warning& w) { return w.kind == k; });
  };
  EXPECT_GT(kinds("seed-merge"), 0);
  EXPECT_EQ(kinds("unseeded"), 1);
}

TEST(SeedAll, Invariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticSpec spec;
    spec.rows = 4;
    spec.cols = 5;
    spec.seed = seed;
    spec.block = 20;
    const RoadGraph g = build_graph(synthesize(spec).lines);
    const SeedingConfig cfg;
    const SeedingResult r = seed_all(g, cfg);
    std::map<NodeId, int> buffers;
    std::map<EdgeId, int> owned;
    for (const SourcePoint& s : r.seeds) {
      ++owned[s.owner_edge];
      EXPECT_LT(distance_to_polyline(s.position, g.edge(s.owner_edge).geometry), 1e-6);
      if (s.kind == SeedKind::Buffer) {
        ASSERT_TRUE(s.origin_node.has_value());
        ++buffers[*s.origin_node];
        EXPECT_NEAR(distance(s.position, g.node(*s.origin_node).position), node_radius(g, *s.origin_node, cfg), 1e-6);
      }
    }
    for (const RoadNode& n : g.nodes()) EXPECT_EQ(buffers[n.id], n.degree >= 2 ? n.degree : 0);
    for (const RoadEdge& e : g.edges()) {
      const double rs = node_radius(g, e.source, cfg);
      const double rt = node_radius(g, e.target, cfg);
      EXPECT_LE(rs + rt, e.length + 1e-12);
      if (e.length > rs + rt + cfg.spacing) EXPECT_GE(owned[e.id], 1);
    }
    EXPECT_TRUE(r.unseeded_edges.empty());
  }
}

TEST(SeedAll, AdaptiveRadiusKeepsCirclesApart) {
  // 8 m link between two T junctions.
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {8, 0}}, {}},
                                   {2, Polyline{{0, -30}, {0, 0}}, {}},
                                   {3, Polyline{{0, 0}, {0, 30}}, {}},
                                   {4, Polyline{{8, -30}, {8, 0}}, {}},
                                   {5, Polyline{{8, 0}, {8, 30}}, {}}});
  const double ra = node_radius(g, node_at(g, {0, 0}), SeedingConfig{});
  const double rb = node_radius(g, node_at(g, {8, 0}), SeedingConfig{});
  EXPECT_DOUBLE_EQ(ra, 3.2);
  EXPECT_DOUBLE_EQ(rb, 3.2);
  EXPECT_LT(ra + rb, 8.0);
}
