#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace roadsect;

namespace {

int degree_at(const RoadGraph& g, Point2 p, double tol = 1e-6) {
  for (const RoadNode& n : g.nodes())
    if (distance(n.position, p) <= tol) return n.degree;
  return -1;
}

// Random network: a jittered lattice of endpoints plus random straight links.
std::vector<LineFeature> random_lines(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, 6);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  std::vector<LineFeature> lines;
  for (int i = 0; i < count; ++i) {
    Point2 a{10.0 * cell(rng) + noise(rng), 10.0 * cell(rng) + noise(rng)};
    Point2 b{10.0 * cell(rng) + noise(rng), 10.0 * cell(rng) + noise(rng)};
    if (distance(a, b) < 5) continue;
    lines.push_back({i + 1, Polyline{a, b}, {}});
  }
  return lines;
}

} // namespace

TEST(BuildGraph, NoisyCrossSnapsToOneJunction) {
  std::vector<LineFeature> lines = {{1, Polyline{{0.01, 0}, {20, 0}}, {}},
                                    {2, Polyline{{0, -0.01}, {0, 20}}, {}},
                                    {3, Polyline{{-20, 0}, {-0.01, 0.01}}, {}},
                                    {4, Polyline{{0, -20}, {0.005, 0.0}}, {}}};
  const RoadGraph g = build_graph(lines, 0.05);
  ASSERT_EQ(g.nodes().size(), 5u);
  int centre = 0, dead = 0;
  for (const RoadNode& n : g.nodes()) {
    centre += n.degree == 4;
    dead += n.degree == 1;
  }
  EXPECT_EQ(centre, 1);
  EXPECT_EQ(dead, 4);
  // Every edge endpoint is moved onto its node.
  for (const RoadEdge& e : g.edges()) {
    EXPECT_EQ(e.geometry.front(), g.node(e.source).position);
    EXPECT_EQ(e.geometry.back(), g.node(e.target).position);
  }
}

TEST(BuildGraph, CollinearPairKeepsDegreeTwoNode) {
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {10, 0}}, {}}, {2, Polyline{{10, 0}, {25, 0}}, {}}});
  EXPECT_EQ(g.nodes().size(), 3u);
  EXPECT_EQ(degree_at(g, {10, 0}), 2);
}

TEST(BuildGraph, IsolatedSegment) {
  const RoadGraph g = build_graph({{7, Polyline{{0, 0}, {10, 0}}, {{"name", "a"}}}});
  ASSERT_EQ(g.nodes().size(), 2u);
  for (const RoadNode& n : g.nodes()) EXPECT_EQ(n.degree, 1);
  EXPECT_EQ(g.edge(7).attributes["name"], "a");
}

TEST(BuildGraph, ZeroLengthAfterSnapNamesTheEdge) {
  try {
    build_graph({{1, Polyline{{0, 0}, {10, 0}}, {}}, {42, Polyline{{0, 0}, {0.03, 0}}, {}}}, 0.05);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos) << e.what();
  }
}

TEST(BuildGraph, DuplicateIdsAreRejected) {
  EXPECT_THROW(build_graph({{1, Polyline{{0, 0}, {10, 0}}, {}}, {1, Polyline{{0, 5}, {10, 5}}, {}}}), InputError);
}

TEST(BuildGraph, ChainedClustersCollapse) {
  // 0.04 apart pairwise, 0.08 end to end: transitively one node.
  const RoadGraph g = build_graph({{1, Polyline{{0, 0}, {10, 0}}, {}},
                                   {2, Polyline{{0.04, 0}, {0, 10}}, {}},
                                   {3, Polyline{{0.08, 0}, {-10, 0}}, {}}});
  EXPECT_EQ(g.nodes().size(), 4u);
}

TEST(BuildGraph, Invariants) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto lines = random_lines(seed, 40);
    const RoadGraph g = build_graph(lines);
    int degrees = 0;
    for (const RoadNode& n : g.nodes()) {
      EXPECT_GE(n.degree, 1);
      degrees += n.degree;
    }
    EXPECT_EQ(degrees, 2 * static_cast<int>(g.edges().size())) << "handshake, seed " << seed;

    for (std::size_t i = 0; i < g.nodes().size(); ++i)
      for (std::size_t j = i + 1; j < g.nodes().size(); ++j)
        EXPECT_GT(distance(g.nodes()[i].position, g.nodes()[j].position), g.snap_tolerance());

    const RoadGraph again = build_graph(edges_as_lines(g), g.snap_tolerance());
    ASSERT_EQ(again.nodes().size(), g.nodes().size());
    for (std::size_t i = 0; i < g.nodes().size(); ++i) EXPECT_EQ(again.nodes()[i].position, g.nodes()[i].position);
    for (std::size_t i = 0; i < g.edges().size(); ++i) EXPECT_EQ(again.edges()[i].geometry, g.edges()[i].geometry);

    auto shuffled = lines;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(seed));
    const RoadGraph perm = build_graph(shuffled);
    ASSERT_EQ(perm.nodes().size(), g.nodes().size());
    for (std::size_t i = 0; i < g.nodes().size(); ++i) EXPECT_EQ(perm.nodes()[i].position, g.nodes()[i].position);
  }
}

TEST(IncidentEdges, Examples) {
  const RoadGraph cross = build_graph(fixtures::cross_lines());
  NodeId centre = -1;
  NodeId dead = -1;
  for (const RoadNode& n : cross.nodes()) (n.degree == 4 ? centre : dead) = n.id;
  EXPECT_EQ(incident_edges(cross, centre).size(), 4u);
  EXPECT_EQ(incident_edges(cross, dead).size(), 1u);

  const RoadGraph t = build_graph({{1, Polyline{{0, 0}, {30, 0}}, {}},
                                   {2, Polyline{{0, 0}, {-40, 0}}, {}},
                                   {3, Polyline{{0, 0}, {0, 50}}, {}}});
  NodeId hub = -1;
  for (const RoadNode& n : t.nodes())
    if (n.degree == 3) hub = n.id;
  const auto inc = incident_edges(t, hub);
  ASSERT_EQ(inc.size(), 3u);
  double shortest = 1e9;
  for (const Incidence& i : inc) shortest = std::min(shortest, i.length);
  EXPECT_DOUBLE_EQ(shortest, 30.0);
  EXPECT_THROW(incident_edges(t, 99), InputError);
}

TEST(Crossings, SharedNodeIsNotACrossing) {
  EXPECT_TRUE(detect_crossings(build_graph(fixtures::cross_lines())).empty());
}

TEST(Crossings, MidSpanCrossingReportedOnce) {
  const RoadGraph g = build_graph({{1, Polyline{{-10, 0}, {10, 0}}, {}}, {2, Polyline{{0, -10}, {0, 10}}, {}}});
  const auto c = detect_crossings(g);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].first, 1);
  EXPECT_EQ(c[0].second, 2);
  EXPECT_NEAR(c[0].position.x, 0, 1e-12);
  EXPECT_NEAR(c[0].position.y, 0, 1e-12);
}

TEST(Crossings, AgreeWithBruteForce) {
  SyntheticSpec grid;
  grid.rows = 4;
  grid.cols = 5;
  const RoadGraph g = build_graph(synthesize(grid).lines);
  EXPECT_EQ(fixtures::brute_crossing_count(g), 0u);
  EXPECT_TRUE(detect_crossings(g).empty());

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RoadGraph r = build_graph(random_lines(seed + 100, 30));
    EXPECT_EQ(detect_crossings(r).size(), fixtures::brute_crossing_count(r)) << "seed " << seed;
  }
}
