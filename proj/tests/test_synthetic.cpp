#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace roadsect;

namespace {

double reference_total(const SyntheticNetwork& net) {
  double s = 0.0;
  for (const ReferenceArea& r : net.reference) s += r.area;
  return s;
}

} // namespace

TEST(Synthesize, CrossMatchesPlusFixture) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::Cross;
  spec.block = 20;
  spec.width = 10;
  const SyntheticNetwork net = synthesize(spec);
  ASSERT_EQ(net.reference.size(), 4u);
  for (const ReferenceArea& r : net.reference) EXPECT_DOUBLE_EQ(r.area, 175.0);
  const Footprint fp = dissolve(net.surface);
  EXPECT_NEAR(area(boolean(fp.geometry, fixtures::plus_footprint(), BooleanOp::Difference)), 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(area(fp.geometry), 700.0);
}

TEST(Synthesize, TwoByTwoGridMatchesHandBookkeeping) {
  SyntheticSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.block = 50;
  spec.width = 6;
  spec.origin = {300, 700};
  const SyntheticNetwork net = synthesize(spec);
  ASSERT_EQ(net.lines.size(), 12u);
  const auto expected = fixtures::grid2x2_reference_by_midpoint();
  std::map<EdgeId, double> ref;
  for (const ReferenceArea& r : net.reference) ref[r.edge] = r.area;
  for (const LineFeature& l : net.lines) {
    const Point2 mid = point_at(l.geometry, length(l.geometry) / 2) - spec.origin;
    const auto it = expected.find({mid.x, mid.y});
    ASSERT_NE(it, expected.end()) << mid.x << "," << mid.y;
    EXPECT_DOUBLE_EQ(ref.at(l.id), it->second) << "edge at " << mid.x << "," << mid.y;
  }
  EXPECT_DOUBLE_EQ(reference_total(net), 3492.0);
}

TEST(Synthesize, ParallelSlabSplitsAtTheMidline) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::Parallel;
  spec.block = 100;
  spec.gap = 8;
  spec.width = 20;
  const SyntheticNetwork net = synthesize(spec);
  ASSERT_EQ(net.reference.size(), 2u);
  EXPECT_DOUBLE_EQ(net.reference[0].area, 1000.0);
  EXPECT_DOUBLE_EQ(net.reference[1].area, 1000.0);
  EXPECT_DOUBLE_EQ(area(dissolve(net.surface).geometry), 2000.0);
  EXPECT_DOUBLE_EQ(length(net.lines[0].geometry), 100.0);
  EXPECT_DOUBLE_EQ(net.lines[1].geometry.front().y - net.lines[0].geometry.front().y, 8.0);
}

TEST(Synthesize, ReferenceSumsToFootprint) {
  std::vector<SyntheticSpec> specs;
  for (SyntheticKind k : {SyntheticKind::Grid, SyntheticKind::Cross, SyntheticKind::T, SyntheticKind::Y,
                          SyntheticKind::Star, SyntheticKind::CloseJunctions}) {
    SyntheticSpec s;
    s.kind = k;
    s.rows = 3;
    s.cols = 4;
    specs.push_back(s);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticSpec s;
    s.rows = 4;
    s.cols = 3;
    s.seed = seed;
    specs.push_back(s);
  }
  for (int arms = 3; arms <= 8; ++arms) {
    SyntheticSpec s;
    s.kind = SyntheticKind::Star;
    s.arms = arms;
    specs.push_back(s);
  }
  for (const SyntheticSpec& s : specs) {
    const SyntheticNetwork net = synthesize(s);
    const double fp = area(dissolve(net.surface).geometry);
    EXPECT_NEAR(reference_total(net), fp, 1e-9 * fp) << to_string(s.kind);
    EXPECT_EQ(net.reference.size(), net.lines.size());
  }
}

TEST(Synthesize, Errors) {
  SyntheticSpec s;
  s.width = 0;
  EXPECT_THROW(synthesize(s), InputError);
  s.width = 60;
  EXPECT_THROW(synthesize(s), InputError);
  SyntheticSpec star;
  star.kind = SyntheticKind::Star;
  star.arms = 2;
  EXPECT_THROW(synthesize(star), InputError);
  SyntheticSpec par;
  par.kind = SyntheticKind::Parallel;
  par.gap = 10;
  par.width = 6;
  EXPECT_THROW(synthesize(par), InputError);
  EXPECT_THROW(parse_synthetic_kind("roundabout"), InputError);
  EXPECT_EQ(parse_synthetic_kind("close-junctions"), SyntheticKind::CloseJunctions);
}
