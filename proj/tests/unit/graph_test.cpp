#include <gtest/gtest.h>

#include "grig/graph.hpp"
#include "grig/oracle.hpp"
#include "grig/serialize.hpp"
#include "test_support.hpp"

namespace grig {
namespace {

GranularRect rect(std::uint32_t id, int cx, int cy, int rx, int ry) {
  GranularRect r;
  r.id = id;
  r.cx = cx;
  r.cy = cy;
  r.rx = rx;
  r.ry = ry;
  return r;
}

TEST(RectOverlap, SharedCornerPixelCounts) {
  EXPECT_TRUE(rect_overlap(rect(0, 1, 1, 1, 1), rect(1, 3, 3, 1, 1)));
}

TEST(RectOverlap, AdjacentButDisjoint) {
  EXPECT_FALSE(rect_overlap(rect(0, 1, 1, 1, 1), rect(1, 4, 1, 1, 1)));
  EXPECT_FALSE(rect_overlap(rect(0, 1, 1, 1, 1), rect(1, 1, 4, 1, 1)));
}

TEST(RectOverlap, ContainmentAndSymmetry) {
  const auto big = rect(0, 5, 5, 4, 4);
  const auto small = rect(1, 5, 6, 0, 1);
  EXPECT_TRUE(rect_overlap(big, small));
  EXPECT_TRUE(rect_overlap(small, big));
  EXPECT_TRUE(rect_overlap(small, small));
}

TEST(BuildEdges, Empty) { EXPECT_TRUE(build_edges({}).empty()); }

TEST(BuildEdges, ThreeRectsOneOverlap) {
  const std::vector<GranularRect> rects = {rect(0, 1, 1, 1, 1), rect(1, 3, 3, 1, 1),
                                           rect(2, 9, 9, 0, 0)};
  EXPECT_EQ(build_edges(rects), (std::vector<Edge>{{0, 1}}));
}

TEST(BuildEdges, IdenticalRectsAllConnected) {
  const std::vector<GranularRect> rects(4, rect(0, 2, 2, 1, 1));
  EXPECT_EQ(build_edges(rects), (std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
}

TEST(BuildEdges, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 0, 120));
    const int w = static_cast<int>(uniform_int(rng, 1, 50));
    const int h = static_cast<int>(uniform_int(rng, 1, 50));
    const auto rects = testing::random_rects(rng, n, w, h, static_cast<int>(uniform_int(rng, 0, 12)));
    ASSERT_EQ(build_edges(rects), oracle::brute_edges(rects)) << "trial " << trial;
  }
}

TEST(NodeFeatures, SinglePixelAtOrigin) {
  auto r = rect(0, 0, 0, 0, 0);
  const auto f = node_feature_vector(r, 0, 28, 28);
  const NodeFeatures expected = {0, 0, 1.0 / 28, 1.0 / 28, 0, 0, 0, 0, 1, 0};
  for (std::size_t i = 0; i < kFeatureDim; ++i) EXPECT_DOUBLE_EQ(f[i], expected[i]) << i;
}

TEST(NodeFeatures, BrightConstantRect) {
  auto r = rect(0, 13, 13, 13, 13);
  r.v_mean = r.v_max = r.v_min = 255;
  r.variance = 0;
  const auto f = node_feature_vector(r, 3, 28, 28);
  EXPECT_DOUBLE_EQ(f[0], 13.0 / 28);
  EXPECT_DOUBLE_EQ(f[2], 27.0 / 28);
  EXPECT_DOUBLE_EQ(f[4], 1.0);
  EXPECT_DOUBLE_EQ(f[5], 0.0);
  EXPECT_DOUBLE_EQ(f[6], 1.0);
  EXPECT_DOUBLE_EQ(f[7], 1.0);
  EXPECT_DOUBLE_EQ(f[9], 3.0 / 32);
}

TEST(NodeFeatures, DegreeClamps) {
  const auto r = rect(0, 0, 0, 0, 0);
  EXPECT_DOUBLE_EQ(node_feature_vector(r, 32, 4, 4)[9], 1.0);
  EXPECT_DOUBLE_EQ(node_feature_vector(r, 64, 4, 4)[9], 1.0);
  EXPECT_DOUBLE_EQ(node_feature_vector(r, 16, 4, 4)[9], 0.5);
}

TEST(NodeFeatures, VarianceScale) {
  auto r = rect(0, 0, 0, 0, 0);
  r.variance = 255.0 * 255.0 / 4.0;  // largest possible for 8-bit data
  EXPECT_DOUBLE_EQ(node_feature_vector(r, 0, 1, 1)[5], 0.25);
}

TEST(BuildGraph, SinglePixelImage) {
  const auto g = build_graph(testing::constant_image(1, 1, 5), SearchParams{});
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_TRUE(g.edges.empty());
  ASSERT_TRUE(g.features.has_value());
  EXPECT_EQ(g.features->size(), 1u);
}

TEST(BuildGraph, ConstantImageEdgesMatchOracle) {
  SearchParams p;
  p.growth = 1.0;
  p.p_thr = 0.9;
  p.var_thr = 1e6;
  const auto img = testing::constant_image(8, 8, 200);
  const auto g = build_graph(img, p);
  EXPECT_TRUE(oracle::verify_partition(img, p, g.nodes).ok());
  EXPECT_EQ(g.edges, oracle::brute_edges(g.nodes));
  EXPECT_NO_THROW(check_graph(g));
}

TEST(BuildGraph, FeatureBoundsAndDegreesOnDigits) {
  const auto records = testing::load_mnist_fixture();
  for (std::size_t i = 0; i < 100; ++i) {
    const auto g = build_graph(records[i].image, SearchParams{});
    ASSERT_NO_THROW(check_graph(g));
    ASSERT_TRUE(g.features.has_value());
    ASSERT_EQ(g.features->size(), g.node_count());
    const auto deg = g.degrees();
    for (std::size_t n = 0; n < g.node_count(); ++n) {
      const auto& f = (*g.features)[n];
      for (double v : f) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_DOUBLE_EQ(f[9], std::min<double>(deg[n], 32) / 32.0);
    }
    EXPECT_EQ(g.edges, oracle::brute_edges(g.nodes));
  }
}

TEST(BuildGraph, DeterministicJson) {
  const auto records = testing::load_mnist_fixture();
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(graph_to_json(build_graph(records[i].image, SearchParams{})),
              graph_to_json(build_graph(records[i].image, SearchParams{})));
  }
}

TEST(CheckGraph, ReportsOffenders) {
  ImageGraph g;
  g.width = g.height = 10;
  g.nodes = {rect(0, 1, 1, 1, 1), rect(1, 2, 2, 1, 1)};
  g.edges = {{0, 1}};
  EXPECT_NO_THROW(check_graph(g));

  auto bad = g;
  bad.edges = {{0, 5}};
  try {
    check_graph(bad);
    FAIL() << "expected InvariantError";
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find('5'), std::string::npos);
  }

  bad = g;
  bad.edges = {{1, 1}};
  EXPECT_THROW(check_graph(bad), InvariantError);
  bad.edges = {{1, 0}};
  EXPECT_THROW(check_graph(bad), InvariantError);
  bad.edges = {{0, 1}, {0, 1}};
  EXPECT_THROW(check_graph(bad), InvariantError);

  bad = g;
  bad.nodes[1].id = 7;
  EXPECT_THROW(check_graph(bad), InvariantError);
  bad = g;
  bad.nodes[1].cx = 9;
  EXPECT_THROW(check_graph(bad), InvariantError);
}

TEST(NormalizeEdges, SortsOrientsDeduplicates) {
  std::vector<Edge> e = {{3, 1}, {0, 2}, {1, 3}, {2, 2}, {0, 1}};
  normalize_edges(e);
  EXPECT_EQ(e, (std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}}));
}

}  // namespace
}  // namespace grig
