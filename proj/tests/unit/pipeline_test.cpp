#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "grig/bench.hpp"
#include "grig/pipeline.hpp"
#include "grig/stats.hpp"
#include "grig/viz.hpp"
#include "test_support.hpp"

namespace grig {
namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

TEST(SourceFormat, Parse) {
  EXPECT_EQ(parse_source_format("mnist"), SourceFormat::kMnist);
  EXPECT_EQ(parse_source_format("cifar10"), SourceFormat::kCifar10);
  EXPECT_EQ(parse_source_format("image-dir"), SourceFormat::kImageDir);
  EXPECT_THROW(parse_source_format("tiff"), InvalidArgumentError);
}

TEST(OpenSource, MnistLabelsDerivedFromImagePath) {
  const auto src = open_source({SourceFormat::kMnist, testing::mnist_images_path(), {}, 25});
  EXPECT_EQ(src.count, 25u);
  EXPECT_EQ(src.class_count, 10);
  const auto expected = testing::load_mnist_fixture();
  EXPECT_EQ(src.load(24).image, expected[24].image);
  EXPECT_EQ(src.load(24).label, expected[24].label);
}

TEST(OpenSource, CifarDirectoryOfBatches) {
  testing::TempDir dir("cifar");
  std::vector<std::uint8_t> batch(3 * 3073, 0);
  for (int r = 0; r < 3; ++r) batch[static_cast<std::size_t>(r) * 3073] = static_cast<std::uint8_t>(r + 4);
  write_file(dir / "data_batch_1.bin", batch);
  write_file(dir / "data_batch_2.bin", std::span(batch).first(3073));
  const auto src = open_source({SourceFormat::kCifar10, dir.path(), {}, 0});
  ASSERT_EQ(src.count, 4u);
  EXPECT_EQ(src.class_count, 10);
  EXPECT_EQ(src.load(2).label, 6);
  EXPECT_EQ(src.load(3).label, 4);
  EXPECT_EQ(src.load(3).image.width(), 32);
  testing::TempDir empty("cifar-empty");
  EXPECT_THROW(open_source({SourceFormat::kCifar10, empty.path(), {}, 0}), IoError);
}

TEST(OpenSource, ImageDirectory) {
  testing::TempDir dir("imgdir");
  for (const char* cls : {"cat", "dog"}) {
    std::filesystem::create_directories(dir / cls);
    write_file(dir / cls / "a.pgm", encode_pgm(GrayImage(4, 3, std::uint8_t{9})));
  }
  const auto src = open_source({SourceFormat::kImageDir, dir.path(), {}, 0});
  EXPECT_EQ(src.count, 2u);
  EXPECT_EQ(src.class_names, (std::vector<std::string>{"cat", "dog"}));
  EXPECT_EQ(src.load(1).label, 1);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndPropagatesErrors) {
  for (unsigned jobs : {0u, 1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(50, jobs,
                              [](std::size_t i) {
                                if (i == 17) throw IoError("boom");
                              }),
                 IoError);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ConvertSource, OrderIndependentOfWorkerCount) {
  const auto src = open_source({SourceFormat::kMnist, testing::mnist_images_path(), {}, 60});
  const auto one = convert_source(src, SearchParams{}, 1);
  const auto many = convert_source(src, SearchParams{}, 6);
  EXPECT_EQ(write_dataset(one), write_dataset(many));
  EXPECT_EQ(one.metadata.image_width, 28);
  EXPECT_EQ(one.metadata.class_names.size(), 10u);
  ASSERT_EQ(one.graphs.size(), 60u);
  const auto records = testing::load_mnist_fixture();
  EXPECT_EQ(one.graphs[59], to_labeled_graph(build_graph(records[59].image, SearchParams{}),
                                             static_cast<std::uint16_t>(records[59].label)));
}

TEST(Stats, HandComputedDataset) {
  GraphDataset ds;
  ds.class_count = 3;
  ds.metadata.image_width = 10;
  ds.metadata.image_height = 10;
  // Two graphs of 1 and 3 nodes; width/height features give the area.
  LabeledGraph a;
  a.label = 0;
  a.node_count = 1;
  a.features.assign(10, 0.0f);
  a.features[2] = 1.0f;  // full width
  a.features[3] = 0.5f;  // half height: 50 pixels
  LabeledGraph b;
  b.label = 2;
  b.node_count = 3;
  b.features.assign(30, 0.0f);
  for (int n = 0; n < 3; ++n) {
    b.features[static_cast<std::size_t>(n * 10 + 2)] = 0.1f;
    b.features[static_cast<std::size_t>(n * 10 + 3)] = 0.1f;  // 1 pixel each
  }
  b.edges = {{0, 1}, {1, 2}};
  ds.graphs = {a, b};
  const auto s = dataset_stats(ds);
  EXPECT_EQ(s.graph_count, 2u);
  EXPECT_DOUBLE_EQ(s.nodes.min, 1.0);
  EXPECT_DOUBLE_EQ(s.nodes.max, 3.0);
  EXPECT_DOUBLE_EQ(s.nodes.median, 2.0);
  EXPECT_DOUBLE_EQ(s.edges.mean, 1.0);
  EXPECT_EQ(s.label_histogram, (std::vector<std::size_t>{1, 0, 1}));
  EXPECT_NEAR(s.regions_per_pixel, (0.5 + 0.03) / 2.0, 1e-6);
  EXPECT_NEAR(s.pixels_per_region, (50.0 + 3.0) / 4.0, 1e-4);
}

TEST(Summarize, EvenAndOddCounts) {
  const auto odd = summarize({3, 1, 2});
  EXPECT_DOUBLE_EQ(odd.median, 2.0);
  const auto even = summarize({4, 1, 2, 3});
  EXPECT_DOUBLE_EQ(even.median, 2.5);
  EXPECT_DOUBLE_EQ(even.mean, 2.5);
  const auto none = summarize({});
  EXPECT_DOUBLE_EQ(none.max, 0.0);
}

TEST(Bench, FitSlopeRecoversPowerLaw) {
  std::vector<double> x, y;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    x.push_back(std::log(n));
    y.push_back(std::log(3.0 * std::pow(n, 1.1)));
  }
  EXPECT_NEAR(bench::fit_slope(x, y), 1.1, 1e-12);
}

TEST(Bench, SyntheticImageIsSmoothAndDeterministic) {
  const auto a = bench::synthetic_gradient_image(64);
  EXPECT_EQ(a, bench::synthetic_gradient_image(64));
  int max_step = 0;
  for (int y = 0; y < 64; ++y)
    for (int x = 1; x < 64; ++x) max_step = std::max(max_step, std::abs(a.at(x, y) - a.at(x - 1, y)));
  EXPECT_LE(max_step, 10);
  const auto r = bench::measure_scaling({16, 32}, 2, SearchParams{});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[1].pixels, 1024u);
  EXPECT_EQ(r.rows[0].seconds.size(), 2u);
}

TEST(Viz, AttentionCsv) {
  const auto rows = viz::parse_attention_csv("graph_index,node_id,score\n0,1,0.5\n2,0,1e-3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].graph_index, 2u);
  EXPECT_DOUBLE_EQ(rows[1].score, 1e-3);
  EXPECT_EQ(viz::parse_attention_csv("0,0,1\n").size(), 1u);
  EXPECT_THROW(viz::parse_attention_csv("0,0\n"), FormatError);
  EXPECT_THROW(viz::parse_attention_csv("0,x,1\n"), FormatError);
}

TEST(Viz, SvgHasOneElementPerNodeAndEdge) {
  const auto img = testing::load_mnist_fixture()[0].image;
  const auto g = build_graph(img, SearchParams{});
  const auto svg = viz::render_svg(g);
  EXPECT_EQ(count_of(svg, "<rect data-id="), g.node_count());
  EXPECT_EQ(count_of(svg, "<line "), g.edges.size());
  EXPECT_EQ(count_of(svg, "<circle "), g.node_count());
  EXPECT_EQ(svg, viz::render_svg(g));

  viz::SvgOptions opts;
  opts.image = &img;
  opts.attention = {{0, 3, 2.0}, {1, 4, 9.0}};
  const auto with_attention = viz::render_svg(g, opts);
  EXPECT_EQ(count_of(with_attention, "fill-opacity="), 1u);
  EXPECT_NE(with_attention.find("<g id=\"image\""), std::string::npos);
}

}  // namespace
}  // namespace grig
