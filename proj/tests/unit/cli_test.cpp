#include <gtest/gtest.h>

#include "grig/cli.hpp"
#include "grig/serialize.hpp"
#include "test_support.hpp"

namespace grig {
namespace {

using testing::TempDir;

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "grig");
  return cli::run(args);
}

std::string convert_mnist(const TempDir& dir, const std::string& name, const std::string& jobs,
                          const std::string& limit = "40") {
  const auto out = (dir / name).string();
  EXPECT_EQ(run({"convert", "--format", "mnist", "--input", testing::mnist_images_path().string(),
                 "--out", out, "--jobs", jobs, "--limit", limit}),
            cli::kExitOk);
  return out;
}

ImageGraph load_graph(const std::string& path) {
  const auto bytes = read_file(path);
  return graph_from_json(std::string(bytes.begin(), bytes.end()));
}

std::string write_digit_pgm(const TempDir& dir) {
  const auto path = (dir / "digit.pgm").string();
  write_file(path, encode_pgm(testing::load_mnist_fixture()[7].image));
  return path;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}), cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), cli::kExitUsage);
  EXPECT_EQ(run({"convert", "--format", "mnist"}), cli::kExitUsage);
  EXPECT_EQ(run({"stats", "--in", "x.grig", "--bogus"}), cli::kExitUsage);
  EXPECT_EQ(run({"--help"}), cli::kExitOk);
}

TEST(Cli, InvalidParametersAreUsageErrors) {
  TempDir dir("cli-params");
  const auto pgm = write_digit_pgm(dir);
  EXPECT_EQ(run({"graph", "--input", pgm, "--out", (dir / "g.json").string(), "--purity", "1.5"}),
            cli::kExitUsage);
  EXPECT_EQ(run({"graph", "--input", pgm, "--out", (dir / "g.json").string(), "--schedule", "weekly"}),
            cli::kExitUsage);
}

TEST(Cli, MissingFilesAreIoErrors) {
  TempDir dir("cli-io");
  EXPECT_EQ(run({"stats", "--in", (dir / "absent.grig").string()}), cli::kExitIo);
  EXPECT_EQ(run({"graph", "--input", (dir / "absent.png").string(), "--out",
                 (dir / "g.json").string()}),
            cli::kExitIo);
}

TEST(Cli, CorruptFilesAreFormatErrors) {
  TempDir dir("cli-format");
  const auto grig = convert_mnist(dir, "a.grig", "1", "5");
  auto bytes = read_file(grig);
  bytes[bytes.size() / 2] ^= 0xFF;
  write_file(grig, bytes);
  EXPECT_EQ(run({"stats", "--in", grig}), cli::kExitFormat);
  write_file(dir / "bad.json", std::vector<std::uint8_t>{'{'});
  EXPECT_EQ(run({"transform", "--in", (dir / "bad.json").string(), "--flip-h", "--out",
                 (dir / "o.json").string()}),
            cli::kExitFormat);
}

TEST(Cli, ConvertIsDeterministicAcrossJobs) {
  TempDir dir("cli-jobs");
  const auto a = convert_mnist(dir, "a.grig", "1");
  const auto b = convert_mnist(dir, "b.grig", "8");
  const auto c = convert_mnist(dir, "c.grig", "8");
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_EQ(read_file(b), read_file(c));
  EXPECT_TRUE(std::filesystem::exists(sidecar_path(a)));
  EXPECT_EQ(load_dataset(a).graphs.size(), 40u);
}

TEST(Cli, VerifyPassesOnFreshOutputAndFailsOnTampering) {
  TempDir dir("cli-verify");
  const auto grig = convert_mnist(dir, "v.grig", "2");
  const std::vector<std::string> verify = {"verify", "--in", grig, "--format", "mnist", "--input",
                                           testing::mnist_images_path().string()};
  EXPECT_EQ(run(verify), cli::kExitOk);

  // Valid container whose graph 3 no longer matches its image.
  auto ds = load_dataset(grig);
  ds.graphs[3].features[0] += 0.25f;
  save_dataset(ds, grig);
  EXPECT_EQ(run(verify), cli::kExitVerification);

  // Converted with different parameters than the sidecar claims.
  auto meta = ds.metadata;
  ds = load_dataset(convert_mnist(dir, "w.grig", "1"));
  meta.params.p_thr = 0.7;
  ds.metadata = meta;
  save_dataset(ds, grig);
  EXPECT_EQ(run(verify), cli::kExitVerification);
}

TEST(Cli, GraphTransformSubgraphViz) {
  TempDir dir("cli-graph");
  const auto pgm = write_digit_pgm(dir);
  const auto g = (dir / "g.json").string();
  ASSERT_EQ(run({"graph", "--input", pgm, "--out", g}), cli::kExitOk);

  const auto h1 = (dir / "h1.json").string();
  const auto h2 = (dir / "h2.json").string();
  ASSERT_EQ(run({"transform", "--in", g, "--flip-h", "--out", h1}), cli::kExitOk);
  ASSERT_EQ(run({"transform", "--in", h1, "--flip-h", "--out", h2}), cli::kExitOk);
  EXPECT_EQ(read_file(g), read_file(h2));
  EXPECT_NE(read_file(g), read_file(h1));

  const auto r = (dir / "r.json").string();
  ASSERT_EQ(run({"transform", "--in", g, "--rotate", "90", "--center", "13.5,13.5", "--out", r}),
            cli::kExitOk);
  const auto u1 = (dir / "u1.json").string();
  const auto u2 = (dir / "u2.json").string();
  ASSERT_EQ(run({"transform", "--in", g, "--upsample", "5", "--seed", "3", "--out", u1}), cli::kExitOk);
  ASSERT_EQ(run({"transform", "--in", g, "--upsample", "5", "--seed", "3", "--out", u2}), cli::kExitOk);
  EXPECT_EQ(read_file(u1), read_file(u2));
  ASSERT_EQ(run({"transform", "--in", g, "--downsample", "4", "--out", u2}), cli::kExitOk);
  EXPECT_EQ(load_graph(u2).node_count(), load_graph(g).node_count() - 4);

  EXPECT_EQ(run({"transform", "--in", g, "--flip-h", "--flip-v", "--out", h1}), cli::kExitUsage);
  EXPECT_EQ(run({"transform", "--in", g, "--out", h1}), cli::kExitUsage);

  const auto s = (dir / "s.json").string();
  ASSERT_EQ(run({"subgraph", "--in", g, "--rect", "4,4,20,20", "--out", s}), cli::kExitOk);
  EXPECT_EQ(load_graph(s).width, 17);
  EXPECT_EQ(run({"subgraph", "--in", g, "--rect", "4,4,40,20", "--out", s}), cli::kExitUsage);

  write_file(dir / "att.csv", std::vector<std::uint8_t>{'0', ',', '1', ',', '2', '\n'});
  const auto svg = (dir / "g.svg").string();
  ASSERT_EQ(run({"viz", "--in", g, "--image", pgm, "--attention", (dir / "att.csv").string(),
                 "--out", svg}),
            cli::kExitOk);
  const auto svg_bytes = read_file(svg);
  EXPECT_EQ(std::string(svg_bytes.begin(), svg_bytes.begin() + 4), "<svg");
}

TEST(Cli, StatsAndBench) {
  TempDir dir("cli-stats");
  const auto grig = convert_mnist(dir, "s.grig", "1", "10");
  ::testing::internal::CaptureStdout();
  const int code = run({"stats", "--in", grig});
  const auto out = ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(code, cli::kExitOk);
  EXPECT_NE(out.find("graphs  10"), std::string::npos) << out;
  EXPECT_NE(out.find("regions per pixel"), std::string::npos);

  ::testing::internal::CaptureStdout();
  EXPECT_EQ(run({"bench", "--sizes", "16,32", "--trials", "1"}), cli::kExitOk);
  EXPECT_NE(::testing::internal::GetCapturedStdout().find("fitted exponent"), std::string::npos);
  EXPECT_EQ(run({"bench", "--sizes", "16,x"}), cli::kExitUsage);
}

}  // namespace
}  // namespace grig
