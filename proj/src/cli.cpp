#include "grig/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI/CLI.hpp>
#include "grig/bench.hpp"
#include "grig/imaging.hpp"
#include "grig/ops.hpp"
#include "grig/oracle.hpp"
#include "grig/pipeline.hpp"
#include "grig/serialize.hpp"
#include "grig/stats.hpp"
#include "grig/viz.hpp"

namespace grig::cli {
namespace {

// Signals a failed verification; carries the exit code through the dispatcher.
struct VerificationFailed {};

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

unsigned default_jobs() {
  if (const char* env = std::getenv("GRIG_JOBS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    throw InvalidArgumentError(std::string("GRIG_JOBS must be an integer in [1, 1024], got \"") +
                               env + "\"");
  }
  return 1;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw InvalidArgumentError(std::string(flag) + ": cannot parse \"" + item + "\"");
    }
    out.push_back(v);
  }
  if (expected != 0 && out.size() != expected) {
    throw InvalidArgumentError(std::string(flag) + " expects " + std::to_string(expected) +
                               " comma-separated values");
  }
  return out;
}

struct ParamFlags {
  SearchParams params;
  std::string schedule = "per-region";
  std::vector<CLI::Option*> options;

  void attach(CLI::App* app) {
    options.push_back(app->add_option("--purity", params.p_thr, "initial purity threshold")
                          ->capture_default_str());
    options.push_back(
        app->add_option("--thr1", params.thr1, "gray difference threshold")->capture_default_str());
    options.push_back(
        app->add_option("--var-thr", params.var_thr, "variance ceiling")->capture_default_str());
    options.push_back(app->add_option("--growth", params.growth, "purity schedule factor")
                          ->capture_default_str());
    options.push_back(
        app->add_option("--sigma", params.sigma, "Gaussian sigma")->capture_default_str());
    options.push_back(app->add_option("--schedule", schedule, "threshold schedule scope")
                          ->check(CLI::IsMember({"per-region", "global"}))
                          ->capture_default_str());
  }

  bool any_given() const {
    for (const auto* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  SearchParams resolve() const {
    SearchParams p = params;
    p.schedule = schedule == "global" ? ThresholdSchedule::kGlobal : ThresholdSchedule::kPerRegion;
    p.validate();
    return p;
  }
};

void print_stats(const DatasetStats& s, std::ostream& out) {
  auto row = [&out](const char* name, const Distribution& d) {
    out << std::left << std::setw(8) << name << std::right << std::fixed << std::setprecision(2)
        << " min " << std::setw(9) << d.min << "  median " << std::setw(9) << d.median
        << "  mean " << std::setw(9) << d.mean << "  max " << std::setw(9) << d.max << "\n";
  };
  out << "graphs  " << s.graph_count << "\n";
  row("nodes", s.nodes);
  row("edges", s.edges);
  out << std::setprecision(4);
  out << "regions per pixel (k)  " << s.regions_per_pixel << "\n";
  out << "region area fraction   " << s.region_area_fraction << "\n";
  if (s.pixels_per_region > 0.0) out << "pixels per region      " << s.pixels_per_region << "\n";
  out << "labels ";
  for (std::size_t c = 0; c < s.label_histogram.size(); ++c) {
    out << (c == 0 ? "" : " ") << c << ":" << s.label_histogram[c];
  }
  out << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"grig: images to granular-rectangle graphs", "grig"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "grig 0.1.0");

  // convert
  auto* convert = app.add_subcommand("convert", "convert an image dataset into a GRIG file");
  std::string format;
  std::string input;
  std::string labels;
  std::string out;
  unsigned jobs = 0;
  std::size_t limit = 0;
  ParamFlags convert_params;
  convert->add_option("--format", format, "mnist | cifar10 | image-dir")
      ->required()
      ->check(CLI::IsMember({"mnist", "cifar10", "image-dir"}));
  convert->add_option("--input", input, "image source")->required();
  convert->add_option("--labels", labels, "MNIST label file");
  convert->add_option("--out", out, "output .grig file")->required();
  convert->add_option("--jobs", jobs, "worker threads (default: $GRIG_JOBS or 1)")
      ->check(CLI::Range(1u, 1024u));
  convert->add_option("--limit", limit, "convert at most N records");
  convert_params.attach(convert);

  // graph
  auto* graph = app.add_subcommand("graph", "convert one image into a JSON graph");
  std::string graph_input;
  std::string graph_out;
  ParamFlags graph_params;
  graph->add_option("--input", graph_input, "PNG or PGM image")->required();
  graph->add_option("--out", graph_out, "output .json")->required();
  graph_params.attach(graph);

  // transform
  auto* transform = app.add_subcommand("transform", "apply a graph-level transform");
  std::string tf_in;
  std::string tf_out;
  double rotate_deg = 0.0;
  std::string center_text;
  bool flip_h = false;
  bool flip_v = false;
  bool raw_flip = false;
  std::size_t up_k = 0;
  std::size_t down_k = 0;
  std::uint64_t seed = 0;
  transform->add_option("--in", tf_in, "input graph .json")->required();
  transform->add_option("--out", tf_out, "output graph .json")->required();
  auto* rotate_opt = transform->add_option("--rotate", rotate_deg, "rotation angle in degrees");
  transform->add_option("--center", center_text, "rotation center X,Y (default: canvas center)")
      ->needs(rotate_opt);
  auto* fh = transform->add_flag("--flip-h", flip_h, "horizontal flip");
  auto* fv = transform->add_flag("--flip-v", flip_v, "vertical flip");
  transform->add_flag("--raw-flip", raw_flip, "use w-x / h-y literally instead of the pixel grid");
  auto* up_opt = transform->add_option("--upsample", up_k, "add K random sub-rectangle nodes");
  transform->add_option("--seed", seed, "seed for --upsample")->capture_default_str();
  auto* down_opt = transform->add_option("--downsample", down_k, "perform K merge steps");

  // subgraph
  auto* subgraph = app.add_subcommand("subgraph", "extract the nodes inside a region");
  std::string sg_in;
  std::string sg_out;
  std::string rect_text;
  subgraph->add_option("--in", sg_in, "input graph .json")->required();
  subgraph->add_option("--rect", rect_text, "x0,y0,x1,y1 (inclusive)")->required();
  subgraph->add_option("--out", sg_out, "output graph .json")->required();

  // viz
  auto* viz_cmd = app.add_subcommand("viz", "render a graph as SVG");
  std::string viz_in;
  std::string viz_image;
  std::string viz_out;
  std::string viz_attention;
  std::uint32_t viz_graph_index = 0;
  viz_cmd->add_option("--in", viz_in, "input graph .json")->required();
  viz_cmd->add_option("--image", viz_image, "source image drawn underneath");
  viz_cmd->add_option("--attention", viz_attention, "CSV of graph_index,node_id,score");
  viz_cmd->add_option("--graph-index", viz_graph_index, "row filter for --attention");
  viz_cmd->add_option("--out", viz_out, "output .svg")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "summarize a GRIG file");
  std::string stats_in;
  stats->add_option("--in", stats_in, "input .grig")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "replay a GRIG file against its source images");
  std::string vf_in;
  std::string vf_format;
  std::string vf_input;
  std::string vf_labels;
  std::size_t vf_max_report = 20;
  ParamFlags verify_params;
  verify->add_option("--in", vf_in, "input .grig")->required();
  verify->add_option("--format", vf_format, "mnist | cifar10 | image-dir")
      ->required()
      ->check(CLI::IsMember({"mnist", "cifar10", "image-dir"}));
  verify->add_option("--input", vf_input, "image source")->required();
  verify->add_option("--labels", vf_labels, "MNIST label file");
  verify->add_option("--max-report", vf_max_report, "violations printed in detail")
      ->capture_default_str();
  verify_params.attach(verify);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "time conversion of synthetic images");
  std::string sizes_text = "64,128,256,512";
  int trials = 5;
  ParamFlags bench_params;
  bench_cmd->add_option("--sizes", sizes_text, "square image sides")->capture_default_str();
  bench_cmd->add_option("--trials", trials, "timed runs per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_params.attach(bench_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (convert->parsed()) {
      SourceSpec spec{parse_source_format(format), input, labels, limit};
      const SearchParams params = convert_params.resolve();
      const unsigned workers = jobs > 0 ? jobs : default_jobs();
      const ImageSource source = open_source(spec);
      GraphDataset ds = convert_source(source, params, workers);
      ds.metadata.source = std::string(to_string(spec.format)) + ":" +
                           std::filesystem::path(input).filename().string();
      save_dataset(ds, out);
      std::cerr << "converted " << ds.graphs.size() << " images into " << out << "\n";
    } else if (graph->parsed()) {
      const ImageGraph g = build_graph(load_image(graph_input), graph_params.resolve());
      write_text(graph_out, graph_to_json(g));
      std::cerr << g.nodes.size() << " nodes, " << g.edges.size() << " edges\n";
    } else if (transform->parsed()) {
      const int selected = (rotate_opt->count() > 0) + (fh->count() > 0) + (fv->count() > 0) +
                           (up_opt->count() > 0) + (down_opt->count() > 0);
      if (selected != 1) {
        throw InvalidArgumentError(
            "transform needs exactly one of --rotate, --flip-h, --flip-v, --upsample, "
            "--downsample");
      }
      const ImageGraph g = graph_from_json(read_text(tf_in));
      const auto conv = raw_flip ? ops::FlipConvention::kRaw : ops::FlipConvention::kPixelGrid;
      ImageGraph result;
      if (rotate_opt->count() > 0) {
        ops::Point center = ops::canvas_center(g);
        if (!center_text.empty()) {
          const auto xy = parse_list<double>(center_text, 2, "--center");
          center = {xy[0], xy[1]};
        }
        result = ops::rotate(g, rotate_deg, center);
      } else if (flip_h) {
        result = ops::flip_horizontal(g, conv);
      } else if (flip_v) {
        result = ops::flip_vertical(g, conv);
      } else if (up_opt->count() > 0) {
        result = ops::upsample(g, up_k, seed);
      } else {
        result = ops::downsample(g, down_k);
      }
      write_text(tf_out, graph_to_json(result));
    } else if (subgraph->parsed()) {
      const auto r = parse_list<int>(rect_text, 4, "--rect");
      const ImageGraph g = graph_from_json(read_text(sg_in));
      write_text(sg_out, graph_to_json(ops::extract_subgraph(g, {r[0], r[1], r[2], r[3]})));
    } else if (viz_cmd->parsed()) {
      const ImageGraph g = graph_from_json(read_text(viz_in));
      viz::SvgOptions options;
      GrayImage image;
      if (!viz_image.empty()) {
        image = load_image(viz_image);
        if (image.width() != g.width || image.height() != g.height) {
          throw InvalidArgumentError("--image size does not match the graph canvas");
        }
        options.image = &image;
      }
      if (!viz_attention.empty()) {
        options.attention = viz::parse_attention_csv(read_text(viz_attention));
        options.graph_index = viz_graph_index;
      }
      write_text(viz_out, viz::render_svg(g, options));
    } else if (stats->parsed()) {
      print_stats(dataset_stats(load_dataset(stats_in)), std::cout);
    } else if (verify->parsed()) {
      const GraphDataset ds = load_dataset(vf_in);
      SearchParams params = verify_params.resolve();
      if (!verify_params.any_given() && !ds.metadata.created.empty()) {
        params = ds.metadata.params;
      }
      const ImageSource source =
          open_source({parse_source_format(vf_format), vf_input, vf_labels, ds.graphs.size()});
      if (source.count != ds.graphs.size()) {
        std::cerr << "verify: source has " << source.count << " records, dataset has "
                  << ds.graphs.size() << "\n";
        throw VerificationFailed{};
      }
      std::size_t violations = 0;
      std::size_t mismatched = 0;
      std::size_t printed = 0;
      for (std::size_t i = 0; i < source.count; ++i) {
        const LabeledImage rec = source.load(i);
        const auto rects = partition(rec.image, params);
        const auto report = oracle::verify_partition(rec.image, params, rects);
        violations += report.violations.size();
        for (const auto& v : report.violations) {
          if (printed++ < vf_max_report) {
            std::cerr << "record " << i << " rect " << v.rect_id << " [" << oracle::to_string(v.kind)
                      << "] " << v.detail << "\n";
          }
        }
        ImageGraph g;
        g.width = rec.image.width();
        g.height = rec.image.height();
        g.nodes = rects;
        g.edges = build_edges(rects);
        if (to_labeled_graph(g, static_cast<std::uint16_t>(rec.label)) != ds.graphs[i]) {
          ++mismatched;
          if (printed++ < vf_max_report) {
            std::cerr << "record " << i << " stored graph differs from a fresh conversion\n";
          }
        }
      }
      std::cout << "records " << source.count << "  violations " << violations
                << "  mismatched graphs " << mismatched << "\n";
      if (violations > 0 || mismatched > 0) throw VerificationFailed{};
    } else if (bench_cmd->parsed()) {
      const auto sizes = parse_list<int>(sizes_text, 0, "--sizes");
      for (int s : sizes) {
        if (s < 1) throw InvalidArgumentError("--sizes entries must be positive");
      }
      const auto result = bench::measure_scaling(sizes, trials, bench_params.resolve());
      std::cout << std::setw(6) << "size" << std::setw(10) << "pixels" << std::setw(9) << "nodes"
                << std::setw(10) << "edges" << std::setw(13) << "median_ms" << "\n";
      for (const auto& row : result.rows) {
        std::cout << std::setw(6) << row.size << std::setw(10) << row.pixels << std::setw(9)
                  << row.nodes << std::setw(10) << row.edges << std::setw(13) << std::fixed
                  << std::setprecision(3) << row.median_seconds * 1e3 << "\n";
      }
      std::cout << "fitted exponent (time ~ N^e): " << std::setprecision(3) << result.exponent
                << "\n";
    }
  } catch (const VerificationFailed&) {
    return kExitVerification;
  } catch (const InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace grig::cli
