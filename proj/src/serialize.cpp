#include "grig/serialize.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <sstream>

#include "grig/imaging.hpp"
#include <nlohmann/json.hpp>

namespace grig {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kGraphFormatTag = "grig-graph";
constexpr int kGraphFormatVersion = 1;

Json node_to_json(const GranularRect& r) {
  Json j;
  j["id"] = r.id;
  j["cx"] = r.cx;
  j["cy"] = r.cy;
  j["rx"] = r.rx;
  j["ry"] = r.ry;
  j["purity"] = r.purity;
  j["variance"] = r.variance;
  j["mean"] = r.v_mean;
  j["max"] = r.v_max;
  j["min"] = r.v_min;
  return j;
}

template <typename T>
T require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw FormatError(where + ": missing key \"" + key + "\"");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(where + ": key \"" + key + "\" has the wrong type");
  }
}

}  // namespace

std::string graph_to_json(const ImageGraph& g) {
  // One node / feature row per line keeps diffs readable; the whole document
  // is still a single canonical byte sequence for a given graph.
  std::ostringstream out;
  out << "{\n";
  out << "  \"format\": \"" << kGraphFormatTag << "\",\n";
  out << "  \"version\": " << kGraphFormatVersion << ",\n";
  out << "  \"width\": " << g.width << ",\n";
  out << "  \"height\": " << g.height << ",\n";
  out << "  \"nodes\": [";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ") << node_to_json(g.nodes[i]).dump();
  }
  out << (g.nodes.empty() ? "],\n" : "\n  ],\n");
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(Json::array({a, b}));
  out << "  \"edges\": " << edges.dump() << ",\n";
  out << "  \"features\": ";
  if (!g.features) {
    out << "null\n";
  } else {
    out << "[";
    for (std::size_t i = 0; i < g.features->size(); ++i) {
      out << (i == 0 ? "\n    " : ",\n    ") << Json((*g.features)[i]).dump();
    }
    out << (g.features->empty() ? "]\n" : "\n  ]\n");
  }
  out << "}\n";
  return out.str();
}

ImageGraph graph_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("graph JSON is malformed: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("graph JSON must be an object");
  if (doc.contains("format") && doc["format"] != kGraphFormatTag) {
    throw BadMagicError("graph JSON format tag is not \"grig-graph\"");
  }
  if (doc.contains("version") && doc["version"] != kGraphFormatVersion) {
    throw UnsupportedVersionError("graph JSON version " + doc["version"].dump() +
                                  " is not supported");
  }

  ImageGraph g;
  g.width = require<int>(doc, "width", "graph");
  g.height = require<int>(doc, "height", "graph");
  const Json& nodes = doc.contains("nodes") ? doc["nodes"] : Json();
  if (!nodes.is_array()) throw FormatError("graph: \"nodes\" must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "node " + std::to_string(i);
    GranularRect r;
    r.id = require<std::uint32_t>(nodes[i], "id", where);
    r.cx = require<int>(nodes[i], "cx", where);
    r.cy = require<int>(nodes[i], "cy", where);
    r.rx = require<int>(nodes[i], "rx", where);
    r.ry = require<int>(nodes[i], "ry", where);
    r.purity = require<double>(nodes[i], "purity", where);
    r.variance = require<double>(nodes[i], "variance", where);
    r.v_mean = require<double>(nodes[i], "mean", where);
    r.v_max = require<double>(nodes[i], "max", where);
    r.v_min = require<double>(nodes[i], "min", where);
    g.nodes.push_back(r);
  }
  const Json& edges = doc.contains("edges") ? doc["edges"] : Json();
  if (!edges.is_array()) throw FormatError("graph: \"edges\" must be an array");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Json& e = edges[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned()) {
      throw FormatError("edge " + std::to_string(k) + " must be a pair of node indices");
    }
    g.edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
  }
  if (doc.contains("features") && !doc["features"].is_null()) {
    const Json& feats = doc["features"];
    if (!feats.is_array()) throw FormatError("graph: \"features\" must be an array or null");
    std::vector<NodeFeatures> rows;
    for (std::size_t i = 0; i < feats.size(); ++i) {
      if (!feats[i].is_array() || feats[i].size() != kFeatureDim) {
        throw FormatError("feature row " + std::to_string(i) + " must hold " +
                          std::to_string(kFeatureDim) + " numbers");
      }
      NodeFeatures row{};
      for (std::size_t c = 0; c < kFeatureDim; ++c) {
        if (!feats[i][c].is_number()) {
          throw FormatError("feature row " + std::to_string(i) + " has a non-numeric entry");
        }
        row[c] = feats[i][c].get<double>();
      }
      rows.push_back(row);
    }
    g.features = std::move(rows);
  }
  check_graph(g);
  return g;
}

// --- GRIG ----------------------------------------------------------------------

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large buffers.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = ::crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

namespace {

class ByteWriter {
 public:
  void u16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw TruncatedError("GRIG data ends at byte " + std::to_string(bytes_.size()) +
                           ", needed " + std::to_string(pos_ + n));
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_dataset(const GraphDataset& ds) {
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    const auto& g = ds.graphs[gi];
    const std::string where = "graph " + std::to_string(gi);
    if (ds.class_count > 0 && g.label >= ds.class_count) {
      throw InvariantError(where + ": label " + std::to_string(g.label) + " >= class count " +
                           std::to_string(ds.class_count));
    }
    if (g.features.size() != static_cast<std::size_t>(g.node_count) * ds.feature_dim) {
      throw InvariantError(where + ": feature matrix size does not match node count");
    }
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const auto& [a, b] = g.edges[k];
      if (a >= b || b >= g.node_count) {
        throw InvariantError(where + ": edge " + std::to_string(k) + " (" + std::to_string(a) +
                             "," + std::to_string(b) + ") is invalid for " +
                             std::to_string(g.node_count) + " nodes");
      }
    }
  }
}

}  // namespace

LabeledGraph to_labeled_graph(const ImageGraph& g, std::uint16_t label) {
  LabeledGraph out;
  out.label = label;
  out.node_count = static_cast<std::uint32_t>(g.nodes.size());
  const auto features = g.features ? *g.features : compute_features(g);
  out.features.reserve(features.size() * kFeatureDim);
  for (const auto& row : features) {
    for (double v : row) out.features.push_back(static_cast<float>(v));
  }
  out.edges = g.edges;
  return out;
}

std::vector<std::uint8_t> write_dataset(const GraphDataset& ds) {
  check_dataset(ds);
  ByteWriter w;
  w.raw("GRIG");
  w.u16(kGrigVersion);
  w.u16(ds.feature_dim);
  w.u16(ds.class_count);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(ds.graphs.size()));
  for (const auto& g : ds.graphs) {
    w.u16(g.label);
    w.u32(g.node_count);
    w.u32(static_cast<std::uint32_t>(g.edges.size()));
    for (float v : g.features) w.f32(v);
    for (const auto& [a, b] : g.edges) {
      w.u32(a);
      w.u32(b);
    }
  }
  const std::uint32_t crc = crc32(w.bytes());
  w.u32(crc);
  return w.take();
}

GraphDataset read_dataset(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw TruncatedError("GRIG data shorter than its magic");
  if (!(bytes[0] == 'G' && bytes[1] == 'R' && bytes[2] == 'I' && bytes[3] == 'G')) {
    throw BadMagicError("missing GRIG magic");
  }
  ByteReader r(bytes);
  r.skip(4);
  const std::uint16_t version = r.u16();
  if (version != kGrigVersion) {
    throw UnsupportedVersionError("GRIG version " + std::to_string(version) +
                                  " is not supported (expected 1)");
  }
  GraphDataset ds;
  ds.feature_dim = r.u16();
  ds.class_count = r.u16();
  if (const auto reserved = r.u16(); reserved != 0) {
    throw InvariantError("GRIG reserved header field is " + std::to_string(reserved));
  }
  const std::uint32_t graph_count = r.u32();

  // Walk the structure first so a short file reports truncation, not a bad CRC.
  struct Extent {
    std::uint16_t label;
    std::uint32_t nodes;
    std::uint32_t edges;
    std::size_t offset;
  };
  std::vector<Extent> extents;
  extents.reserve(std::min<std::size_t>(graph_count, bytes.size() / 10));
  for (std::uint32_t i = 0; i < graph_count; ++i) {
    Extent e{};
    e.label = r.u16();
    e.nodes = r.u32();
    e.edges = r.u32();
    e.offset = r.pos();
    r.skip(static_cast<std::size_t>(e.nodes) * ds.feature_dim * 4 +
           static_cast<std::size_t>(e.edges) * 8);
    extents.push_back(e);
  }
  const std::size_t body_end = r.pos();
  const std::uint32_t stored_crc = r.u32();
  if (r.pos() != bytes.size()) {
    throw FormatError("GRIG data has " + std::to_string(bytes.size() - r.pos()) +
                      " trailing bytes");
  }
  if (const auto actual = crc32(bytes.first(body_end)); actual != stored_crc) {
    throw ChecksumError("GRIG CRC mismatch: stored " + std::to_string(stored_crc) +
                        ", computed " + std::to_string(actual));
  }

  ds.graphs.reserve(extents.size());
  for (const auto& e : extents) {
    ByteReader body(bytes);
    body.skip(e.offset);
    LabeledGraph g;
    g.label = e.label;
    g.node_count = e.nodes;
    g.features.resize(static_cast<std::size_t>(e.nodes) * ds.feature_dim);
    for (float& v : g.features) v = body.f32();
    g.edges.reserve(e.edges);
    for (std::uint32_t k = 0; k < e.edges; ++k) {
      const std::uint32_t a = body.u32();
      const std::uint32_t b = body.u32();
      g.edges.emplace_back(a, b);
    }
    ds.graphs.push_back(std::move(g));
  }
  check_dataset(ds);
  return ds;
}

std::filesystem::path sidecar_path(const std::filesystem::path& grig_path) {
  auto p = grig_path;
  p += ".json";
  return p;
}

namespace {

const char* schedule_name(ThresholdSchedule s) {
  return s == ThresholdSchedule::kGlobal ? "global" : "per-region";
}

}  // namespace

std::string metadata_to_json(const DatasetMetadata& meta) {
  Json j;
  j["source"] = meta.source;
  j["created"] = meta.created;
  j["params"] = {
      {"p_thr", meta.params.p_thr},   {"thr1", meta.params.thr1},
      {"var_thr", meta.params.var_thr}, {"growth", meta.params.growth},
      {"sigma", meta.params.sigma},   {"schedule", schedule_name(meta.params.schedule)},
      {"gradient", "sobel"},
  };
  j["class_names"] = meta.class_names;
  j["image_width"] = meta.image_width;
  j["image_height"] = meta.image_height;
  return j.dump(2) + "\n";
}

DatasetMetadata metadata_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("dataset metadata is malformed: ") + e.what());
  }
  DatasetMetadata meta;
  meta.source = require<std::string>(j, "source", "metadata");
  meta.created = require<std::string>(j, "created", "metadata");
  const Json params = j.contains("params") ? j["params"] : Json::object();
  meta.params.p_thr = require<double>(params, "p_thr", "metadata.params");
  meta.params.thr1 = require<double>(params, "thr1", "metadata.params");
  meta.params.var_thr = require<double>(params, "var_thr", "metadata.params");
  meta.params.growth = require<double>(params, "growth", "metadata.params");
  meta.params.sigma = require<double>(params, "sigma", "metadata.params");
  if (params.contains("schedule")) {
    const auto s = params["schedule"].get<std::string>();
    if (s == "global") {
      meta.params.schedule = ThresholdSchedule::kGlobal;
    } else if (s != "per-region") {
      throw FormatError("metadata: unknown schedule \"" + s + "\"");
    }
  }
  if (j.contains("class_names")) meta.class_names = j["class_names"].get<std::vector<std::string>>();
  if (j.contains("image_width")) meta.image_width = j["image_width"].get<int>();
  if (j.contains("image_height")) meta.image_height = j["image_height"].get<int>();
  return meta;
}

void save_dataset(const GraphDataset& ds, const std::filesystem::path& path) {
  write_file(path, write_dataset(ds));
  const std::string meta = metadata_to_json(ds.metadata);
  write_file(sidecar_path(path),
             std::span(reinterpret_cast<const std::uint8_t*>(meta.data()), meta.size()));
}

GraphDataset load_dataset(const std::filesystem::path& path) {
  GraphDataset ds = read_dataset(read_file(path));
  const auto side = sidecar_path(path);
  std::error_code ec;
  if (std::filesystem::exists(side, ec)) {
    const auto bytes = read_file(side);
    ds.metadata = metadata_from_json(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  return ds;
}

}  // namespace grig
