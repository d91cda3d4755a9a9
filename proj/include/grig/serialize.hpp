#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grig/graph.hpp"

namespace grig {

// --- single graphs as JSON ---------------------------------------------------

/// Canonical, byte-stable document: nodes by id, edges lexicographic, raw
/// (unnormalized) rect fields, optional features.
std::string graph_to_json(const ImageGraph& g);

/// Throws FormatError for malformed documents and InvariantError (naming the
/// node or edge index) for structural violations.
ImageGraph graph_from_json(std::string_view text);

// --- GRIG binary datasets ----------------------------------------------------
//
// Little-endian layout:
//   "GRIG" | version u16 = 1 | feature_dim u16 | class_count u16 | reserved u16 = 0
//   graph_count u32
//   per graph: label u16 | node_count u32 | edge_count u32
//              node_count * feature_dim f32 (row-major)
//              edge_count * (src u32, dst u32), src < dst
//   CRC-32 (IEEE, zlib polynomial) of every preceding byte, u32

inline constexpr std::uint16_t kGrigVersion = 1;
inline constexpr std::size_t kGrigHeaderSize = 16;

struct LabeledGraph {
  std::uint16_t label = 0;
  std::uint32_t node_count = 0;
  std::vector<float> features;  // node_count * feature_dim
  std::vector<Edge> edges;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

/// Provenance kept beside the container in FILE.grig.json; never checksummed.
struct DatasetMetadata {
  std::string source;
  SearchParams params;
  std::string created;  // ISO-8601 UTC
  std::vector<std::string> class_names;
  int image_width = 0;   // 0 when images differ in size
  int image_height = 0;
};

struct GraphDataset {
  std::uint16_t feature_dim = static_cast<std::uint16_t>(kFeatureDim);
  std::uint16_t class_count = 0;
  std::vector<LabeledGraph> graphs;
  DatasetMetadata metadata;
};

/// Packs an image graph (features computed if absent) for the container.
LabeledGraph to_labeled_graph(const ImageGraph& g, std::uint16_t label);

/// Throws InvariantError if `ds` breaks a container invariant.
std::vector<std::uint8_t> write_dataset(const GraphDataset& ds);

/// Verifies magic, version, length, CRC and invariants, in that order. Throws
/// BadMagicError, UnsupportedVersionError, TruncatedError, ChecksumError,
/// InvariantError. Metadata is left default.
GraphDataset read_dataset(std::span<const std::uint8_t> bytes);

void save_dataset(const GraphDataset& ds, const std::filesystem::path& path);
/// Reads the container and, when present, its sidecar metadata.
GraphDataset load_dataset(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& grig_path);
std::string metadata_to_json(const DatasetMetadata& meta);
DatasetMetadata metadata_from_json(std::string_view text);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace grig
