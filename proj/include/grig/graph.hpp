#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "grig/granular.hpp"

namespace grig {

inline constexpr std::size_t kFeatureDim = 10;
inline constexpr int kDegreeClamp = 32;

using NodeFeatures = std::array<double, kFeatureDim>;
using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Nodes are granular rectangles indexed 0..n-1 (node i has id i); edges are
/// undirected, stored once as (i, j) with i < j, sorted lexicographically.
struct ImageGraph {
  int width = 0;
  int height = 0;
  std::vector<GranularRect> nodes;
  std::vector<Edge> edges;
  std::optional<std::vector<NodeFeatures>> features;

  std::size_t node_count() const { return nodes.size(); }
  std::vector<std::uint32_t> degrees() const;

  friend bool operator==(const ImageGraph&, const ImageGraph&) = default;
};

/// True iff the closed pixel intervals intersect on both axes.
bool rect_overlap(const GranularRect& a, const GranularRect& b);

/// Every overlapping pair, via an x sweep over an interval tree keyed on y.
/// Indices refer to positions in `rects`.
std::vector<Edge> build_edges(std::span<const GranularRect> rects);

/// [cx/w, cy/h, (2rx+1)/w, (2ry+1)/h, mean/255, var/255^2, max/255, min/255,
///  purity, min(degree, 32)/32]
NodeFeatures node_feature_vector(const GranularRect& rect, std::uint32_t degree, int width,
                                 int height);

/// Recomputes the feature matrix from nodes and edges.
std::vector<NodeFeatures> compute_features(const ImageGraph& g);

/// partition -> build_edges -> features.
ImageGraph build_graph(const GrayImage& img, const SearchParams& params);

/// Structural checks: ids contiguous, rects inside the canvas, edges in range,
/// ordered, unique and loop-free. Throws InvariantError naming the offender.
void check_graph(const ImageGraph& g);

/// Sorts, orients (i < j) and deduplicates; drops self loops.
void normalize_edges(std::vector<Edge>& edges);

}  // namespace grig
