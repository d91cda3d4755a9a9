#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grig/graph.hpp"

namespace grig::viz {

struct AttentionScore {
  std::uint32_t graph_index = 0;
  std::uint32_t node_id = 0;
  double score = 0.0;
};

/// Parses `graph_index,node_id,score` rows; a header line is optional.
std::vector<AttentionScore> parse_attention_csv(std::string_view text);

struct SvgOptions {
  const GrayImage* image = nullptr;  // drawn underneath when set
  std::vector<AttentionScore> attention;
  std::uint32_t graph_index = 0;     // which rows of `attention` apply
  double scale = 0.0;                // <= 0 picks a scale from the canvas size
};

/// Rect outlines, then edges as center-to-center segments, then centers.
/// Elements are emitted in node/edge order, so output is deterministic.
std::string render_svg(const ImageGraph& g, const SvgOptions& options = {});

}  // namespace grig::viz
