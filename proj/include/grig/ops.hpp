#pragma once

#include <cstdint>
#include <optional>

#include "grig/graph.hpp"

namespace grig::ops {

/// How flips map the 0-indexed pixel grid. kPixelGrid uses (h-1)-y and
/// (w-1)-x; kRaw uses h-y and w-x literally, so border nodes leave the canvas
/// and are dropped.
enum class FlipConvention { kPixelGrid, kRaw };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Canvas center ((w-1)/2, (h-1)/2).
Point canvas_center(const ImageGraph& g);

/// Rotates node centers by `degrees` about `center`:
///   x' = (x-cx) cos t + (y-cy) sin t + cx
///   y' = (y-cy) cos t - (x-cx) sin t + cy
/// Multiples of 90 use exact trig and swap rx/ry at 90 and 270; other angles
/// round centers to the nearest pixel. Nodes whose centers leave the canvas are
/// dropped with their edges; surviving extents are clamped to the canvas.
ImageGraph rotate(const ImageGraph& g, double degrees, Point center);
ImageGraph rotate(const ImageGraph& g, double degrees);

ImageGraph flip_vertical(const ImageGraph& g, FlipConvention conv = FlipConvention::kPixelGrid);
ImageGraph flip_horizontal(const ImageGraph& g,
                           FlipConvention conv = FlipConvention::kPixelGrid);

/// Pooled statistics of two merged nodes, weighted by rectangle area.
GranularRect merge_nodes(const GranularRect& a, const GranularRect& b, int width, int height);

/// k merge steps, each fusing the edge whose endpoint centers are closest.
/// Throws InvalidArgumentError when k >= node count (and k > 0), or when no
/// edge remains to merge.
ImageGraph downsample(const ImageGraph& g, std::size_t k);

/// Adds k random sub-rectangles of existing nodes. Deterministic per seed:
/// draws come from std::mt19937_64 seeded with `seed`, mapped to ranges by
/// rejection sampling (see uniform_int), in the order parent, cx, cy, rx, ry.
ImageGraph upsample(const ImageGraph& g, std::size_t k, std::uint64_t seed);

struct Region {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};

/// Keeps nodes whose centers fall inside `region`, clips them symmetrically
/// to it, and translates the region origin to (0, 0).
ImageGraph extract_subgraph(const ImageGraph& g, Region region);

}  // namespace grig::ops
