#include "grig/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "grig/random.hpp"

namespace grig::ops {
namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Keeps `keep[i]` nodes, renumbers them densely and carries over the edges
// whose endpoints both survive.
ImageGraph compact(const ImageGraph& g, std::vector<GranularRect> nodes,
                   const std::vector<bool>& keep, int width, int height) {
  ImageGraph out;
  out.width = width;
  out.height = height;
  std::vector<std::uint32_t> remap(nodes.size(), std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<std::uint32_t>(out.nodes.size());
    nodes[i].id = remap[i];
    out.nodes.push_back(nodes[i]);
  }
  for (const auto& [a, b] : g.edges) {
    if (keep[a] && keep[b]) out.edges.emplace_back(remap[a], remap[b]);
  }
  normalize_edges(out.edges);
  if (g.features) out.features = compute_features(out);
  return out;
}

void clamp_extents(GranularRect& r, int width, int height) {
  r.rx = std::min({r.rx, r.cx, width - 1 - r.cx});
  r.ry = std::min({r.ry, r.cy, height - 1 - r.cy});
}

}  // namespace

Point canvas_center(const ImageGraph& g) {
  return {(g.width - 1) / 2.0, (g.height - 1) / 2.0};
}

ImageGraph rotate(const ImageGraph& g, double degrees, Point center) {
  double angle = std::fmod(degrees, 360.0);
  if (angle < 0.0) angle += 360.0;

  double c = 0.0;
  double s = 0.0;
  bool swap_extents = false;
  if (angle == 0.0) {
    c = 1.0;
  } else if (angle == 90.0) {
    s = 1.0;
    swap_extents = true;
  } else if (angle == 180.0) {
    c = -1.0;
  } else if (angle == 270.0) {
    s = -1.0;
    swap_extents = true;
  } else {
    const double rad = angle * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }

  std::vector<GranularRect> nodes = g.nodes;
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    GranularRect& r = nodes[i];
    const double dx = r.cx - center.x;
    const double dy = r.cy - center.y;
    const int nx = round_half_up(dx * c + dy * s + center.x);
    const int ny = round_half_up(dy * c - dx * s + center.y);
    if (nx < 0 || ny < 0 || nx >= g.width || ny >= g.height) continue;
    r.cx = nx;
    r.cy = ny;
    if (swap_extents) std::swap(r.rx, r.ry);
    clamp_extents(r, g.width, g.height);
    keep[i] = true;
  }
  return compact(g, std::move(nodes), keep, g.width, g.height);
}

ImageGraph rotate(const ImageGraph& g, double degrees) {
  return rotate(g, degrees, canvas_center(g));
}

ImageGraph flip_vertical(const ImageGraph& g, FlipConvention conv) {
  const int offset = conv == FlipConvention::kPixelGrid ? g.height - 1 : g.height;
  std::vector<GranularRect> nodes = g.nodes;
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].cy = offset - nodes[i].cy;
    if (nodes[i].cy < 0 || nodes[i].cy >= g.height) continue;
    clamp_extents(nodes[i], g.width, g.height);
    keep[i] = true;
  }
  return compact(g, std::move(nodes), keep, g.width, g.height);
}

ImageGraph flip_horizontal(const ImageGraph& g, FlipConvention conv) {
  const int offset = conv == FlipConvention::kPixelGrid ? g.width - 1 : g.width;
  std::vector<GranularRect> nodes = g.nodes;
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].cx = offset - nodes[i].cx;
    if (nodes[i].cx < 0 || nodes[i].cx >= g.width) continue;
    clamp_extents(nodes[i], g.width, g.height);
    keep[i] = true;
  }
  return compact(g, std::move(nodes), keep, g.width, g.height);
}

GranularRect merge_nodes(const GranularRect& a, const GranularRect& b, int width, int height) {
  const double area_a = static_cast<double>(a.area());
  const double area_b = static_cast<double>(b.area());
  const double total = area_a + area_b;

  GranularRect m;
  m.id = std::min(a.id, b.id);
  m.cx = round_half_up((area_a * a.cx + area_b * b.cx) / total);
  m.cy = round_half_up((area_a * a.cy + area_b * b.cy) / total);
  const int x0 = std::min(a.x0(), b.x0());
  const int x1 = std::max(a.x1(), b.x1());
  const int y0 = std::min(a.y0(), b.y0());
  const int y1 = std::max(a.y1(), b.y1());
  m.rx = std::max(m.cx - x0, x1 - m.cx);
  m.ry = std::max(m.cy - y0, y1 - m.cy);
  clamp_extents(m, width, height);

  m.v_mean = (area_a * a.v_mean + area_b * b.v_mean) / total;
  const double second_moment = (area_a * (a.variance + a.v_mean * a.v_mean) +
                                area_b * (b.variance + b.v_mean * b.v_mean)) /
                               total;
  m.variance = std::max(0.0, second_moment - m.v_mean * m.v_mean);
  m.v_min = std::min(a.v_min, b.v_min);
  m.v_max = std::max(a.v_max, b.v_max);
  m.purity = (area_a * a.purity + area_b * b.purity) / total;
  return m;
}

ImageGraph downsample(const ImageGraph& g, std::size_t k) {
  if (k == 0) return g;
  if (k >= g.nodes.size()) {
    throw InvalidArgumentError("downsample needs k < node count (" +
                               std::to_string(g.nodes.size()) + "), got " + std::to_string(k));
  }
  std::vector<GranularRect> nodes = g.nodes;
  std::vector<bool> alive(nodes.size(), true);
  std::vector<Edge> edges = g.edges;

  for (std::size_t step = 0; step < k; ++step) {
    if (edges.empty()) {
      throw InvalidArgumentError("downsample: no edge left to merge after " +
                                 std::to_string(step) + " steps");
    }
    // edges are sorted, so the first strict minimum is also the lowest id pair
    std::size_t best = 0;
    std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& a = nodes[edges[e].first];
      const auto& b = nodes[edges[e].second];
      const std::int64_t dx = a.cx - b.cx;
      const std::int64_t dy = a.cy - b.cy;
      const std::int64_t d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = e;
      }
    }
    const auto [keep_id, drop_id] = edges[best];
    nodes[keep_id] = merge_nodes(nodes[keep_id], nodes[drop_id], g.width, g.height);
    alive[drop_id] = false;
    for (auto& e : edges) {
      if (e.first == drop_id) e.first = keep_id;
      if (e.second == drop_id) e.second = keep_id;
    }
    normalize_edges(edges);
  }

  ImageGraph merged = g;
  merged.edges = std::move(edges);
  return compact(merged, std::move(nodes), alive, g.width, g.height);
}

ImageGraph upsample(const ImageGraph& g, std::size_t k, std::uint64_t seed) {
  if (k == 0) return g;
  if (g.nodes.empty()) throw InvalidArgumentError("upsample needs at least one node");

  ImageGraph out = g;
  std::mt19937_64 rng(seed);
  for (std::size_t step = 0; step < k; ++step) {
    const auto parent_index =
        static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(out.nodes.size()) - 1));
    const GranularRect parent = out.nodes[parent_index];
    GranularRect child = parent;
    child.id = static_cast<std::uint32_t>(out.nodes.size());
    child.cx = static_cast<int>(uniform_int(rng, parent.x0(), parent.x1()));
    child.cy = static_cast<int>(uniform_int(rng, parent.y0(), parent.y1()));
    const int max_rx = std::min(child.cx - parent.x0(), parent.x1() - child.cx);
    const int max_ry = std::min(child.cy - parent.y0(), parent.y1() - child.cy);
    child.rx = static_cast<int>(uniform_int(rng, 0, max_rx));
    child.ry = static_cast<int>(uniform_int(rng, 0, max_ry));
    for (const auto& other : out.nodes) {
      if (rect_overlap(other, child)) out.edges.emplace_back(other.id, child.id);
    }
    out.nodes.push_back(child);
  }
  normalize_edges(out.edges);
  if (out.features) out.features = compute_features(out);
  return out;
}

ImageGraph extract_subgraph(const ImageGraph& g, Region region) {
  if (region.x0 < 0 || region.y0 < 0 || region.x1 >= g.width || region.y1 >= g.height ||
      region.x0 > region.x1 || region.y0 > region.y1) {
    throw InvalidArgumentError("subgraph region (" + std::to_string(region.x0) + "," +
                               std::to_string(region.y0) + ")-(" + std::to_string(region.x1) +
                               "," + std::to_string(region.y1) + ") is not inside the " +
                               std::to_string(g.width) + "x" + std::to_string(g.height) +
                               " canvas");
  }
  std::vector<GranularRect> nodes = g.nodes;
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    GranularRect& r = nodes[i];
    if (r.cx < region.x0 || r.cx > region.x1 || r.cy < region.y0 || r.cy > region.y1) continue;
    r.rx = std::min({r.rx, r.cx - region.x0, region.x1 - r.cx});
    r.ry = std::min({r.ry, r.cy - region.y0, region.y1 - r.cy});
    r.cx -= region.x0;
    r.cy -= region.y0;
    keep[i] = true;
  }
  return compact(g, std::move(nodes), keep, region.x1 - region.x0 + 1,
                 region.y1 - region.y0 + 1);
}

}  // namespace grig::ops
