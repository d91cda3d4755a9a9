#include "grig/stats.hpp"

#include <algorithm>
#include <numeric>

namespace grig {

Distribution summarize(std::vector<double> values) {
  Distribution d;
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  d.min = values.front();
  d.max = values.back();
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const std::size_t mid = values.size() / 2;
  d.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return d;
}

DatasetStats dataset_stats(const GraphDataset& ds) {
  DatasetStats s;
  s.graph_count = ds.graphs.size();
  s.label_histogram.assign(ds.class_count, 0);
  std::vector<double> nodes;
  std::vector<double> edges;
  double coverage_sum = 0.0;
  double fraction_sum = 0.0;
  std::size_t node_total = 0;
  const bool has_extent_columns = ds.feature_dim >= 4;

  for (const auto& g : ds.graphs) {
    nodes.push_back(g.node_count);
    edges.push_back(static_cast<double>(g.edges.size()));
    if (g.label < s.label_histogram.size()) ++s.label_histogram[g.label];
    if (!has_extent_columns) continue;
    double covered = 0.0;
    for (std::uint32_t n = 0; n < g.node_count; ++n) {
      // columns 2 and 3 are (2rx+1)/w and (2ry+1)/h
      const std::size_t row = static_cast<std::size_t>(n) * ds.feature_dim;
      covered += static_cast<double>(g.features[row + 2]) * g.features[row + 3];
    }
    coverage_sum += covered;
    fraction_sum += covered;
    node_total += g.node_count;
  }
  s.nodes = summarize(std::move(nodes));
  s.edges = summarize(std::move(edges));
  if (s.graph_count > 0) s.regions_per_pixel = coverage_sum / static_cast<double>(s.graph_count);
  if (node_total > 0) {
    s.region_area_fraction = fraction_sum / static_cast<double>(node_total);
    if (ds.metadata.image_width > 0 && ds.metadata.image_height > 0) {
      s.pixels_per_region = s.region_area_fraction * ds.metadata.image_width *
                            static_cast<double>(ds.metadata.image_height);
    }
  }
  return s;
}

}  // namespace grig
