#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grig/serialize.hpp"

namespace grig {

struct Distribution {
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

Distribution summarize(std::vector<double> values);

struct DatasetStats {
  std::size_t graph_count = 0;
  Distribution nodes;
  Distribution edges;
  std::vector<std::size_t> label_histogram;
  // Mean over graphs of sum(area) / canvas area: the average number of
  // regions covering a pixel.
  double regions_per_pixel = 0.0;
  // Mean rectangle area in pixels; 0 when the canvas size is unknown.
  double pixels_per_region = 0.0;
  // Mean rectangle area as a fraction of the canvas.
  double region_area_fraction = 0.0;
};

DatasetStats dataset_stats(const GraphDataset& ds);

}  // namespace grig
