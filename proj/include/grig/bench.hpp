#pragma once

#include <vector>

#include "grig/granular.hpp"

namespace grig::bench {

/// Smooth diagonal ramp with a low-frequency ripple, values in [0, 255].
GrayImage synthetic_gradient_image(int size);

struct SizeTiming {
  int size = 0;
  std::size_t pixels = 0;
  std::vector<double> seconds;  // one per trial
  double median_seconds = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
};

struct ScalingResult {
  std::vector<SizeTiming> rows;
  double exponent = 0.0;  // slope of log(median time) vs log(pixels)
};

/// Times build_graph on square synthetic images.
ScalingResult measure_scaling(const std::vector<int>& sizes, int trials,
                              const SearchParams& params);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace grig::bench
