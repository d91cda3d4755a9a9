#include "grig/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "grig/graph.hpp"

namespace grig::bench {

GrayImage synthetic_gradient_image(int size) {
  GrayImage img(size, size);
  const double span = 2.0 * (size - 1 > 0 ? size - 1 : 1);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double ramp = 235.0 * (x + y) / span;
      const double ripple = 10.0 * (0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * x / size) *
                                              std::cos(2.0 * std::numbers::pi * y / size));
      img.at(x, y) = static_cast<std::uint8_t>(std::lround(std::clamp(ramp + ripple, 0.0, 255.0)));
    }
  }
  return img;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

ScalingResult measure_scaling(const std::vector<int>& sizes, int trials,
                              const SearchParams& params) {
  using Clock = std::chrono::steady_clock;
  ScalingResult result;
  std::vector<double> log_n;
  std::vector<double> log_t;
  for (int size : sizes) {
    const GrayImage img = synthetic_gradient_image(size);
    SizeTiming row;
    row.size = size;
    row.pixels = img.size();
    // one untimed warm-up run
    const ImageGraph warm = build_graph(img, params);
    row.nodes = warm.nodes.size();
    row.edges = warm.edges.size();
    for (int t = 0; t < trials; ++t) {
      const auto start = Clock::now();
      const ImageGraph g = build_graph(img, params);
      row.seconds.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    std::vector<double> sorted = row.seconds;
    std::sort(sorted.begin(), sorted.end());
    row.median_seconds = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    log_n.push_back(std::log(static_cast<double>(row.pixels)));
    log_t.push_back(std::log(std::max(row.median_seconds, 1e-9)));
    result.rows.push_back(std::move(row));
  }
  result.exponent = fit_slope(log_n, log_t);
  return result;
}

}  // namespace grig::bench
