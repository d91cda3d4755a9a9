#pragma once

#include <cstdint>
#include <vector>

#include "grig/image.hpp"
#include "grig/imaging.hpp"

namespace grig {

/// Scope of the multiplicative purity-threshold schedule.
enum class ThresholdSchedule {
  kPerRegion,  // threshold restarts at p_thr for every region
  kGlobal,     // threshold keeps growing across regions of one image
};

struct SearchParams {
  double p_thr = 0.85;     // initial purity threshold, (0, 1]
  double thr1 = 10.0;      // gray difference that makes a pixel abnormal
  double var_thr = 400.0;  // variance ceiling
  double growth = 1.005;   // threshold multiplier per gated attempt, >= 1
  double sigma = 1.0;      // Gaussian sigma for the gradient map
  ThresholdSchedule schedule = ThresholdSchedule::kPerRegion;
  GradientOperator gradient = GradientOperator::kSobel;

  /// Throws InvalidArgumentError on the first violated constraint.
  void validate() const;

  friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

/// One granular rectangle: pixels [cx-rx, cx+rx] x [cy-ry, cy+ry].
struct GranularRect {
  std::uint32_t id = 0;
  int cx = 0;
  int cy = 0;
  int rx = 0;
  int ry = 0;
  double purity = 1.0;
  double variance = 0.0;
  double v_mean = 0.0;
  double v_max = 0.0;
  double v_min = 0.0;

  int x0() const { return cx - rx; }
  int x1() const { return cx + rx; }
  int y0() const { return cy - ry; }
  int y1() const { return cy + ry; }
  std::int64_t area() const {
    return static_cast<std::int64_t>(2 * rx + 1) * static_cast<std::int64_t>(2 * ry + 1);
  }
  bool contains(int x, int y) const { return x >= x0() && x <= x1() && y >= y0() && y <= y1(); }

  friend bool operator==(const GranularRect&, const GranularRect&) = default;
};

struct RegionStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance
  double min = 0.0;
  double max = 0.0;
};

/// 1 - (#pixels with |f(p) - f(center)| > thr1) / area.
/// Throws InvalidArgumentError when the rectangle leaves the image.
double region_purity(const GrayImage& img, int cx, int cy, int rx, int ry, double thr1);

RegionStats region_stats(const GrayImage& img, int cx, int cy, int rx, int ry);

/// Grows one rectangle from `(cx, cy)`. `threshold` is the schedule state on
/// entry and is updated in place; callers wanting a fresh schedule pass
/// params.p_thr.
GranularRect grow_region(const GrayImage& img, int cx, int cy, const SearchParams& params,
                         double& threshold);

/// Grows one rectangle with a fresh schedule starting at params.p_thr.
GranularRect grow_region(const GrayImage& img, int cx, int cy, const SearchParams& params);

/// Full partition: gradient-ordered seeds, growth, visit marking until every
/// pixel is covered. Output is ordered by id.
std::vector<GranularRect> partition(const GrayImage& img, const SearchParams& params);

/// Seed order used by partition: pixel indices sorted by (magnitude, index).
std::vector<std::uint32_t> seed_order(const GradientMap& grad);

/// Average number of rectangles containing a pixel.
double coverage_redundancy(const std::vector<GranularRect>& rects, int width, int height);

}  // namespace grig
