#include "grig/granular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace grig {

void SearchParams::validate() const {
  if (!(p_thr > 0.0 && p_thr <= 1.0)) {
    throw InvalidArgumentError("p_thr must lie in (0, 1], got " + std::to_string(p_thr));
  }
  if (!(thr1 >= 0.0) || !std::isfinite(thr1)) {
    throw InvalidArgumentError("thr1 must be >= 0, got " + std::to_string(thr1));
  }
  if (!(var_thr >= 0.0) || std::isnan(var_thr)) {
    throw InvalidArgumentError("var_thr must be >= 0, got " + std::to_string(var_thr));
  }
  if (!(growth >= 1.0) || !std::isfinite(growth)) {
    throw InvalidArgumentError("growth must be >= 1, got " + std::to_string(growth));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgumentError("sigma must be > 0, got " + std::to_string(sigma));
  }
}

namespace {

void check_rect(const GrayImage& img, int cx, int cy, int rx, int ry) {
  if (rx < 0 || ry < 0 || cx - rx < 0 || cy - ry < 0 || cx + rx >= img.width() ||
      cy + ry >= img.height()) {
    throw InvalidArgumentError("rectangle center (" + std::to_string(cx) + "," +
                               std::to_string(cy) + ") half-extents (" + std::to_string(rx) +
                               "," + std::to_string(ry) + ") leaves the " +
                               std::to_string(img.width()) + "x" +
                               std::to_string(img.height()) + " image");
  }
}

// Running moments over 8-bit samples. Sums are exact integers, so variance is
// the correctly rounded quotient (n*S2 - S1^2) / n^2 regardless of how the
// region was assembled.
class RegionAccumulator {
 public:
  RegionAccumulator(std::uint8_t center, double thr1) {
    for (int v = 0; v < 256; ++v) {
      abnormal_[static_cast<std::size_t>(v)] = std::abs(v - static_cast<int>(center)) > thr1;
    }
  }

  void add(std::uint8_t v) {
    ++count_;
    sum_ += v;
    sum_sq_ += static_cast<std::int64_t>(v) * v;
    abnormal_count_ += abnormal_[v] ? 1 : 0;
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }

  void add_row(const GrayImage& img, int y, int x0, int x1) {
    for (int x = x0; x <= x1; ++x) add(img.at(x, y));
  }
  void add_column(const GrayImage& img, int x, int y0, int y1) {
    for (int y = y0; y <= y1; ++y) add(img.at(x, y));
  }

  double purity() const {
    return 1.0 - static_cast<double>(abnormal_count_) / static_cast<double>(count_);
  }
  double mean() const { return static_cast<double>(sum_) / static_cast<double>(count_); }
  double variance() const {
    const __int128 n = count_;
    const __int128 num = n * sum_sq_ - static_cast<__int128>(sum_) * sum_;
    const double n_d = static_cast<double>(count_);
    return static_cast<double>(num) / (n_d * n_d);
  }
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::array<bool, 256> abnormal_{};
  std::int64_t count_ = 0;
  std::int64_t sum_ = 0;
  std::int64_t sum_sq_ = 0;
  std::int64_t abnormal_count_ = 0;
  std::uint8_t min_ = 255;
  std::uint8_t max_ = 0;
};

RegionAccumulator accumulate(const GrayImage& img, int cx, int cy, int rx, int ry, double thr1) {
  RegionAccumulator acc(img.at(cx, cy), thr1);
  for (int y = cy - ry; y <= cy + ry; ++y) acc.add_row(img, y, cx - rx, cx + rx);
  return acc;
}

}  // namespace

double region_purity(const GrayImage& img, int cx, int cy, int rx, int ry, double thr1) {
  check_rect(img, cx, cy, rx, ry);
  return accumulate(img, cx, cy, rx, ry, thr1).purity();
}

RegionStats region_stats(const GrayImage& img, int cx, int cy, int rx, int ry) {
  check_rect(img, cx, cy, rx, ry);
  const auto acc = accumulate(img, cx, cy, rx, ry, 0.0);
  return {acc.mean(), acc.variance(), acc.min(), acc.max()};
}

GranularRect grow_region(const GrayImage& img, int cx, int cy, const SearchParams& params,
                         double& threshold) {
  check_rect(img, cx, cy, 0, 0);
  RegionAccumulator acc(img.at(cx, cy), params.thr1);
  acc.add(img.at(cx, cy));

  int rx = 0;
  int ry = 0;
  std::array<bool, 2> stopped{false, false};
  int axis = 0;  // 0 = x, 1 = y; strict alternation
  while (!(stopped[0] && stopped[1])) {
    if (stopped[static_cast<std::size_t>(axis)]) {
      axis ^= 1;
      continue;
    }
    RegionAccumulator candidate = acc;
    if (axis == 0) {
      const int nx = rx + 1;
      if (cx - nx < 0 || cx + nx >= img.width()) {
        stopped[0] = true;  // border: no threshold bump
        axis ^= 1;
        continue;
      }
      candidate.add_column(img, cx - nx, cy - ry, cy + ry);
      candidate.add_column(img, cx + nx, cy - ry, cy + ry);
    } else {
      const int ny = ry + 1;
      if (cy - ny < 0 || cy + ny >= img.height()) {
        stopped[1] = true;
        axis ^= 1;
        continue;
      }
      candidate.add_row(img, cy - ny, cx - rx, cx + rx);
      candidate.add_row(img, cy + ny, cx - rx, cx + rx);
    }

    if (candidate.purity() < threshold || candidate.variance() > params.var_thr) {
      stopped[static_cast<std::size_t>(axis)] = true;
    } else {
      acc = candidate;
      (axis == 0 ? rx : ry) += 1;
    }
    threshold *= params.growth;
    axis ^= 1;
  }

  GranularRect rect;
  rect.cx = cx;
  rect.cy = cy;
  rect.rx = rx;
  rect.ry = ry;
  rect.purity = acc.purity();
  rect.variance = acc.variance();
  rect.v_mean = acc.mean();
  rect.v_min = acc.min();
  rect.v_max = acc.max();
  return rect;
}

GranularRect grow_region(const GrayImage& img, int cx, int cy, const SearchParams& params) {
  double threshold = params.p_thr;
  return grow_region(img, cx, cy, params, threshold);
}

std::vector<std::uint32_t> seed_order(const GradientMap& grad) {
  std::vector<std::uint32_t> order(grad.size());
  std::iota(order.begin(), order.end(), 0u);
  const auto values = grad.values();
  std::sort(order.begin(), order.end(), [&values](std::uint32_t a, std::uint32_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  return order;
}

std::vector<GranularRect> partition(const GrayImage& img, const SearchParams& params) {
  params.validate();
  const GradientMap grad = gradient_magnitude(gaussian_smooth(img, params.sigma), params.gradient);
  const std::vector<std::uint32_t> order = seed_order(grad);

  const int w = img.width();
  std::vector<std::uint8_t> visited(img.size(), 0);
  std::size_t remaining = img.size();
  std::size_t cursor = 0;
  double threshold = params.p_thr;

  std::vector<GranularRect> rects;
  while (remaining > 0) {
    while (visited[order[cursor]] != 0) ++cursor;
    const std::uint32_t seed = order[cursor];
    if (params.schedule == ThresholdSchedule::kPerRegion) threshold = params.p_thr;

    GranularRect rect = grow_region(img, static_cast<int>(seed % static_cast<std::uint32_t>(w)),
                                    static_cast<int>(seed / static_cast<std::uint32_t>(w)),
                                    params, threshold);
    rect.id = static_cast<std::uint32_t>(rects.size());
    for (int y = rect.y0(); y <= rect.y1(); ++y) {
      for (int x = rect.x0(); x <= rect.x1(); ++x) {
        auto& flag = visited[img.index(x, y)];
        if (flag == 0) {
          flag = 1;
          --remaining;
        }
      }
    }
    rects.push_back(rect);
  }
  return rects;
}

double coverage_redundancy(const std::vector<GranularRect>& rects, int width, int height) {
  double covered = 0.0;
  for (const auto& r : rects) covered += static_cast<double>(r.area());
  return covered / (static_cast<double>(width) * static_cast<double>(height));
}

}  // namespace grig
