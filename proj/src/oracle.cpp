#include "grig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace grig::oracle {

std::vector<Edge> brute_edges(std::span<const GranularRect> rects) {
  if (rects.empty()) return {};
  int width = 1;
  int height = 1;
  for (const auto& r : rects) {
    width = std::max(width, r.cx + r.rx + 1);
    height = std::max(height, r.cy + r.ry + 1);
  }
  const std::size_t words = (static_cast<std::size_t>(width) * height + 63) / 64;

  // Each rectangle becomes an explicit set of covered pixels.
  std::vector<std::vector<std::uint64_t>> pixel_sets(rects.size(),
                                                     std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& r = rects[i];
    for (int y = r.cy - r.ry; y <= r.cy + r.ry; ++y) {
      for (int x = r.cx - r.rx; x <= r.cx + r.rx; ++x) {
        const std::size_t bit = static_cast<std::size_t>(y) * width + x;
        pixel_sets[i][bit / 64] |= std::uint64_t{1} << (bit % 64);
      }
    }
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size(); ++j) {
      for (std::size_t w = 0; w < words; ++w) {
        if ((pixel_sets[i][w] & pixel_sets[j][w]) != 0) {
          edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
          break;
        }
      }
    }
  }
  return edges;
}

BruteStats brute_region_stats(const GrayImage& img, const GranularRect& rect, double thr1) {
  const int center = img.at(rect.cx, rect.cy);
  std::int64_t n = 0;
  std::int64_t sum = 0;
  std::int64_t abnormal = 0;
  int lo = 255;
  int hi = 0;
  for (int y = rect.cy - rect.ry; y <= rect.cy + rect.ry; ++y) {
    for (int x = rect.cx - rect.rx; x <= rect.cx + rect.rx; ++x) {
      const int v = img.at(x, y);
      ++n;
      sum += v;
      if (std::abs(static_cast<double>(v) - center) > thr1) ++abnormal;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // Second pass over deviations, scaled by n to stay in integers:
  // var = sum((n v - S)^2) / n^3.
  __int128 dev_sq = 0;
  for (int y = rect.cy - rect.ry; y <= rect.cy + rect.ry; ++y) {
    for (int x = rect.cx - rect.rx; x <= rect.cx + rect.rx; ++x) {
      const __int128 d = static_cast<__int128>(n) * img.at(x, y) - sum;
      dev_sq += d * d;
    }
  }
  const double nd = static_cast<double>(n);
  BruteStats s;
  s.purity = 1.0 - static_cast<double>(abnormal) / nd;
  s.mean = static_cast<double>(sum) / nd;
  s.variance = static_cast<double>(dev_sq) / (nd * nd * nd);
  s.min = lo;
  s.max = hi;
  return s;
}

GradientMap brute_gradient(const GrayImage& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int side = 2 * radius + 1;
  std::vector<double> kernel(static_cast<std::size_t>(side) * side);
  double total = 0.0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const double w = std::exp(-(dx * dx) / (2 * sigma * sigma)) *
                       std::exp(-(dy * dy) / (2 * sigma * sigma));
      kernel[static_cast<std::size_t>((dy + radius) * side + dx + radius)] = w;
      total += w;
    }
  }
  const int w = img.width();
  const int h = img.height();
  auto clamp_x = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clamp_y = [h](int y) { return std::clamp(y, 0, h - 1); };

  std::vector<double> smooth(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          acc += kernel[static_cast<std::size_t>((dy + radius) * side + dx + radius)] *
                 img.at(clamp_x(x + dx), clamp_y(y + dy));
        }
      }
      smooth[static_cast<std::size_t>(y) * w + x] = acc / total;
    }
  }

  static constexpr int kSobelX[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int kSobelY[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  GradientMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double gx = 0.0;
      double gy = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          const double v =
              smooth[static_cast<std::size_t>(clamp_y(y + j - 1)) * w + clamp_x(x + i - 1)];
          gx += kSobelX[j][i] * v;
          gy += kSobelY[j][i] * v;
        }
      }
      out.at(x, y) = std::hypot(gx, gy);
    }
  }
  return out;
}

GranularRect replay_growth(const GrayImage& img, int cx, int cy, const SearchParams& params,
                           double& threshold) {
  GranularRect r;
  r.cx = cx;
  r.cy = cy;
  bool x_done = false;
  bool y_done = false;
  bool x_turn = true;
  while (!x_done || !y_done) {
    if (x_turn ? x_done : y_done) {
      x_turn = !x_turn;
      continue;
    }
    GranularRect trial = r;
    (x_turn ? trial.rx : trial.ry) += 1;
    const bool inside = trial.cx - trial.rx >= 0 && trial.cx + trial.rx < img.width() &&
                        trial.cy - trial.ry >= 0 && trial.cy + trial.ry < img.height();
    if (!inside) {
      (x_turn ? x_done : y_done) = true;
    } else {
      const BruteStats s = brute_region_stats(img, trial, params.thr1);
      if (s.purity < threshold || s.variance > params.var_thr) {
        (x_turn ? x_done : y_done) = true;
      } else {
        r = trial;
      }
      threshold *= params.growth;
    }
    x_turn = !x_turn;
  }
  const BruteStats s = brute_region_stats(img, r, params.thr1);
  r.purity = s.purity;
  r.variance = s.variance;
  r.v_mean = s.mean;
  r.v_min = s.min;
  r.v_max = s.max;
  return r;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kIdOrder: return "id-order";
    case ViolationKind::kBounds: return "bounds";
    case ViolationKind::kStats: return "stats";
    case ViolationKind::kCoverage: return "coverage";
    case ViolationKind::kSeed: return "seed";
    case ViolationKind::kReplay: return "replay";
  }
  return "unknown";
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kStatTolerance; }

std::string describe(const char* field, double stored, double expected) {
  std::ostringstream s;
  s.precision(17);
  s << field << " stored " << stored << " but recomputes to " << expected;
  return s.str();
}

}  // namespace

PartitionReport verify_partition(const GrayImage& img, const SearchParams& params,
                                 std::span<const GranularRect> rects) {
  PartitionReport report;
  report.rect_count = rects.size();
  auto& out = report.violations;
  const int w = img.width();
  const int h = img.height();

  const GradientMap grad = brute_gradient(img, params.sigma);
  std::vector<bool> visited(static_cast<std::size_t>(w) * h, false);
  double threshold = params.p_thr;

  for (std::size_t i = 0; i < rects.size(); ++i) {
    const GranularRect& r = rects[i];
    const auto id = static_cast<std::int64_t>(i);
    if (r.id != i) {
      out.push_back({ViolationKind::kIdOrder, id,
                     "rect at position " + std::to_string(i) + " has id " + std::to_string(r.id)});
    }
    if (r.rx < 0 || r.ry < 0 || r.cx - r.rx < 0 || r.cy - r.ry < 0 || r.cx + r.rx >= w ||
        r.cy + r.ry >= h) {
      out.push_back({ViolationKind::kBounds, id, "rectangle leaves the image"});
      continue;
    }

    const BruteStats s = brute_region_stats(img, r, params.thr1);
    if (!near(s.purity, r.purity)) {
      out.push_back({ViolationKind::kStats, id, describe("purity", r.purity, s.purity)});
    }
    if (!near(s.variance, r.variance)) {
      out.push_back({ViolationKind::kStats, id, describe("variance", r.variance, s.variance)});
    }
    if (!near(s.mean, r.v_mean)) {
      out.push_back({ViolationKind::kStats, id, describe("mean", r.v_mean, s.mean)});
    }
    if (!near(s.min, r.v_min) || !near(s.max, r.v_max)) {
      out.push_back({ViolationKind::kStats, id, "min/max do not match the covered pixels"});
    }

    // The seed must be unvisited and carry the smallest gradient among all
    // unvisited pixels (up to floating-point noise between filter routes).
    const std::size_t seed = static_cast<std::size_t>(r.cy) * w + r.cx;
    if (visited[seed]) {
      out.push_back({ViolationKind::kSeed, id, "center pixel was already visited"});
    } else {
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < visited.size(); ++p) {
        if (!visited[p]) lowest = std::min(lowest, grad.values()[p]);
      }
      if (grad.values()[seed] > lowest + kGradientTieTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "seed gradient " << grad.values()[seed] << " exceeds unvisited minimum "
            << lowest;
        out.push_back({ViolationKind::kSeed, id, msg.str()});
      }
    }

    if (params.schedule == ThresholdSchedule::kPerRegion) threshold = params.p_thr;
    const GranularRect replay = replay_growth(img, r.cx, r.cy, params, threshold);
    if (replay.rx != r.rx || replay.ry != r.ry || !near(replay.purity, r.purity) ||
        !near(replay.variance, r.variance)) {
      out.push_back({ViolationKind::kReplay, id,
                     "regrowing from the center gives half-extents (" +
                         std::to_string(replay.rx) + "," + std::to_string(replay.ry) +
                         "), stored (" + std::to_string(r.rx) + "," + std::to_string(r.ry) +
                         ")"});
    }

    for (int y = r.cy - r.ry; y <= r.cy + r.ry; ++y) {
      for (int x = r.cx - r.rx; x <= r.cx + r.rx; ++x) {
        visited[static_cast<std::size_t>(y) * w + x] = true;
      }
    }
  }

  const auto uncovered = std::count(visited.begin(), visited.end(), false);
  if (uncovered > 0) {
    out.push_back({ViolationKind::kCoverage, -1,
                   std::to_string(uncovered) + " pixels are not covered by any rectangle"});
  }
  return report;
}

}  // namespace grig::oracle
