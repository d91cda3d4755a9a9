#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grig/graph.hpp"

// Slow reference implementations. Nothing here calls into the production
// partition, statistics, filtering or edge code.
namespace grig::oracle {

/// Pairwise test over materialized pixel sets.
std::vector<Edge> brute_edges(std::span<const GranularRect> rects);

struct BruteStats {
  double purity = 1.0;
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Full recomputation over the covered pixels. Purity is measured against the
/// center pixel with threshold `thr1`.
BruteStats brute_region_stats(const GrayImage& img, const GranularRect& rect, double thr1);

/// Direct 2D Gaussian blur followed by a direct 3x3 Sobel.
GradientMap brute_gradient(const GrayImage& img, double sigma);

/// Step-by-step growth replay using brute_region_stats at every attempt.
GranularRect replay_growth(const GrayImage& img, int cx, int cy, const SearchParams& params,
                           double& threshold);

enum class ViolationKind {
  kIdOrder,
  kBounds,
  kStats,
  kCoverage,
  kSeed,
  kReplay,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::int64_t rect_id = -1;  // -1 when not tied to one rectangle
  std::string detail;
};

struct PartitionReport {
  std::size_t rect_count = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr double kStatTolerance = 1e-9;
inline constexpr double kGradientTieTolerance = 1e-9;

/// Coverage, bounds, statistic recomputation, seed validity and acceptance
/// replay for a rect list claimed to be partition(img, params).
PartitionReport verify_partition(const GrayImage& img, const SearchParams& params,
                                 std::span<const GranularRect> rects);

}  // namespace grig::oracle
