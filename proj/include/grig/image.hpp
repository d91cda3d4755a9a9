#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "grig/errors.hpp"

namespace grig {

/// Row-major 2D plane of scalar samples.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw InvalidArgumentError("image dimensions must be at least 1x1, got " +
                                 std::to_string(width) + "x" + std::to_string(height));
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Plane(int width, int height, std::vector<T> values) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw InvalidArgumentError("image dimensions must be at least 1x1");
    }
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw InvalidArgumentError("value count " + std::to_string(values.size()) +
                                 " does not match " + std::to_string(width) + "x" +
                                 std::to_string(height));
    }
    data_ = std::move(values);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  // Edge-replicating accessor.
  const T& clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[index(x, y)];
  }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// 8-bit intensities in [0, 255].
using GrayImage = Plane<std::uint8_t>;
/// Real-valued intensities, e.g. after smoothing.
using RealImage = Plane<double>;
/// Per-pixel non-negative gradient magnitudes.
using GradientMap = Plane<double>;

/// Channel-planar color image (matches the CIFAR-10 record layout).
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> red;
  std::vector<std::uint8_t> green;
  std::vector<std::uint8_t> blue;
};

struct LabeledImage {
  GrayImage image;
  int label = 0;
};

RealImage to_real(const GrayImage& img);

}  // namespace grig
