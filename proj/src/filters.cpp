#include <cmath>
#include <vector>

#include "grig/imaging.hpp"

namespace grig {

RealImage to_real(const GrayImage& img) {
  std::vector<double> values(img.values().begin(), img.values().end());
  return RealImage(img.width(), img.height(), std::move(values));
}

GrayImage to_grayscale(const RgbImage& img) {
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (img.red.size() != n || img.green.size() != n || img.blue.size() != n) {
    throw InvalidArgumentError("RGB channel sizes do not match image dimensions");
  }
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = 0.299 * img.red[i] + 0.587 * img.green[i] + 0.114 * img.blue[i];
    const double r = std::round(y);
    out[i] = static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
  }
  return GrayImage(img.width, img.height, std::move(out));
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgumentError("gaussian sigma must be positive, got " + std::to_string(sigma));
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

RealImage gaussian_smooth(const RealImage& img, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = img.width();
  const int h = img.height();

  RealImage tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * img.clamped(x + i, y);
      }
      tmp.at(x, y) = acc;
    }
  }
  RealImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * tmp.clamped(x, y + i);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

RealImage gaussian_smooth(const GrayImage& img, double sigma) {
  return gaussian_smooth(to_real(img), sigma);
}

GradientMap gradient_magnitude(const RealImage& img, GradientOperator op) {
  switch (op) {
    case GradientOperator::kSobel:
      break;
  }
  const int w = img.width();
  const int h = img.height();
  GradientMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Separable form: smooth [1 2 1] across, difference [-1 0 1] along.
      const double gx = (img.clamped(x + 1, y - 1) - img.clamped(x - 1, y - 1)) +
                        2.0 * (img.clamped(x + 1, y) - img.clamped(x - 1, y)) +
                        (img.clamped(x + 1, y + 1) - img.clamped(x - 1, y + 1));
      const double gy = (img.clamped(x - 1, y + 1) - img.clamped(x - 1, y - 1)) +
                        2.0 * (img.clamped(x, y + 1) - img.clamped(x, y - 1)) +
                        (img.clamped(x + 1, y + 1) - img.clamped(x + 1, y - 1));
      out.at(x, y) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

}  // namespace grig
