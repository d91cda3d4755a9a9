#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "grig/image.hpp"

namespace grig {

enum class GradientOperator { kSobel };

/// Luminance round(0.299 R + 0.587 G + 0.114 B), clamped to [0, 255].
GrayImage to_grayscale(const RgbImage& img);

/// Separable Gaussian blur with radius ceil(3 sigma), a normalized kernel and
/// edge-replicated borders. Throws InvalidArgumentError for sigma <= 0.
RealImage gaussian_smooth(const GrayImage& img, double sigma);
RealImage gaussian_smooth(const RealImage& img, double sigma);

/// Normalized 1D Gaussian weights, index 0 is offset -radius.
std::vector<double> gaussian_kernel(double sigma);

/// 3x3 Sobel responses with edge replication; L2 magnitude.
GradientMap gradient_magnitude(const RealImage& img,
                               GradientOperator op = GradientOperator::kSobel);

// --- dataset readers -------------------------------------------------------

/// Decodes an MNIST IDX image file (magic 0x00000803) and label file
/// (magic 0x00000801). Throws BadMagicError, TruncatedError or
/// CountMismatchError.
std::vector<LabeledImage> decode_mnist_idx(std::span<const std::uint8_t> image_bytes,
                                           std::span<const std::uint8_t> label_bytes);

struct IdxEncoded {
  std::vector<std::uint8_t> images;
  std::vector<std::uint8_t> labels;
};

/// Inverse of decode_mnist_idx. All images must share one size.
IdxEncoded encode_mnist_idx(std::span<const LabeledImage> records);

/// CIFAR-10 binary batch: per record one label byte plus 3072 channel-planar
/// bytes (32x32 R, then G, then B).
struct CifarRecord {
  RgbImage image;
  int label = 0;
};
std::vector<CifarRecord> decode_cifar10(std::span<const std::uint8_t> bytes);

/// Binary (P5) or ASCII (P2) PGM, maxval <= 255.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

/// PNG of any color type; color inputs are reduced to luminance.
GrayImage decode_png(std::span<const std::uint8_t> bytes);

/// Dispatches on file signature (PNG or PGM).
GrayImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// A directory whose subdirectories name the classes. Class ids follow the
/// sorted subdirectory names; files inside each class are sorted by name.
struct ImageDirEntry {
  std::filesystem::path path;
  int label = 0;
};
struct ImageDirListing {
  std::vector<std::string> class_names;
  std::vector<ImageDirEntry> entries;
};
ImageDirListing list_image_dir(const std::filesystem::path& root);

}  // namespace grig
