#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "grig/imaging.hpp"

namespace grig {
namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
constexpr std::size_t kCifarSide = 32;
constexpr std::size_t kCifarPlane = kCifarSide * kCifarSide;
constexpr std::size_t kCifarRecord = 1 + 3 * kCifarPlane;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

std::vector<LabeledImage> decode_mnist_idx(std::span<const std::uint8_t> image_bytes,
                                           std::span<const std::uint8_t> label_bytes) {
  if (image_bytes.size() < 16) {
    throw TruncatedError("IDX image header needs 16 bytes, got " +
                         std::to_string(image_bytes.size()));
  }
  if (const auto magic = read_be32(image_bytes, 0); magic != kIdxImageMagic) {
    throw BadMagicError("IDX image magic is " + std::to_string(magic) + ", expected 2051");
  }
  if (label_bytes.size() < 8) {
    throw TruncatedError("IDX label header needs 8 bytes, got " +
                         std::to_string(label_bytes.size()));
  }
  if (const auto magic = read_be32(label_bytes, 0); magic != kIdxLabelMagic) {
    throw BadMagicError("IDX label magic is " + std::to_string(magic) + ", expected 2049");
  }

  const std::size_t count = read_be32(image_bytes, 4);
  const std::size_t rows = read_be32(image_bytes, 8);
  const std::size_t cols = read_be32(image_bytes, 12);
  const std::size_t label_count = read_be32(label_bytes, 4);
  if (count != label_count) {
    throw CountMismatchError("IDX holds " + std::to_string(count) + " images but " +
                             std::to_string(label_count) + " labels");
  }
  const std::size_t plane = rows * cols;
  if (count > 0 && plane == 0) {
    throw FormatError("IDX images have zero area");
  }
  if (image_bytes.size() - 16 < count * plane) {
    throw TruncatedError("IDX image payload truncated: need " + std::to_string(count * plane) +
                         " bytes, have " + std::to_string(image_bytes.size() - 16));
  }
  if (label_bytes.size() - 8 < count) {
    throw TruncatedError("IDX label payload truncated: need " + std::to_string(count) +
                         " bytes, have " + std::to_string(label_bytes.size() - 8));
  }

  std::vector<LabeledImage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto first = image_bytes.begin() + static_cast<std::ptrdiff_t>(16 + i * plane);
    std::vector<std::uint8_t> pixels(first, first + static_cast<std::ptrdiff_t>(plane));
    out.push_back({GrayImage(static_cast<int>(cols), static_cast<int>(rows), std::move(pixels)),
                   static_cast<int>(label_bytes[8 + i])});
  }
  return out;
}

IdxEncoded encode_mnist_idx(std::span<const LabeledImage> records) {
  IdxEncoded out;
  const int w = records.empty() ? 28 : records.front().image.width();
  const int h = records.empty() ? 28 : records.front().image.height();
  put_be32(out.images, kIdxImageMagic);
  put_be32(out.images, static_cast<std::uint32_t>(records.size()));
  put_be32(out.images, static_cast<std::uint32_t>(h));
  put_be32(out.images, static_cast<std::uint32_t>(w));
  put_be32(out.labels, kIdxLabelMagic);
  put_be32(out.labels, static_cast<std::uint32_t>(records.size()));
  for (const auto& rec : records) {
    if (rec.image.width() != w || rec.image.height() != h) {
      throw InvalidArgumentError("IDX records must share one image size");
    }
    if (rec.label < 0 || rec.label > 255) {
      throw InvalidArgumentError("IDX label out of byte range: " + std::to_string(rec.label));
    }
    out.images.insert(out.images.end(), rec.image.values().begin(), rec.image.values().end());
    out.labels.push_back(static_cast<std::uint8_t>(rec.label));
  }
  return out;
}

std::vector<CifarRecord> decode_cifar10(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCifarRecord != 0) {
    throw TruncatedError("CIFAR-10 batch size " + std::to_string(bytes.size()) +
                         " is not a multiple of " + std::to_string(kCifarRecord));
  }
  std::vector<CifarRecord> out(bytes.size() / kCifarRecord);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto rec = bytes.subspan(i * kCifarRecord, kCifarRecord);
    if (rec[0] > 9) {
      throw FormatError("CIFAR-10 record " + std::to_string(i) + " has label " +
                        std::to_string(rec[0]));
    }
    auto& dst = out[i];
    dst.label = rec[0];
    dst.image.width = static_cast<int>(kCifarSide);
    dst.image.height = static_cast<int>(kCifarSide);
    dst.image.red.assign(rec.begin() + 1, rec.begin() + 1 + kCifarPlane);
    dst.image.green.assign(rec.begin() + 1 + kCifarPlane, rec.begin() + 1 + 2 * kCifarPlane);
    dst.image.blue.assign(rec.begin() + 1 + 2 * kCifarPlane, rec.end());
  }
  return out;
}

namespace {

class PgmTokenizer {
 public:
  explicit PgmTokenizer(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t next_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError("PGM: expected a number at byte " + std::to_string(pos_));
    }
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > (1u << 30)) throw FormatError("PGM: number too large");
      ++pos_;
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw BadMagicError("not a P2/P5 PGM file");
  }
  const bool binary = bytes[1] == '5';
  PgmTokenizer tok(bytes);
  const std::size_t w = tok.next_number();
  const std::size_t h = tok.next_number();
  const std::size_t maxval = tok.next_number();
  if (w == 0 || h == 0) throw FormatError("PGM: zero dimension");
  if (maxval == 0 || maxval > 255) {
    throw FormatError("PGM: only 8-bit maxval supported, got " + std::to_string(maxval));
  }
  std::vector<std::uint8_t> pixels(w * h);
  auto scale = [maxval](std::size_t v) {
    if (v > maxval) throw FormatError("PGM: sample exceeds maxval");
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (binary) {
    tok.advance(1);  // single whitespace after maxval
    if (bytes.size() < tok.pos() + pixels.size()) {
      throw TruncatedError("PGM: raster truncated");
    }
    for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = scale(bytes[tok.pos() + i]);
  } else {
    for (auto& p : pixels) p = scale(tok.next_number());
  }
  return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.values().begin(), img.values().end());
  return out;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
    throw FormatError(std::string("PNG: ") + image.message);
  }
  // Read as RGB and apply our own luminance weights so PNG and CIFAR share one
  // color reduction.
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("PNG: " + msg);
  }
  RgbImage color;
  color.width = static_cast<int>(image.width);
  color.height = static_cast<int>(image.height);
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  color.red.resize(n);
  color.green.resize(n);
  color.blue.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    color.red[i] = rgb[3 * i];
    color.green[i] = rgb[3 * i + 1];
    color.blue[i] = rgb[3 * i + 2];
  }
  return to_grayscale(color);
}

GrayImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  static constexpr std::uint8_t kPngSig[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(std::begin(kPngSig), std::end(kPngSig), bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    return decode_pgm(bytes);
  }
  throw FormatError("unsupported image format: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

ImageDirListing list_image_dir(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("not a directory: " + root.string());

  ImageDirListing listing;
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  for (std::size_t label = 0; label < class_dirs.size(); ++label) {
    listing.class_names.push_back(class_dirs[label].filename().string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(class_dirs[label])) {
      if (!entry.is_regular_file()) continue;
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (auto& f : files) listing.entries.push_back({std::move(f), static_cast<int>(label)});
  }
  return listing;
}

}  // namespace grig
