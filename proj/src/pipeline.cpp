#include "grig/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "grig/imaging.hpp"

namespace grig {

SourceFormat parse_source_format(const std::string& name) {
  if (name == "mnist") return SourceFormat::kMnist;
  if (name == "cifar10") return SourceFormat::kCifar10;
  if (name == "image-dir") return SourceFormat::kImageDir;
  throw InvalidArgumentError("unknown source format \"" + name +
                             "\" (expected mnist, cifar10 or image-dir)");
}

const char* to_string(SourceFormat format) {
  switch (format) {
    case SourceFormat::kMnist: return "mnist";
    case SourceFormat::kCifar10: return "cifar10";
    case SourceFormat::kImageDir: return "image-dir";
  }
  return "unknown";
}

namespace {

std::filesystem::path guess_mnist_labels(const std::filesystem::path& images) {
  std::string name = images.filename().string();
  const auto pos = name.find("images-idx3");
  if (pos == std::string::npos) {
    throw InvalidArgumentError("MNIST input needs --labels (cannot derive it from " + name + ")");
  }
  name.replace(pos, 11, "labels-idx1");
  return images.parent_path() / name;
}

std::vector<std::filesystem::path> cifar_batches(const std::filesystem::path& input) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin" &&
        entry.path().filename() != "batches.meta.bin") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no CIFAR-10 .bin batches in " + input.string());
  return files;
}

std::vector<std::string> digit_names() {
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back(std::to_string(i));
  return names;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ImageSource open_source(const SourceSpec& spec) {
  ImageSource src;
  switch (spec.format) {
    case SourceFormat::kMnist: {
      const auto labels = spec.labels.empty() ? guess_mnist_labels(spec.input) : spec.labels;
      auto records = std::make_shared<std::vector<LabeledImage>>(
          decode_mnist_idx(read_file(spec.input), read_file(labels)));
      src.count = records->size();
      src.class_count = 10;
      src.class_names = digit_names();
      src.load = [records](std::size_t i) { return (*records)[i]; };
      break;
    }
    case SourceFormat::kCifar10: {
      auto records = std::make_shared<std::vector<CifarRecord>>();
      for (const auto& batch : cifar_batches(spec.input)) {
        auto part = decode_cifar10(read_file(batch));
        records->insert(records->end(), std::make_move_iterator(part.begin()),
                        std::make_move_iterator(part.end()));
      }
      src.count = records->size();
      src.class_count = 10;
      src.class_names = {"airplane", "automobile", "bird", "cat", "deer",
                         "dog",      "frog",       "horse", "ship", "truck"};
      src.load = [records](std::size_t i) {
        const auto& rec = (*records)[i];
        return LabeledImage{to_grayscale(rec.image), rec.label};
      };
      break;
    }
    case SourceFormat::kImageDir: {
      auto listing = std::make_shared<ImageDirListing>(list_image_dir(spec.input));
      src.count = listing->entries.size();
      src.class_count = static_cast<std::uint16_t>(listing->class_names.size());
      src.class_names = listing->class_names;
      src.load = [listing](std::size_t i) {
        const auto& entry = listing->entries[i];
        return LabeledImage{load_image(entry.path), entry.label};
      };
      break;
    }
  }
  if (spec.limit > 0) src.count = std::min(src.count, spec.limit);
  return src;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  pool.clear();  // joins
  if (error) std::rethrow_exception(error);
}

GraphDataset convert_source(const ImageSource& source, const SearchParams& params,
                            unsigned jobs) {
  params.validate();
  GraphDataset ds;
  ds.feature_dim = static_cast<std::uint16_t>(kFeatureDim);
  ds.class_count = source.class_count;
  ds.graphs.resize(source.count);
  std::vector<std::pair<int, int>> sizes(source.count);

  parallel_for(source.count, jobs, [&](std::size_t i) {
    const LabeledImage rec = source.load(i);
    if (rec.label < 0 || rec.label >= source.class_count) {
      throw InvariantError("record " + std::to_string(i) + " has label " +
                           std::to_string(rec.label));
    }
    ds.graphs[i] = to_labeled_graph(build_graph(rec.image, params),
                                    static_cast<std::uint16_t>(rec.label));
    sizes[i] = {rec.image.width(), rec.image.height()};
  });

  ds.metadata.params = params;
  ds.metadata.created = utc_timestamp();
  ds.metadata.class_names = source.class_names;
  if (!sizes.empty() && std::all_of(sizes.begin(), sizes.end(),
                                    [&](const auto& s) { return s == sizes.front(); })) {
    ds.metadata.image_width = sizes.front().first;
    ds.metadata.image_height = sizes.front().second;
  }
  return ds;
}

}  // namespace grig
