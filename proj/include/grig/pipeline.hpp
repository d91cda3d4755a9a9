#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "grig/serialize.hpp"

namespace grig {

enum class SourceFormat { kMnist, kCifar10, kImageDir };

SourceFormat parse_source_format(const std::string& name);
const char* to_string(SourceFormat format);

struct SourceSpec {
  SourceFormat format = SourceFormat::kMnist;
  std::filesystem::path input;
  std::filesystem::path labels;  // MNIST only
  std::size_t limit = 0;         // 0 = everything
};

/// Lazily decoded image collection; `load(i)` is safe to call concurrently.
struct ImageSource {
  std::size_t count = 0;
  std::uint16_t class_count = 0;
  std::vector<std::string> class_names;
  std::function<LabeledImage(std::size_t)> load;
};

ImageSource open_source(const SourceSpec& spec);

/// Runs fn(i) for i in [0, count) on `jobs` workers (jobs <= 1 runs inline).
/// The first exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Builds one graph per image; output order is the input order for any `jobs`.
GraphDataset convert_source(const ImageSource& source, const SearchParams& params,
                            unsigned jobs);

}  // namespace grig
