#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmembed/graph.hpp"

namespace xmembed {

// Image id -> fixed-dimension feature vector, immutable after load.
class FeatureStore {
 public:
  explicit FeatureStore(std::size_t dim);

  void insert(std::string id, std::vector<double> values);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }

  const std::string& id(std::size_t index) const { return ids_[index]; }
  std::span<const double> row(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }

  std::optional<std::size_t> find(std::string_view id) const;
  std::span<const double> vector_of(std::string_view id) const;

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<double> values_;
  StringMap<std::size_t> index_;
};

// Feature file: header "N D", then N rows "image_id v1 ... vD".
// save_features writes rows sorted by image id with full precision.
FeatureStore load_features(const std::filesystem::path& path);
void save_features(const FeatureStore& store, const std::filesystem::path& path);

// Stand-in extractor: concatenated per-channel color histograms, each channel
// L1-normalized. rgb holds interleaved 8-bit RGB pixels; the result dimension
// is 3 * bins_per_channel.
std::vector<double> histogram_extract(std::span<const std::uint8_t> rgb,
                                      std::size_t bins_per_channel);

struct PpmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;
};

// Minimal PPM reader (P6 and P3, 8-bit) for the extract-features command.
PpmImage load_ppm(const std::filesystem::path& path);

}  // namespace xmembed
