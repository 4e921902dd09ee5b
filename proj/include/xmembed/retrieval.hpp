#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xmembed/embedding.hpp"
#include "xmembed/features.hpp"

namespace xmembed {

struct ScoredId {
  std::string id;
  double distance;
};

// Plain Euclidean distance; the spans must share a dimension.
double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Vertex vectors of one kind exposed as a knn corpus.
class VertexKindCorpus {
 public:
  VertexKindCorpus(const EmbeddingModel& model, VertexKind kind);

  std::size_t size() const { return rows_.size(); }
  const std::string& id(std::size_t index) const {
    return model_->vertex(rows_[index]).external_id;
  }
  std::span<const double> row(std::size_t index) const {
    return model_->vertex_vector(rows_[index]);
  }

 private:
  const EmbeddingModel* model_;
  std::vector<VertexId> rows_;
};

// The min(k, corpus size) nearest rows by Euclidean distance, ascending, with
// ties broken by ascending id. Corpus must expose size(), id(i) and row(i);
// an empty corpus yields an empty result.
template <typename Corpus>
std::vector<ScoredId> knn(std::span<const double> query, const Corpus& corpus, std::size_t k) {
  if (k == 0) throw InvalidInputError("k must be at least 1");

  const std::size_t n = corpus.size();
  std::vector<double> distances(n);
  for (std::size_t i = 0; i < n; ++i) distances[i] = euclidean_distance(query, corpus.row(i));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (distances[a] != distances[b]) return distances[a] < distances[b];
    return corpus.id(a) < corpus.id(b);
  });

  std::vector<ScoredId> result;
  result.reserve(std::min(k, n));
  for (std::size_t i = 0; i < n && i < k; ++i)
    result.push_back({corpus.id(order[i]), distances[order[i]]});
  return result;
}

// Stage 1: the n nearest images to a query feature, in feature space.
std::vector<ScoredId> nearest_images(std::span<const double> query_feature,
                                     const FeatureStore& store, std::size_t n);

// Stage 2: the m nearest songs to an image, in embedding space. The image
// must have a vertex in the model.
std::vector<ScoredId> songs_for_image(std::string_view image_id, const EmbeddingModel& model,
                                      std::size_t m);

struct RetrievalConfig {
  std::size_t n_images = 5;
  std::size_t songs_per_image = 2;
  std::size_t final_k = 10;
};

struct Recommendation {
  std::string song_id;
  double distance;                // embedding distance to the source image
  std::string source_image;
  std::size_t source_image_rank;  // 1-based rank from the image stage
};

// Full cascade: nearest images by feature, then songs near each image in
// embedding space, fused in (image rank, song rank) order with song-level
// deduplication. On shortfall the list is extended with the next-nearest
// songs of image 1 (then image 2, ...) and finally truncated to final_k.
std::vector<Recommendation> recommend(std::span<const double> query_feature,
                                      const FeatureStore& store, const EmbeddingModel& model,
                                      const RetrievalConfig& config = {});

}  // namespace xmembed
