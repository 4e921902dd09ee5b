#include "xmembed/retrieval.hpp"

#include <cmath>
#include <unordered_set>

namespace xmembed {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InvalidInputError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double delta = a[j] - b[j];
    sum += delta * delta;
  }
  return std::sqrt(sum);
}

VertexKindCorpus::VertexKindCorpus(const EmbeddingModel& model, VertexKind kind)
    : model_(&model) {
  for (const Vertex& vertex : model.vertices())
    if (vertex.kind == kind) rows_.push_back(vertex.id);
}

std::vector<ScoredId> nearest_images(std::span<const double> query_feature,
                                     const FeatureStore& store, std::size_t n) {
  return knn(query_feature, store, n);
}

std::vector<ScoredId> songs_for_image(std::string_view image_id, const EmbeddingModel& model,
                                      std::size_t m) {
  const auto image = model.find(VertexKind::Image, image_id);
  if (!image)
    throw UnresolvedReferenceError("image \"" + std::string(image_id) +
                                   "\" has no embedding vertex");
  const VertexKindCorpus songs(model, VertexKind::Song);
  return knn(model.vertex_vector(*image), songs, m);
}

std::vector<Recommendation> recommend(std::span<const double> query_feature,
                                      const FeatureStore& store, const EmbeddingModel& model,
                                      const RetrievalConfig& config) {
  if (config.n_images == 0) throw InvalidInputError("n_images must be at least 1");
  if (config.songs_per_image == 0) throw InvalidInputError("songs_per_image must be at least 1");
  if (config.final_k == 0) throw InvalidInputError("final_k must be at least 1");

  const auto images = nearest_images(query_feature, store, config.n_images);
  const std::size_t song_count = VertexKindCorpus(model, VertexKind::Song).size();
  if (images.empty() || song_count == 0) return {};

  // The complete song ranking per retrieved image; the fusion stage consumes
  // the first songs_per_image entries and the extension stage the rest.
  std::vector<std::vector<ScoredId>> ranked(images.size());
  for (std::size_t r = 0; r < images.size(); ++r)
    ranked[r] = songs_for_image(images[r].id, model, song_count);

  std::vector<Recommendation> result;
  std::unordered_set<std::string_view> seen;
  auto take = [&](std::size_t r, std::size_t s) {
    const ScoredId& candidate = ranked[r][s];
    if (!seen.insert(candidate.id).second) return;
    result.push_back({candidate.id, candidate.distance, images[r].id, r + 1});
  };

  for (std::size_t r = 0; r < images.size(); ++r)
    for (std::size_t s = 0; s < config.songs_per_image && s < ranked[r].size(); ++s) take(r, s);

  for (std::size_t r = 0; r < images.size() && result.size() < config.final_k; ++r)
    for (std::size_t s = config.songs_per_image;
         s < ranked[r].size() && result.size() < config.final_k; ++s)
      take(r, s);

  if (result.size() > config.final_k) result.resize(config.final_k);
  return result;
}

}  // namespace xmembed
