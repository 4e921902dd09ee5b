#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "xmembed/graph.hpp"

namespace xmembed {

// Second order scores a pair as vertex-vector(u) . context-vector(v);
// first order as the dot of the two vertex vectors.
enum class ProximityOrder { First, Second };

struct TrainConfig {
  std::size_t dim = 128;
  std::size_t negatives = 5;        // K noise draws per positive
  double initial_lr = 0.025;        // rho_0
  std::uint64_t total_samples = 0;  // T, required
  double noise_exponent = 0.75;
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  ProximityOrder order = ProximityOrder::Second;
};

struct TrainStats {
  std::uint64_t positive_updates = 0;
  std::uint64_t negative_updates = 0;
  std::uint64_t skipped_negatives = 0;
};

// Per-vertex representation and context matrices (row-major, f64) plus a
// copy of the vertex table, so a saved model is self-contained. Retrieval
// consumes vertex vectors only; context vectors exist for training.
class EmbeddingModel {
 public:
  // Rows follow the order of `vertices`; ids are renumbered to match.
  EmbeddingModel(std::vector<Vertex> vertices, std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vertices_.size(); }

  std::span<const double> vertex_vector(VertexId id) const;
  std::span<double> vertex_vector(VertexId id);
  std::span<const double> context_vector(VertexId id) const;
  std::span<double> context_vector(VertexId id);

  const Vertex& vertex(VertexId id) const;
  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::optional<VertexId> find(VertexKind kind, std::string_view external_id) const;

  bool all_finite() const;

  double* vertex_data() { return vertex_vectors_.data(); }
  double* context_data() { return context_vectors_.data(); }
  const std::vector<double>& vertex_matrix() const { return vertex_vectors_; }
  const std::vector<double>& context_matrix() const { return context_vectors_; }

 private:
  void check_vertex_id(VertexId id) const;

  std::size_t dim_;
  std::vector<Vertex> vertices_;
  std::vector<double> vertex_vectors_;
  std::vector<double> context_vectors_;
  std::array<StringMap<VertexId>, kVertexKindCount> index_;
};

// Exact logistic function with the input clamped to [-30, 30].
double sigmoid(double x);

// Vertex vectors i.i.d. uniform in [-0.5/dim, 0.5/dim], context vectors zero.
EmbeddingModel init_model(const TripartiteGraph& graph, std::size_t dim, std::uint64_t seed);

// Second-order score: vertex_vector(u) . context_vector(v).
double pair_score(const EmbeddingModel& model, VertexId u, VertexId v);

// -log sigma(s) for a positive pair, -log sigma(-s) for a noise pair.
double edge_loss(double score, bool positive);

struct PairGradient {
  std::vector<double> wrt_vertex;   // d loss / d vertex_vector(u)
  std::vector<double> wrt_context;  // d loss / d context_vector(v)
};
PairGradient step_gradient(const EmbeddingModel& model, VertexId u, VertexId v, bool positive);

// SGD over sampled directed edges with negative sampling. Deterministic for
// workers == 1; with more workers updates are applied without locking and
// the result is only statistically reproducible.
EmbeddingModel train(const TripartiteGraph& graph, const TrainConfig& config,
                     TrainStats* stats = nullptr);

// Mean of edge_loss over both directions of every edge, positive labels.
double mean_positive_edge_loss(const TripartiteGraph& graph, const EmbeddingModel& model,
                               ProximityOrder order = ProximityOrder::Second);

enum class ModelFormat { Binary, Text };

// Binary files are bit-exact round trips; the text format stores the vertex
// matrix only. load_model detects the format from the leading bytes.
void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format = ModelFormat::Binary);
EmbeddingModel load_model(const std::filesystem::path& path);

}  // namespace xmembed
