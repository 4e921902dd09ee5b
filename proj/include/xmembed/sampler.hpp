#pragma once

#include <span>
#include <utility>
#include <vector>

#include "xmembed/graph.hpp"
#include "xmembed/rng.hpp"

namespace xmembed {

// Walker alias table: O(n) construction, O(1) draws from a fixed discrete
// distribution proportional to the given weights.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }

  std::size_t sample(Rng& rng) const {
    const std::size_t column = rng.uniform_index(prob_.size());
    return rng.uniform01() < prob_[column] ? column : alias_[column];
  }

  double prob(std::size_t i) const { return prob_[i]; }
  std::size_t alias(std::size_t i) const { return alias_[i]; }

  // Exact sampling probabilities implied by the prob/alias arrays.
  std::vector<double> induced_probabilities() const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

// Noise distribution for negative sampling: P(v) proportional to
// degree(v)^exponent over the vertices of one kind.
class NoiseDistribution {
 public:
  NoiseDistribution(const TripartiteGraph& graph, VertexKind kind, double exponent = 0.75);

  VertexId sample(Rng& rng) const { return support_[table_.sample(rng)]; }

  VertexKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  std::span<const VertexId> support() const { return support_; }

  // (vertex, probability) pairs over the support, for verification.
  std::vector<std::pair<VertexId, double>> probabilities() const;

 private:
  struct Support {
    std::vector<VertexId> vertices;
    std::vector<double> weights;
  };
  static Support build_support(const TripartiteGraph& graph, VertexKind kind, double exponent);
  NoiseDistribution(VertexKind kind, double exponent, Support support);

  VertexKind kind_;
  double exponent_;
  std::vector<VertexId> support_;
  AliasTable table_;
};

// Draws edges with probability proportional to weight and expands each
// undirected edge into one of its two directions with equal probability.
class EdgeSampler {
 public:
  explicit EdgeSampler(const TripartiteGraph& graph);

  std::size_t sample_edge_index(Rng& rng) const { return table_.sample(rng); }

  // (source, target) of a directed edge.
  std::pair<VertexId, VertexId> sample(Rng& rng) const {
    const Edge& e = graph_->edge(table_.sample(rng));
    return rng.coin() ? std::pair{e.a, e.b} : std::pair{e.b, e.a};
  }

 private:
  const TripartiteGraph* graph_;
  AliasTable table_;
};

}  // namespace xmembed
