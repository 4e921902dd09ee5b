#include "xmembed/sampler.hpp"

#include <cmath>

namespace xmembed {

AliasTable::AliasTable(std::span<const double> weights) {
  if (weights.empty()) throw InvalidInputError("alias table needs at least one weight");

  const std::size_t n = weights.size();
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0)
      throw InvalidInputError("alias table weights must be positive and finite");
    total += w;
  }

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

  std::vector<std::size_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);

  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers hold probability 1 up to rounding.
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::vector<double> AliasTable::induced_probabilities() const {
  const std::size_t n = prob_.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t column = 0; column < n; ++column) {
    p[column] += prob_[column] / static_cast<double>(n);
    p[alias_[column]] += (1.0 - prob_[column]) / static_cast<double>(n);
  }
  return p;
}

NoiseDistribution::Support NoiseDistribution::build_support(const TripartiteGraph& graph,
                                                            VertexKind kind, double exponent) {
  Support support;
  for (VertexId v : graph.vertices_of(kind)) {
    const double w = std::pow(graph.degree(v), exponent);
    if (std::isfinite(w) && w > 0.0) {
      support.vertices.push_back(v);
      support.weights.push_back(w);
    }
  }
  if (support.vertices.empty())
    throw EmptySupportError(std::string("no ") + std::string(kind_name(kind)) +
                            " vertices with positive sampling weight");
  return support;
}

NoiseDistribution::NoiseDistribution(const TripartiteGraph& graph, VertexKind kind,
                                     double exponent)
    : NoiseDistribution(kind, exponent, build_support(graph, kind, exponent)) {}

NoiseDistribution::NoiseDistribution(VertexKind kind, double exponent, Support support)
    : kind_(kind),
      exponent_(exponent),
      support_(std::move(support.vertices)),
      table_(support.weights) {}

std::vector<std::pair<VertexId, double>> NoiseDistribution::probabilities() const {
  const auto induced = table_.induced_probabilities();
  std::vector<std::pair<VertexId, double>> out;
  out.reserve(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) out.emplace_back(support_[i], induced[i]);
  return out;
}

EdgeSampler::EdgeSampler(const TripartiteGraph& graph)
    : graph_(&graph), table_([&graph] {
        if (graph.edge_count() == 0) throw EmptySupportError("graph has no edges to sample");
        std::vector<double> weights;
        weights.reserve(graph.edge_count());
        for (const auto& e : graph.edges()) weights.push_back(e.weight);
        return AliasTable(weights);
      }()) {}

}  // namespace xmembed
