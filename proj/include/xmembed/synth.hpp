#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xmembed/eval.hpp"
#include "xmembed/features.hpp"
#include "xmembed/graph.hpp"

namespace xmembed {

// Clustered toy corpus: cluster c owns keywords kw_c{c}_{j}; every song and
// image links to 1-3 keywords of its own cluster (weight 1), image features
// sit near a per-cluster centroid, and ground-truth relevance is the
// own-cluster keyword set. Popularity is concentrated on cluster 0 so the
// popularity baseline's candidate pool stays single-cluster.
struct SynthConfig {
  std::size_t clusters = 2;
  std::size_t songs_per_cluster = 10;
  std::size_t images_per_cluster = 10;
  std::size_t keywords_per_cluster = 3;
  std::uint64_t seed = 42;
  std::size_t feature_dim = 16;
  double feature_noise = 0.5;
  double centroid_scale = 10.0;
};

struct SyntheticCorpus {
  explicit SyntheticCorpus(std::size_t feature_dim) : features(feature_dim) {}

  TripartiteGraph graph;
  FeatureStore features;
  std::vector<Query> queries;  // one per image; keyword = the image's first keyword
  GroundTruth ground_truth;
  PopularityTable popularity;

  StringMap<std::size_t> song_cluster;
  StringMap<std::size_t> image_cluster;

  // Raw corpus files, for materializing on disk.
  std::vector<std::string> keywords;
  std::vector<SongLyrics> lyrics;
  std::vector<ManifestRow> manifest;
};

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config);

// Writes lyrics.tsv, keywords.txt, manifest.tsv, features.tsv, queries.tsv,
// expansions.tsv and popularity.tsv under dir (created if needed).
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace xmembed
