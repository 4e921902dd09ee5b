#include "xmembed/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "io_util.hpp"
#include "xmembed/rng.hpp"

namespace xmembed {

namespace {

std::string keyword_name(std::size_t cluster, std::size_t index) {
  return "kw_c" + std::to_string(cluster) + "_" + std::to_string(index);
}

// Draws 1-3 distinct indices from [0, pool) via a partial Fisher-Yates pass.
std::vector<std::size_t> pick_indices(Rng& rng, std::size_t pool, std::vector<std::size_t>& scratch) {
  scratch.resize(pool);
  for (std::size_t i = 0; i < pool; ++i) scratch[i] = i;
  const std::size_t count = 1 + rng.uniform_index(std::min<std::size_t>(3, pool));
  for (std::size_t i = 0; i < count; ++i)
    std::swap(scratch[i], scratch[i + rng.uniform_index(pool - i)]);
  return {scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config) {
  if (config.clusters == 0 || config.songs_per_cluster == 0 || config.images_per_cluster == 0 ||
      config.keywords_per_cluster == 0)
    throw InvalidInputError("all synthetic corpus counts must be at least 1");
  if (config.feature_dim == 0) throw InvalidInputError("feature_dim must be at least 1");
  if (!(config.feature_noise >= 0.0) || !std::isfinite(config.feature_noise))
    throw InvalidInputError("feature_noise must be a nonnegative real");
  if (!std::isfinite(config.centroid_scale))
    throw InvalidInputError("centroid_scale must be finite");

  SyntheticCorpus corpus(config.feature_dim);
  Rng rng(config.seed);
  std::vector<std::size_t> scratch;

  for (std::size_t c = 0; c < config.clusters; ++c)
    for (std::size_t j = 0; j < config.keywords_per_cluster; ++j)
      corpus.keywords.push_back(keyword_name(c, j));

  // Songs: lyrics are the chosen keywords themselves, so every song-keyword
  // edge built from them carries weight 1.
  std::vector<std::unordered_set<std::size_t>> used(config.clusters);
  for (std::size_t c = 0; c < config.clusters; ++c) {
    for (std::size_t i = 0; i < config.songs_per_cluster; ++i) {
      const std::string song = "song_c" + std::to_string(c) + "_" + std::to_string(i);
      SongLyrics entry{song, {}};
      for (std::size_t j : pick_indices(rng, config.keywords_per_cluster, scratch)) {
        entry.tokens.push_back(keyword_name(c, j));
        used[c].insert(j);
      }
      corpus.lyrics.push_back(std::move(entry));
      corpus.song_cluster.emplace(song, c);
    }
  }

  // Images draw only keywords some song already uses, so every manifest row
  // resolves against the song-built keyword vertices.
  std::vector<std::vector<std::size_t>> active(config.clusters);
  for (std::size_t c = 0; c < config.clusters; ++c)
    for (std::size_t j = 0; j < config.keywords_per_cluster; ++j)
      if (used[c].contains(j)) active[c].push_back(j);

  for (std::size_t c = 0; c < config.clusters; ++c) {
    for (std::size_t i = 0; i < config.images_per_cluster; ++i) {
      const std::string image = "img_c" + std::to_string(c) + "_" + std::to_string(i);
      std::string first_keyword;
      for (std::size_t pick : pick_indices(rng, active[c].size(), scratch)) {
        const std::string keyword = keyword_name(c, active[c][pick]);
        if (first_keyword.empty()) first_keyword = keyword;
        corpus.manifest.push_back({image, keyword, std::nullopt});
      }

      std::vector<double> feature(config.feature_dim, 0.0);
      feature[c % config.feature_dim] = config.centroid_scale;
      for (double& x : feature) x += config.feature_noise * rng.uniform(-1.0, 1.0);

      corpus.queries.push_back({image, first_keyword, feature});
      corpus.features.insert(image, std::move(feature));
      corpus.image_cluster.emplace(image, c);
    }
  }

  build_song_keyword_edges(corpus.graph, corpus.lyrics, corpus.keywords);
  build_image_keyword_edges(corpus.graph, corpus.manifest);

  for (std::size_t c = 0; c < config.clusters; ++c) {
    StringSet cluster_set;
    for (std::size_t j = 0; j < config.keywords_per_cluster; ++j)
      cluster_set.emplace(keyword_name(c, j));
    for (std::size_t j = 0; j < config.keywords_per_cluster; ++j)
      corpus.ground_truth.expansion[keyword_name(c, j)] = cluster_set;
  }
  corpus.ground_truth.n = config.keywords_per_cluster;
  set_song_tokens(corpus.ground_truth, corpus.lyrics);

  // Popularity lives entirely in cluster 0: the top-of-table pool the POP
  // baseline draws from then spans exactly one cluster.
  for (std::size_t i = 0; i < config.songs_per_cluster; ++i)
    corpus.popularity.counts.emplace("song_c0_" + std::to_string(i),
                                     config.songs_per_cluster - i);

  return corpus;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    auto out = detail::open_output(dir / "lyrics.tsv");
    for (const SongLyrics& song : corpus.lyrics) {
      out << song.song_id << '\t';
      for (std::size_t i = 0; i < song.tokens.size(); ++i) {
        if (i) out << ' ';
        out << song.tokens[i];
      }
      out << '\n';
    }
  }
  {
    auto out = detail::open_output(dir / "keywords.txt");
    for (const std::string& keyword : corpus.keywords) out << keyword << '\n';
  }
  {
    auto out = detail::open_output(dir / "manifest.tsv");
    for (const ManifestRow& row : corpus.manifest) {
      out << row.image_id << '\t' << row.keyword;
      if (row.relevance) out << '\t' << detail::format_double(*row.relevance);
      out << '\n';
    }
  }
  save_features(corpus.features, dir / "features.tsv");
  {
    auto out = detail::open_output(dir / "queries.tsv");
    for (const Query& query : corpus.queries) out << query.image_id << '\t' << query.keyword << '\n';
  }
  {
    // Expansion rows list the keyword's cluster mates (its own expansion set
    // minus itself), most useful first; order within the set is irrelevant
    // to matching, so lexicographic keeps the file deterministic.
    auto out = detail::open_output(dir / "expansions.tsv");
    for (const std::string& keyword : corpus.keywords) {
      const auto entry = corpus.ground_truth.expansion.find(keyword);
      std::vector<std::string> words;
      if (entry != corpus.ground_truth.expansion.end())
        for (const std::string& word : entry->second)
          if (word != keyword) words.push_back(word);
      std::sort(words.begin(), words.end());
      out << keyword;
      if (!words.empty()) {
        out << '\t';
        for (std::size_t i = 0; i < words.size(); ++i) {
          if (i) out << ',';
          out << words[i];
        }
      }
      out << '\n';
    }
  }
  {
    std::vector<std::pair<std::string, std::uint64_t>> rows(corpus.popularity.counts.begin(),
                                                            corpus.popularity.counts.end());
    std::sort(rows.begin(), rows.end());
    auto out = detail::open_output(dir / "popularity.tsv");
    for (const auto& [song, count] : rows) out << song << '\t' << count << '\n';
  }
}

}  // namespace xmembed
