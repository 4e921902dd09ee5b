#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "xmembed/features.hpp"
#include "xmembed/graph.hpp"

namespace xmembed {

using StringSet = std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>;

// Relevance ground truth: a keyword's expansion is the keyword itself plus
// its first n conceptually similar words; a song is relevant to a keyword
// when its lyric tokens intersect the expansion.
struct GroundTruth {
  StringMap<StringSet> expansion;
  StringMap<StringSet> song_tokens;
  std::size_t n = 0;
};

// Expansion file: `keyword<TAB>word1,word2,...`, similar words in relevance
// order. Keeps the first n words per keyword, unioned with the keyword.
GroundTruth load_expansions(const std::filesystem::path& path, std::size_t n);

void set_song_tokens(GroundTruth& truth, std::span<const SongLyrics> lyrics);

// True iff the song's tokens intersect the keyword's expansion set.
bool is_relevant(std::string_view song_id, std::string_view keyword, const GroundTruth& truth);

struct Query {
  std::string image_id;
  std::string keyword;
  std::vector<double> feature;
};

// Query file: `image_id<TAB>keyword`; features joined from the store.
std::vector<Query> load_queries(const std::filesystem::path& path, const FeatureStore& store);

// Ranked song ids for one query, best first.
using Recommender = std::function<std::vector<std::string>(const Query&)>;

// Fraction of queries whose top-k list contains at least one relevant song.
double hit_rate_at_k(std::span<const Query> queries, const Recommender& recommender,
                     const GroundTruth& truth, std::size_t k);

// Per-song variant: the fraction of all recommended songs (over every query's
// top-k list) that are relevant to their query's keyword.
double song_hit_rate_at_k(std::span<const Query> queries, const Recommender& recommender,
                          const GroundTruth& truth, std::size_t k);

// Mean over queries of (relevant items in the top k) / k.
double precision_at_k(std::span<const std::vector<bool>> labels, std::size_t k);

// Keyword-matching baseline: songs adjacent to the keyword, by descending
// edge weight (ties by ascending song id), truncated to k.
std::vector<std::string> km_baseline(std::string_view keyword, const TripartiteGraph& graph,
                                     std::size_t k);

struct PopularityTable {
  StringMap<std::uint64_t> counts;
};

// Popularity file: `song_id<TAB>play_count`.
PopularityTable load_popularity(const std::filesystem::path& path);

inline constexpr std::size_t kPopularityPoolSize = 100;

// Popularity baseline: k songs sampled uniformly without replacement from
// the 100 most-played (ties by ascending id; smaller tables use all songs).
std::vector<std::string> pop_baseline(const PopularityTable& popularity, std::size_t k,
                                      std::uint64_t seed);

}  // namespace xmembed
