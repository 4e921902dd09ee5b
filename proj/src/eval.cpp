#include "xmembed/eval.hpp"

#include <algorithm>
#include <utility>

#include "io_util.hpp"
#include "xmembed/rng.hpp"

namespace xmembed {

GroundTruth load_expansions(const std::filesystem::path& path, std::size_t n) {
  auto in = detail::open_input(path);
  GroundTruth truth;
  truth.n = n;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.empty() || fields.size() > 2 || fields[0].empty())
      throw ParseError(path.string(), line_no, "expected `keyword<TAB>word1,word2,...`");

    const std::string keyword(fields[0]);
    if (truth.expansion.contains(keyword))
      throw DuplicateKeyError(path.string() + ":" + std::to_string(line_no) +
                              ": duplicate keyword \"" + keyword + "\"");

    StringSet& words = truth.expansion[keyword];
    if (fields.size() == 2) {
      std::size_t kept = 0;
      for (const auto word : detail::split(fields[1], ',')) {
        if (kept == n) break;
        if (word.empty()) continue;
        words.emplace(word);
        ++kept;
      }
    }
    words.emplace(keyword);
  }
  return truth;
}

void set_song_tokens(GroundTruth& truth, std::span<const SongLyrics> lyrics) {
  for (const SongLyrics& song : lyrics) {
    StringSet& tokens = truth.song_tokens[song.song_id];
    tokens.insert(song.tokens.begin(), song.tokens.end());
  }
}

bool is_relevant(std::string_view song_id, std::string_view keyword, const GroundTruth& truth) {
  const auto expansion = truth.expansion.find(keyword);
  if (expansion == truth.expansion.end())
    throw UnresolvedReferenceError("keyword \"" + std::string(keyword) +
                                   "\" has no expansion entry");
  const auto tokens = truth.song_tokens.find(song_id);
  if (tokens == truth.song_tokens.end())
    throw UnresolvedReferenceError("song \"" + std::string(song_id) + "\" has no token set");
  for (const std::string& token : tokens->second)
    if (expansion->second.contains(token)) return true;
  return false;
}

std::vector<Query> load_queries(const std::filesystem::path& path, const FeatureStore& store) {
  auto in = detail::open_input(path);
  std::vector<Query> queries;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError(path.string(), line_no, "expected `image_id<TAB>keyword`");
    const auto feature = store.find(fields[0]);
    if (!feature)
      throw UnresolvedReferenceError(path.string() + ":" + std::to_string(line_no) +
                                     ": query image \"" + std::string(fields[0]) +
                                     "\" has no feature vector");
    const auto row = store.row(*feature);
    queries.push_back({std::string(fields[0]), std::string(fields[1]),
                       std::vector<double>(row.begin(), row.end())});
  }
  return queries;
}

double hit_rate_at_k(std::span<const Query> queries, const Recommender& recommender,
                     const GroundTruth& truth, std::size_t k) {
  if (queries.empty()) throw InvalidInputError("hit rate needs at least one query");
  if (k == 0) throw InvalidInputError("k must be at least 1");

  std::size_t hits = 0;
  for (const Query& query : queries) {
    const auto songs = recommender(query);
    for (std::size_t i = 0; i < songs.size() && i < k; ++i) {
      if (is_relevant(songs[i], query.keyword, truth)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(queries.size());
}

double song_hit_rate_at_k(std::span<const Query> queries, const Recommender& recommender,
                          const GroundTruth& truth, std::size_t k) {
  if (queries.empty()) throw InvalidInputError("hit rate needs at least one query");
  if (k == 0) throw InvalidInputError("k must be at least 1");

  std::size_t relevant = 0;
  std::size_t total = 0;
  for (const Query& query : queries) {
    const auto songs = recommender(query);
    for (std::size_t i = 0; i < songs.size() && i < k; ++i) {
      ++total;
      if (is_relevant(songs[i], query.keyword, truth)) ++relevant;
    }
  }
  if (total == 0) return 0.0;
  return static_cast<double>(relevant) / static_cast<double>(total);
}

double precision_at_k(std::span<const std::vector<bool>> labels, std::size_t k) {
  if (k == 0) throw InvalidInputError("k must be at least 1");
  if (labels.empty()) throw InvalidInputError("precision needs at least one query");

  double sum = 0.0;
  for (const std::vector<bool>& list : labels) {
    if (list.empty()) throw InvalidInputError("every query needs at least one labeled item");
    std::size_t relevant = 0;
    for (std::size_t i = 0; i < list.size() && i < k; ++i)
      if (list[i]) ++relevant;
    sum += static_cast<double>(relevant) / static_cast<double>(k);
  }
  return sum / static_cast<double>(labels.size());
}

std::vector<std::string> km_baseline(std::string_view keyword, const TripartiteGraph& graph,
                                     std::size_t k) {
  const auto vertex = graph.find_vertex(VertexKind::Keyword, keyword);
  if (!vertex)
    throw UnresolvedReferenceError("keyword \"" + std::string(keyword) + "\" is not in the graph");

  // (weight, song id) over the keyword's song neighbors.
  std::vector<std::pair<double, std::string_view>> songs;
  for (const auto& incidence : graph.incident(*vertex)) {
    const Vertex& neighbor = graph.vertex(incidence.neighbor);
    if (neighbor.kind != VertexKind::Song) continue;
    songs.emplace_back(graph.edge(incidence.edge).weight, neighbor.external_id);
  }
  std::sort(songs.begin(), songs.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::string> result;
  result.reserve(std::min(k, songs.size()));
  for (std::size_t i = 0; i < songs.size() && i < k; ++i) result.emplace_back(songs[i].second);
  return result;
}

PopularityTable load_popularity(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  PopularityTable table;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.size() != 2 || fields[0].empty())
      throw ParseError(path.string(), line_no, "expected `song_id<TAB>play_count`");
    const auto count = detail::parse_u64(fields[1]);
    if (!count)
      throw ParseError(path.string(), line_no,
                       "invalid play count \"" + std::string(fields[1]) + "\"");
    if (!table.counts.emplace(std::string(fields[0]), *count).second)
      throw DuplicateKeyError(path.string() + ":" + std::to_string(line_no) +
                              ": duplicate song \"" + std::string(fields[0]) + "\"");
  }
  return table;
}

std::vector<std::string> pop_baseline(const PopularityTable& popularity, std::size_t k,
                                      std::uint64_t seed) {
  if (popularity.counts.empty()) throw InvalidInputError("popularity table is empty");

  // Rank by play count descending, ties by ascending song id.
  std::vector<std::pair<std::uint64_t, std::string_view>> ranked;
  ranked.reserve(popularity.counts.size());
  for (const auto& [song, count] : popularity.counts) ranked.emplace_back(count, song);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::string_view> pool;
  for (std::size_t i = 0; i < ranked.size() && i < kPopularityPoolSize; ++i)
    pool.push_back(ranked[i].second);

  // Partial Fisher-Yates: the first draws of a full shuffle.
  Rng rng(seed);
  const std::size_t take = std::min(k, pool.size());
  std::vector<std::string> result;
  result.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
    result.emplace_back(pool[i]);
  }
  return result;
}

}  // namespace xmembed
