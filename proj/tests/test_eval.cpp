#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "tempdir.hpp"
#include "xmembed/eval.hpp"
#include "xmembed/synth.hpp"

using namespace xmembed;
using testsupport::TempDir;
using testsupport::read_file;
using testsupport::write_file;

TEST_CASE("load_expansions") {
  TempDir dir;
  const auto path = dir.file("exp.tsv");

  SUBCASE("keeps the first n listed words plus the keyword itself") {
    write_file(path, "snow\twinter,cold,ice\n");
    const auto truth = load_expansions(path, 2);
    const auto& words = truth.expansion.at("snow");
    CHECK(words.size() == 3);
    CHECK(words.contains("snow"));
    CHECK(words.contains("winter"));
    CHECK(words.contains("cold"));
    CHECK_FALSE(words.contains("ice"));
    CHECK(truth.n == 2);
  }
  SUBCASE("n of zero keeps only the keyword") {
    write_file(path, "snow\twinter,cold,ice\n");
    const auto truth = load_expansions(path, 0);
    const auto& words = truth.expansion.at("snow");
    CHECK(words.size() == 1);
    CHECK(words.contains("snow"));
  }
  SUBCASE("n beyond the list keeps everything") {
    write_file(path, "snow\twinter,cold,ice\n");
    const auto truth = load_expansions(path, 10);
    CHECK(truth.expansion.at("snow").size() == 4);
  }
  SUBCASE("a row without related words maps to a singleton") {
    write_file(path, "lonely\n");
    const auto truth = load_expansions(path, 5);
    CHECK(truth.expansion.at("lonely").size() == 1);
  }
  SUBCASE("empty word positions are skipped without consuming the budget") {
    write_file(path, "sea\t,wave,,tide\n");
    const auto truth = load_expansions(path, 2);
    const auto& words = truth.expansion.at("sea");
    CHECK(words.contains("wave"));
    CHECK(words.contains("tide"));
    CHECK(words.size() == 3);
  }
  SUBCASE("comments and blank lines are ignored") {
    write_file(path, "# comment\n\nsnow\twinter\n");
    CHECK(load_expansions(path, 1).expansion.size() == 1);
  }
  SUBCASE("duplicate keywords are rejected with the file position") {
    write_file(path, "snow\twinter\nsnow\tcold\n");
    try {
      load_expansions(path, 1);
      FAIL("expected DuplicateKeyError");
    } catch (const DuplicateKeyError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("malformed rows are rejected") {
    write_file(path, "a\tb\tc\n");
    CHECK_THROWS_AS(load_expansions(path, 1), ParseError);
    write_file(path, "\twinter\n");
    CHECK_THROWS_AS(load_expansions(path, 1), ParseError);
    CHECK_THROWS_AS(load_expansions(dir.file("absent.tsv"), 1), ParseError);
  }
}

TEST_CASE("is_relevant checks token-expansion intersection") {
  GroundTruth truth;
  truth.expansion["snow"] = {"snow", "winter", "cold"};
  std::vector<SongLyrics> lyrics = {
      {"warm_song", {"summer", "heat"}},
      {"cold_song", {"storm", "winter"}},
      {"empty_song", {}},
  };
  set_song_tokens(truth, lyrics);

  CHECK(is_relevant("cold_song", "snow", truth));
  CHECK_FALSE(is_relevant("warm_song", "snow", truth));
  CHECK_FALSE(is_relevant("empty_song", "snow", truth));
  CHECK_THROWS_AS(is_relevant("unknown_song", "snow", truth), UnresolvedReferenceError);
  CHECK_THROWS_AS(is_relevant("cold_song", "unknown_kw", truth), UnresolvedReferenceError);

  SUBCASE("random sets agree with a brute-force intersection oracle") {
    std::mt19937_64 rng(99);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h"};
    for (int trial = 0; trial < 200; ++trial) {
      GroundTruth t;
      std::vector<std::string> expansion_words, token_words;
      for (const auto& w : vocab) {
        if (rng() & 1) expansion_words.push_back(w);
        if (rng() & 1) token_words.push_back(w);
      }
      t.expansion["kw"] = StringSet(expansion_words.begin(), expansion_words.end());
      t.expansion["kw"].insert("kw");
      std::vector<SongLyrics> l = {{"s", token_words}};
      set_song_tokens(t, l);

      bool expected = false;
      for (const auto& a : token_words)
        for (const auto& b : expansion_words)
          if (a == b) expected = true;
      CHECK(is_relevant("s", "kw", t) == expected);
    }
  }
}

TEST_CASE("load_queries pulls features from the store") {
  TempDir dir;
  FeatureStore store(2);
  store.insert("img1", {1.0, 2.0});
  store.insert("img2", {3.0, 4.0});
  const auto path = dir.file("q.tsv");

  SUBCASE("valid queries copy the stored feature") {
    write_file(path, "img1\tsnow\n# note\nimg2\tsea\n");
    const auto queries = load_queries(path, store);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].image_id == "img1");
    CHECK(queries[0].keyword == "snow");
    CHECK(queries[0].feature == std::vector<double>{1.0, 2.0});
    CHECK(queries[1].feature == std::vector<double>{3.0, 4.0});
  }
  SUBCASE("unknown image") {
    write_file(path, "ghost\tsnow\n");
    CHECK_THROWS_AS(load_queries(path, store), UnresolvedReferenceError);
  }
  SUBCASE("malformed rows") {
    write_file(path, "img1\n");
    CHECK_THROWS_AS(load_queries(path, store), ParseError);
    write_file(path, "img1\tsnow\textra\n");
    CHECK_THROWS_AS(load_queries(path, store), ParseError);
    write_file(path, "img1\t\n");
    CHECK_THROWS_AS(load_queries(path, store), ParseError);
  }
}

namespace {

// Truth with songs rel_0..rel_9 relevant to "kw" and irr_0..irr_9 not.
GroundTruth toy_truth() {
  GroundTruth truth;
  truth.expansion["kw"] = {"kw", "good"};
  std::vector<SongLyrics> lyrics;
  for (int i = 0; i < 10; ++i) {
    lyrics.push_back({"rel_" + std::to_string(i), {"good", "filler"}});
    lyrics.push_back({"irr_" + std::to_string(i), {"bad", "filler"}});
  }
  set_song_tokens(truth, lyrics);
  return truth;
}

Query make_query(int i) { return {"img" + std::to_string(i), "kw", {0.0}}; }

}  // namespace

TEST_CASE("hit_rate_at_k") {
  const auto truth = toy_truth();

  SUBCASE("a relevant song anywhere in the top k counts once") {
    const std::vector<Query> queries = {make_query(0)};
    const Recommender rec = [](const Query&) {
      return std::vector<std::string>{"irr_0", "rel_0", "rel_1"};
    };
    CHECK(hit_rate_at_k(queries, rec, truth, 1) == 0.0);
    CHECK(hit_rate_at_k(queries, rec, truth, 2) == 1.0);
    CHECK(hit_rate_at_k(queries, rec, truth, 3) == 1.0);
  }
  SUBCASE("fractional rates across queries") {
    std::vector<Query> queries;
    for (int i = 0; i < 10; ++i) queries.push_back(make_query(i));
    int counter = 0;
    const Recommender rec = [&counter](const Query&) mutable {
      // Seven of ten queries see a relevant song in the top two.
      const bool hit = counter++ < 7;
      return std::vector<std::string>{"irr_1", hit ? "rel_1" : "irr_2"};
    };
    CHECK(hit_rate_at_k(queries, rec, truth, 2) == doctest::Approx(0.7));
  }
  SUBCASE("an empty recommendation list simply misses") {
    const std::vector<Query> queries = {make_query(0)};
    const Recommender rec = [](const Query&) { return std::vector<std::string>{}; };
    CHECK(hit_rate_at_k(queries, rec, truth, 5) == 0.0);
  }
  SUBCASE("hit rate is monotone in k") {
    std::vector<Query> queries;
    for (int i = 0; i < 6; ++i) queries.push_back(make_query(i));
    int counter = 0;
    const Recommender rec = [&counter](const Query&) mutable {
      std::vector<std::string> list(10, "irr_0");
      list[static_cast<std::size_t>(counter++ % 10)] = "rel_0";
      return list;
    };
    double previous = 0.0;
    for (std::size_t k = 1; k <= 10; ++k) {
      counter = 0;
      const double rate = hit_rate_at_k(queries, rec, truth, k);
      CHECK(rate >= previous);
      previous = rate;
    }
    CHECK(previous == 1.0);
  }
  SUBCASE("degenerate inputs") {
    const std::vector<Query> queries = {make_query(0)};
    const Recommender rec = [](const Query&) { return std::vector<std::string>{"rel_0"}; };
    CHECK_THROWS_AS(hit_rate_at_k({}, rec, truth, 1), InvalidInputError);
    CHECK_THROWS_AS(hit_rate_at_k(queries, rec, truth, 0), InvalidInputError);
  }
}

TEST_CASE("song_hit_rate_at_k measures the relevant fraction of items") {
  const auto truth = toy_truth();
  const std::vector<Query> queries = {make_query(0), make_query(1)};
  const Recommender rec = [](const Query& q) {
    if (q.image_id == "img0") return std::vector<std::string>{"rel_0", "irr_0", "rel_1"};
    return std::vector<std::string>{"irr_1"};
  };
  // Top-3: 4 items total, 2 relevant.
  CHECK(song_hit_rate_at_k(queries, rec, truth, 3) == doctest::Approx(0.5));
  // Top-1: 2 items, 1 relevant.
  CHECK(song_hit_rate_at_k(queries, rec, truth, 1) == doctest::Approx(0.5));
  // Top-2: 3 items, 1 relevant.
  CHECK(song_hit_rate_at_k(queries, rec, truth, 2) == doctest::Approx(1.0 / 3.0));

  const Recommender none = [](const Query&) { return std::vector<std::string>{}; };
  CHECK(song_hit_rate_at_k(queries, none, truth, 3) == 0.0);
  CHECK_THROWS_AS(song_hit_rate_at_k({}, rec, truth, 1), InvalidInputError);
  CHECK_THROWS_AS(song_hit_rate_at_k(queries, rec, truth, 0), InvalidInputError);
}

TEST_CASE("precision_at_k") {
  SUBCASE("all relevant") {
    const std::vector<std::vector<bool>> labels = {{true, true, true}};
    CHECK(precision_at_k(labels, 3) == 1.0);
  }
  SUBCASE("alternating labels at even k") {
    const std::vector<std::vector<bool>> labels = {{true, false, true, false}};
    CHECK(precision_at_k(labels, 4) == 0.5);
  }
  SUBCASE("averages across queries") {
    std::vector<std::vector<bool>> labels;
    for (const int relevant : {8, 6, 7, 7}) {
      std::vector<bool> list(10, false);
      for (int i = 0; i < relevant; ++i) list[static_cast<std::size_t>(i)] = true;
      labels.push_back(list);
    }
    CHECK(precision_at_k(labels, 10) == doctest::Approx(0.7));
  }
  SUBCASE("short lists count missing items as irrelevant") {
    const std::vector<std::vector<bool>> labels = {{true}};
    CHECK(precision_at_k(labels, 2) == 0.5);
  }
  SUBCASE("degenerate inputs") {
    const std::vector<std::vector<bool>> ok = {{true}};
    CHECK_THROWS_AS(precision_at_k(ok, 0), InvalidInputError);
    CHECK_THROWS_AS(precision_at_k({}, 3), InvalidInputError);
    const std::vector<std::vector<bool>> holed = {{true}, {}};
    CHECK_THROWS_AS(precision_at_k(holed, 3), InvalidInputError);
  }
}

TEST_CASE("km_baseline ranks a keyword's songs by edge weight") {
  TripartiteGraph graph;
  const auto kw = graph.add_vertex(VertexKind::Keyword, "kw");
  const auto s5 = graph.add_vertex(VertexKind::Song, "s5");
  const auto s2 = graph.add_vertex(VertexKind::Song, "s2");
  const auto s9 = graph.add_vertex(VertexKind::Song, "s9");
  const auto img = graph.add_vertex(VertexKind::Image, "img");
  graph.add_edge(s5, kw, 5.0);
  graph.add_edge(s2, kw, 2.0);
  graph.add_edge(s9, kw, 9.0);
  graph.add_edge(img, kw, 100.0);  // image neighbors never surface

  const auto top = km_baseline("kw", graph, 3);
  CHECK(top == std::vector<std::string>{"s9", "s5", "s2"});
  CHECK(km_baseline("kw", graph, 2) == std::vector<std::string>{"s9", "s5"});
  CHECK(km_baseline("kw", graph, 10) == top);
  CHECK_THROWS_AS(km_baseline("absent", graph, 3), UnresolvedReferenceError);
  // Song ids never resolve as keywords.
  CHECK_THROWS_AS(km_baseline("s5", graph, 3), UnresolvedReferenceError);

  SUBCASE("equal weights break ties by ascending song id") {
    TripartiteGraph g;
    const auto k = g.add_vertex(VertexKind::Keyword, "k");
    const auto b = g.add_vertex(VertexKind::Song, "bravo");
    const auto a = g.add_vertex(VertexKind::Song, "alpha");
    g.add_edge(b, k, 5.0);
    g.add_edge(a, k, 5.0);
    CHECK(km_baseline("k", g, 2) == std::vector<std::string>{"alpha", "bravo"});
  }

  SUBCASE("random graphs agree with a filter-and-sort oracle") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
      TripartiteGraph g;
      const auto k = g.add_vertex(VertexKind::Keyword, "k");
      const std::size_t songs = 1 + rng() % 15;
      std::vector<std::pair<double, std::string>> expected;
      for (std::size_t i = 0; i < songs; ++i) {
        const std::string id = "s" + std::to_string(i);
        const double weight = static_cast<double>(1 + rng() % 3);  // ties are frequent
        g.add_edge(g.add_vertex(VertexKind::Song, id), k, weight);
        expected.emplace_back(weight, id);
      }
      std::sort(expected.begin(), expected.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
      });
      const std::size_t want_k = 1 + rng() % (songs + 2);
      const auto got = km_baseline("k", g, want_k);
      REQUIRE(got.size() == std::min(want_k, songs));
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i].second);
    }
  }
}

TEST_CASE("load_popularity") {
  TempDir dir;
  const auto path = dir.file("pop.tsv");

  SUBCASE("valid table") {
    write_file(path, "a\t10\nb\t3\n# c\n\nc\t0\n");
    const auto table = load_popularity(path);
    CHECK(table.counts.size() == 3);
    CHECK(table.counts.at("a") == 10);
    CHECK(table.counts.at("c") == 0);
  }
  SUBCASE("rejects malformed rows") {
    write_file(path, "a\n");
    CHECK_THROWS_AS(load_popularity(path), ParseError);
    write_file(path, "a\tmany\n");
    CHECK_THROWS_AS(load_popularity(path), ParseError);
    write_file(path, "a\t-4\n");
    CHECK_THROWS_AS(load_popularity(path), ParseError);
    write_file(path, "a\t1\na\t2\n");
    CHECK_THROWS_AS(load_popularity(path), DuplicateKeyError);
  }
}

TEST_CASE("pop_baseline samples from the top-100 pool") {
  SUBCASE("small tables are exhausted without duplicates") {
    PopularityTable table;
    for (int i = 0; i < 5; ++i) table.counts["s" + std::to_string(i)] = 10 - i;
    const auto draw = pop_baseline(table, 10, 7);
    REQUIRE(draw.size() == 5);
    std::set<std::string> unique(draw.begin(), draw.end());
    CHECK(unique.size() == 5);
    for (const auto& song : draw) CHECK(table.counts.contains(song));
  }
  SUBCASE("draws are seed-deterministic") {
    PopularityTable table;
    for (int i = 0; i < 50; ++i) table.counts["s" + std::to_string(i)] = 100 - i;
    const auto a = pop_baseline(table, 10, 42);
    const auto b = pop_baseline(table, 10, 42);
    CHECK(a == b);
    bool any_differs = false;
    for (std::uint64_t seed = 0; seed < 20 && !any_differs; ++seed)
      any_differs = pop_baseline(table, 10, seed) != a;
    CHECK(any_differs);
  }
  SUBCASE("only the 100 most played songs can ever be drawn") {
    PopularityTable table;
    for (int i = 0; i < 200; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "song_%03d", i);
      table.counts[id] = static_cast<std::uint64_t>(i + 1);
    }
    // The pool is exactly the songs with counts 101..200.
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto draw = pop_baseline(table, 10, seed);
      REQUIRE(draw.size() == 10);
      std::set<std::string> unique(draw.begin(), draw.end());
      CHECK(unique.size() == 10);
      for (const auto& song : draw) CHECK(table.counts.at(song) >= 101);
    }
  }
  SUBCASE("pool boundary ties resolve by ascending id") {
    PopularityTable table;
    for (int i = 0; i < 120; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "t%03d", i);
      table.counts[id] = 7;
    }
    // Pool = the 100 lexicographically smallest ids; t100..t119 never appear.
    for (std::uint64_t seed = 0; seed < 50; ++seed)
      for (const auto& song : pop_baseline(table, 10, seed)) CHECK(song < "t100");
  }
  SUBCASE("an empty table is rejected") {
    const PopularityTable empty;
    CHECK_THROWS_AS(pop_baseline(empty, 10, 1), InvalidInputError);
  }
}

TEST_CASE("generate_synthetic_corpus") {
  SynthConfig config;
  config.clusters = 2;
  config.songs_per_cluster = 10;
  config.images_per_cluster = 10;
  config.keywords_per_cluster = 3;
  config.seed = 1;
  config.feature_dim = 8;

  const auto corpus = generate_synthetic_corpus(config);

  SUBCASE("vertex and edge counts") {
    CHECK(corpus.graph.count_of(VertexKind::Song) == 20);
    CHECK(corpus.graph.count_of(VertexKind::Image) == 20);
    CHECK(corpus.graph.count_of(VertexKind::Keyword) == 6);
    CHECK(corpus.graph.edge_count() >= 40);
    CHECK(corpus.graph.edge_count() <= 120);
    CHECK(corpus.features.size() == 20);
    CHECK(corpus.queries.size() == 20);
  }
  SUBCASE("every edge stays inside its cluster") {
    for (const Edge& edge : corpus.graph.edges()) {
      const Vertex& a = corpus.graph.vertex(edge.a);
      const Vertex& b = corpus.graph.vertex(edge.b);
      const Vertex& keyword = a.kind == VertexKind::Keyword ? a : b;
      const Vertex& other = a.kind == VertexKind::Keyword ? b : a;
      const std::size_t cluster = other.kind == VertexKind::Song
                                      ? corpus.song_cluster.at(other.external_id)
                                      : corpus.image_cluster.at(other.external_id);
      const std::string prefix = "kw_c" + std::to_string(cluster) + "_";
      CHECK(keyword.external_id.substr(0, prefix.size()) == prefix);
      CHECK(edge.weight == 1.0);
    }
  }
  SUBCASE("queries carry the stored feature and an own-cluster keyword") {
    for (const Query& query : corpus.queries) {
      const auto row = corpus.features.vector_of(query.image_id);
      REQUIRE(query.feature.size() == row.size());
      for (std::size_t j = 0; j < row.size(); ++j) CHECK(query.feature[j] == row[j]);
      const std::size_t cluster = corpus.image_cluster.at(query.image_id);
      const std::string prefix = "kw_c" + std::to_string(cluster) + "_";
      CHECK(query.keyword.substr(0, prefix.size()) == prefix);
      // The query keyword is answerable: it has an expansion entry.
      CHECK(corpus.ground_truth.expansion.contains(query.keyword));
    }
  }
  SUBCASE("ground truth spans each cluster's keyword set") {
    CHECK(corpus.ground_truth.n == config.keywords_per_cluster);
    const auto& words = corpus.ground_truth.expansion.at("kw_c0_0");
    CHECK(words.size() == 3);
    CHECK(words.contains("kw_c0_0"));
    CHECK(words.contains("kw_c0_1"));
    CHECK(words.contains("kw_c0_2"));
    CHECK_FALSE(words.contains("kw_c1_0"));
    for (const auto& [song, tokens] : corpus.ground_truth.song_tokens) {
      CHECK_FALSE(tokens.empty());
      CHECK(corpus.song_cluster.contains(song));
    }
  }
  SUBCASE("popularity lists only cluster-0 songs, counts descending") {
    CHECK(corpus.popularity.counts.size() == 10);
    for (const auto& [song, count] : corpus.popularity.counts) {
      CHECK(corpus.song_cluster.at(song) == 0);
      CHECK(count >= 1);
      CHECK(count <= 10);
    }
  }
  SUBCASE("zero noise puts features exactly on the centroids") {
    SynthConfig exact = config;
    exact.feature_noise = 0.0;
    const auto clean = generate_synthetic_corpus(exact);
    for (const auto& [image, cluster] : clean.image_cluster) {
      const auto row = clean.features.vector_of(image);
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double expected = j == cluster % exact.feature_dim ? exact.centroid_scale : 0.0;
        CHECK(row[j] == expected);
      }
    }
  }
  SUBCASE("generation is deterministic in the seed") {
    TempDir dir;
    const auto again = generate_synthetic_corpus(config);
    save_edges(corpus.graph, dir.file("a.tsv"));
    save_edges(again.graph, dir.file("b.tsv"));
    CHECK(read_file(dir.file("a.tsv")) == read_file(dir.file("b.tsv")));
    save_features(corpus.features, dir.file("fa.tsv"));
    save_features(again.features, dir.file("fb.tsv"));
    CHECK(read_file(dir.file("fa.tsv")) == read_file(dir.file("fb.tsv")));

    SynthConfig other = config;
    other.seed = 2;
    const auto different = generate_synthetic_corpus(other);
    save_edges(different.graph, dir.file("c.tsv"));
    CHECK(read_file(dir.file("a.tsv")) != read_file(dir.file("c.tsv")));
  }
  SUBCASE("invalid configurations are rejected") {
    SynthConfig bad = config;
    bad.clusters = 0;
    CHECK_THROWS_AS(generate_synthetic_corpus(bad), InvalidInputError);
    bad = config;
    bad.songs_per_cluster = 0;
    CHECK_THROWS_AS(generate_synthetic_corpus(bad), InvalidInputError);
    bad = config;
    bad.feature_dim = 0;
    CHECK_THROWS_AS(generate_synthetic_corpus(bad), InvalidInputError);
    bad = config;
    bad.feature_noise = -0.5;
    CHECK_THROWS_AS(generate_synthetic_corpus(bad), InvalidInputError);
  }
}

TEST_CASE("write_synthetic_corpus materializes a loadable corpus") {
  SynthConfig config;
  config.clusters = 2;
  config.songs_per_cluster = 6;
  config.images_per_cluster = 5;
  config.keywords_per_cluster = 3;
  config.seed = 11;
  config.feature_dim = 4;
  const auto corpus = generate_synthetic_corpus(config);

  TempDir dir;
  const auto root = dir.file("corpus");
  write_synthetic_corpus(corpus, root);

  const auto lyrics = load_lyrics(root / "lyrics.tsv");
  const auto keywords = load_keywords(root / "keywords.txt");
  const auto manifest = load_manifest(root / "manifest.tsv");
  CHECK(lyrics.size() == 12);
  CHECK(keywords.size() == 6);
  // One manifest row per image-keyword link: 10 images with 1-3 links each.
  CHECK(manifest.size() == corpus.manifest.size());
  CHECK(manifest.size() >= 10);
  CHECK(manifest.size() <= 30);

  // Rebuilding the graph from the written files reproduces the original.
  TripartiteGraph rebuilt;
  build_song_keyword_edges(rebuilt, lyrics, keywords);
  build_image_keyword_edges(rebuilt, manifest);
  CHECK(rebuilt.vertex_count() == corpus.graph.vertex_count());
  CHECK(rebuilt.edge_count() == corpus.graph.edge_count());

  const auto features = load_features(root / "features.tsv");
  CHECK(features.size() == corpus.features.size());
  const auto queries = load_queries(root / "queries.tsv", features);
  CHECK(queries.size() == corpus.queries.size());

  auto truth = load_expansions(root / "expansions.tsv", config.keywords_per_cluster);
  set_song_tokens(truth, lyrics);
  CHECK(truth.expansion.size() == 6);
  CHECK(truth.expansion.at("kw_c0_0") == corpus.ground_truth.expansion.at("kw_c0_0"));

  const auto popularity = load_popularity(root / "popularity.tsv");
  CHECK(popularity.counts.size() == corpus.popularity.counts.size());
  for (const auto& [song, count] : corpus.popularity.counts)
    CHECK(popularity.counts.at(song) == count);
}
