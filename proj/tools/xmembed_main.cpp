// xmembed command line: corpus ingestion, embedding training, image-to-song
// retrieval and evaluation as a file-to-file pipeline.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "xmembed/embedding.hpp"
#include "xmembed/errors.hpp"
#include "xmembed/eval.hpp"
#include "xmembed/features.hpp"
#include "xmembed/graph.hpp"
#include "xmembed/retrieval.hpp"
#include "xmembed/synth.hpp"

namespace {

using namespace xmembed;

// %.17g, enough digits for an exact text round trip.
std::string fmt(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

struct BuildGraphArgs {
  std::string lyrics, keywords, manifest, out;
};

int cmd_build_graph(const BuildGraphArgs& args) {
  const auto lyrics = load_lyrics(args.lyrics);
  const auto keywords = load_keywords(args.keywords);
  const auto manifest = load_manifest(args.manifest);

  TripartiteGraph graph;
  build_song_keyword_edges(graph, lyrics, keywords);
  build_image_keyword_edges(graph, manifest);
  save_edges(graph, args.out);

  std::size_t song_keyword = 0;
  std::size_t image_keyword = 0;
  for (const Edge& edge : graph.edges()) {
    const bool has_song = graph.vertex(edge.a).kind == VertexKind::Song ||
                          graph.vertex(edge.b).kind == VertexKind::Song;
    (has_song ? song_keyword : image_keyword) += 1;
  }
  std::cout << "song_vertices\t" << graph.count_of(VertexKind::Song) << '\n'
            << "keyword_vertices\t" << graph.count_of(VertexKind::Keyword) << '\n'
            << "image_vertices\t" << graph.count_of(VertexKind::Image) << '\n'
            << "song_keyword_edges\t" << song_keyword << '\n'
            << "image_keyword_edges\t" << image_keyword << '\n'
            << "graph\t" << args.out << '\n';
  return 0;
}

struct TrainArgs {
  std::string graph, out;
  TrainConfig config;
  bool first_order = false;
  bool text_model = false;
};

int cmd_train(const TrainArgs& args) {
  const auto graph = load_edges(args.graph);
  TrainConfig config = args.config;
  config.order = args.first_order ? ProximityOrder::First : ProximityOrder::Second;

  const double initial_loss =
      mean_positive_edge_loss(graph, init_model(graph, config.dim, config.seed), config.order);

  TrainStats stats;
  const EmbeddingModel model = train(graph, config, &stats);
  save_model(model, args.out, args.text_model ? ModelFormat::Text : ModelFormat::Binary);

  std::cout << "vertices\t" << model.size() << '\n'
            << "edges\t" << graph.edge_count() << '\n'
            << "trained_samples\t" << config.total_samples << '\n'
            << "positive_updates\t" << stats.positive_updates << '\n'
            << "negative_updates\t" << stats.negative_updates << '\n'
            << "skipped_negatives\t" << stats.skipped_negatives << '\n'
            << "initial_mean_edge_loss\t" << fmt(initial_loss) << '\n'
            << "final_mean_edge_loss\t" << fmt(mean_positive_edge_loss(graph, model, config.order))
            << '\n'
            << "model\t" << args.out << '\n';
  return 0;
}

struct QueryArgs {
  std::string features, model, query_file;
  RetrievalConfig config;
};

int cmd_query(const QueryArgs& args) {
  const auto store = load_features(args.features);
  const auto model = load_model(args.model);
  const auto queries = load_features(args.query_file);

  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::cout << "# query " << queries.id(q) << '\n';
    const auto results = recommend(queries.row(q), store, model, args.config);
    for (std::size_t i = 0; i < results.size(); ++i)
      std::cout << (i + 1) << '\t' << results[i].song_id << '\t' << fmt(results[i].distance)
                << '\t' << results[i].source_image << '\n';
  }
  return 0;
}

struct EvaluateArgs {
  std::string graph, model, features, expansions, queries, lyrics;
  std::string baseline;    // "", "km" or "pop"
  std::string popularity;  // required for pop
  std::size_t n = 10;
  std::size_t k = 10;
  std::size_t n_images = 5;
  std::size_t songs_per_image = 2;
  std::uint64_t seed = 42;
  bool per_song = false;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const auto graph = load_edges(args.graph);
  const auto model = load_model(args.model);
  const auto store = load_features(args.features);
  GroundTruth truth = load_expansions(args.expansions, args.n);
  const auto lyrics = load_lyrics(args.lyrics);
  set_song_tokens(truth, lyrics);
  const auto queries = load_queries(args.queries, store);

  Recommender recommender;
  if (args.baseline.empty()) {
    const RetrievalConfig config{args.n_images, args.songs_per_image, args.k};
    recommender = [&, config](const Query& query) {
      std::vector<std::string> songs;
      for (auto& r : recommend(query.feature, store, model, config))
        songs.push_back(std::move(r.song_id));
      return songs;
    };
  } else if (args.baseline == "km") {
    recommender = [&](const Query& query) { return km_baseline(query.keyword, graph, args.k); };
  } else {
    // Each query draws its own sample, deterministically derived from --seed.
    recommender = [&args, popularity = load_popularity(args.popularity),
                   index = std::uint64_t{0}](const Query&) mutable {
      return pop_baseline(popularity, args.k, args.seed + index++);
    };
  }

  const double value = args.per_song
                           ? song_hit_rate_at_k(queries, recommender, truth, args.k)
                           : hit_rate_at_k(queries, recommender, truth, args.k);
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  std::cout << (args.per_song ? "song_hit_rate@" : "hit_rate@") << args.k << '\t' << buffer
            << '\n';
  return 0;
}

struct ExtractArgs {
  std::string images, out;
  std::size_t bins = 8;
};

int cmd_extract_features(const ExtractArgs& args) {
  if (!std::filesystem::is_directory(args.images))
    throw InvalidInputError("\"" + args.images + "\" is not a directory");

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(args.images))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  FeatureStore store(3 * args.bins);
  for (const auto& file : files) {
    const PpmImage image = load_ppm(file);
    store.insert(file.stem().string(), histogram_extract(image.rgb, args.bins));
  }
  save_features(store, args.out);
  std::cout << "images\t" << store.size() << '\n'
            << "dim\t" << store.dim() << '\n'
            << "features\t" << args.out << '\n';
  return 0;
}

struct GenSynthArgs {
  std::string out_dir;
  SynthConfig config;
};

int cmd_gen_synth(const GenSynthArgs& args) {
  const SyntheticCorpus corpus = generate_synthetic_corpus(args.config);
  write_synthetic_corpus(corpus, args.out_dir);
  std::cout << "clusters\t" << args.config.clusters << '\n'
            << "songs\t" << corpus.lyrics.size() << '\n'
            << "images\t" << corpus.features.size() << '\n'
            << "keywords\t" << corpus.keywords.size() << '\n'
            << "edges\t" << corpus.graph.edge_count() << '\n'
            << "out_dir\t" << args.out_dir << '\n';
  return 0;
}

struct FetchArgs {
  std::string keywords, out;
  std::string host = "api.conceptnet.io";
  std::size_t n = 10;
};

int cmd_fetch_expansions(const FetchArgs& args) {
  const auto keywords = load_keywords(args.keywords);
  std::ofstream out(args.out);
  if (!out) throw InvalidInputError("cannot open \"" + args.out + "\" for writing");

  httplib::Client client(args.host);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(30, 0);
  for (const std::string& keyword : keywords) {
    const std::string path =
        "/related/c/en/" + keyword + "?filter=/c/en&limit=" + std::to_string(args.n + 1);
    const auto response = client.Get(path);
    if (!response)
      throw std::runtime_error("request to " + args.host + path + " failed: " +
                               httplib::to_string(response.error()));
    if (response->status != 200)
      throw std::runtime_error("request to " + args.host + path + " returned status " +
                               std::to_string(response->status));

    // Response shape: {"related": [{"@id": "/c/en/word", "weight": ...}, ...]}
    const auto body = nlohmann::json::parse(response->body);
    std::vector<std::string> words;
    for (const auto& entry : body.value("related", nlohmann::json::array())) {
      const std::string id = entry.value("@id", "");
      const auto slash = id.rfind('/');
      if (slash == std::string::npos) continue;
      const std::string word = id.substr(slash + 1);
      if (word.empty() || word == keyword) continue;
      words.push_back(word);
      if (words.size() == args.n) break;
    }

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
  std::cout << "keywords\t" << keywords.size() << '\n' << "expansions\t" << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xmembed: shared song/keyword/image embeddings for image-to-song retrieval"};
  app.require_subcommand(1);

  BuildGraphArgs build_args;
  auto* build = app.add_subcommand(
      "build-graph", "Build the song-keyword-image edge list from corpus files");
  build->add_option("--lyrics", build_args.lyrics, "Lyrics TSV: song_id<TAB>token token ...")
      ->required();
  build->add_option("--keywords", build_args.keywords, "Keyword vocabulary, one per line")
      ->required();
  build->add_option("--manifest", build_args.manifest,
                    "Image manifest TSV: image_id<TAB>keyword[<TAB>relevance]")
      ->required();
  build->add_option("--out", build_args.out, "Output edge TSV")->required();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train the embedding model on an edge list");
  train_cmd->add_option("--graph", train_args.graph, "Edge TSV from build-graph")->required();
  train_cmd->add_option("--out", train_args.out, "Output model file")->required();
  train_cmd->add_option("--dim", train_args.config.dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--negatives", train_args.config.negatives, "Noise samples per positive")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--lr", train_args.config.initial_lr, "Initial learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--samples", train_args.config.total_samples, "Total edge samples (T)")
      ->check(CLI::PositiveNumber)
      ->required();
  train_cmd
      ->add_option("--exponent", train_args.config.noise_exponent, "Noise degree exponent")
      ->capture_default_str();
  train_cmd->add_option("--workers", train_args.config.workers, "Trainer thread count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--seed", train_args.config.seed, "Random seed")->capture_default_str();
  train_cmd->add_flag("--first-order", train_args.first_order,
                      "Score pairs with two vertex vectors instead of vertex-context");
  train_cmd->add_flag("--text-model", train_args.text_model,
                      "Write the text model format instead of binary");

  QueryArgs query_args;
  auto* query_cmd = app.add_subcommand("query", "Recommend songs for query image features");
  query_cmd->add_option("--features", query_args.features, "Corpus image feature file")
      ->required();
  query_cmd->add_option("--model", query_args.model, "Trained model file")->required();
  query_cmd
      ->add_option("--image-feature-file", query_args.query_file,
                   "Feature file holding the query images")
      ->required();
  query_cmd->add_option("--n-images", query_args.config.n_images, "Images retrieved per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  query_cmd
      ->add_option("--songs-per-image", query_args.config.songs_per_image,
                   "Songs fused per retrieved image")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  query_cmd->add_option("--k", query_args.config.final_k, "Final recommendation count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Compute hit rate over a query set");
  eval_cmd->add_option("--graph", eval_args.graph, "Edge TSV")->required();
  eval_cmd->add_option("--model", eval_args.model, "Trained model file")->required();
  eval_cmd->add_option("--features", eval_args.features, "Image feature file")->required();
  eval_cmd->add_option("--expansions", eval_args.expansions, "Keyword expansion TSV")->required();
  eval_cmd->add_option("--queries", eval_args.queries, "Query TSV: image_id<TAB>keyword")
      ->required();
  eval_cmd->add_option("--lyrics", eval_args.lyrics, "Lyrics TSV for relevance tokens")
      ->required();
  eval_cmd->add_option("--n", eval_args.n, "Expansion words kept per keyword")
      ->capture_default_str();
  eval_cmd->add_option("--k", eval_args.k, "Recommendations judged per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--n-images", eval_args.n_images, "Images retrieved per query")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd
      ->add_option("--songs-per-image", eval_args.songs_per_image,
                   "Songs fused per retrieved image")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--baseline", eval_args.baseline, "Baseline recommender instead of the model")
      ->check(CLI::IsMember({"km", "pop"}));
  eval_cmd->add_option("--popularity", eval_args.popularity,
                       "Popularity TSV: song_id<TAB>play_count (pop baseline)");
  eval_cmd->add_option("--seed", eval_args.seed, "Sampling seed (pop baseline)")
      ->capture_default_str();
  eval_cmd->add_flag("--per-song", eval_args.per_song,
                     "Report the per-recommended-song hit rate instead of per-query");

  ExtractArgs extract_args;
  auto* extract_cmd =
      app.add_subcommand("extract-features", "Extract color-histogram features from PPM images");
  extract_cmd->add_option("--images", extract_args.images, "Directory of .ppm files")->required();
  extract_cmd->add_option("--bins", extract_args.bins, "Histogram bins per channel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  extract_cmd->add_option("--out", extract_args.out, "Output feature file")->required();

  GenSynthArgs synth_args;
  auto* synth_cmd =
      app.add_subcommand("gen-synth", "Generate a clustered synthetic corpus for experiments");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "Directory for the corpus files")
      ->required();
  synth_cmd->add_option("--clusters", synth_args.config.clusters, "Cluster count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd
      ->add_option("--songs-per-cluster", synth_args.config.songs_per_cluster, "Songs per cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd
      ->add_option("--images-per-cluster", synth_args.config.images_per_cluster,
                   "Images per cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd
      ->add_option("--keywords-per-cluster", synth_args.config.keywords_per_cluster,
                   "Keywords per cluster")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_args.config.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--feature-dim", synth_args.config.feature_dim, "Image feature dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd
      ->add_option("--feature-noise", synth_args.config.feature_noise,
                   "Uniform noise amplitude around the cluster centroid")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth_cmd
      ->add_option("--centroid-scale", synth_args.config.centroid_scale,
                   "Distance of cluster centroids from the origin")
      ->capture_default_str();

  FetchArgs fetch_args;
  auto* fetch_cmd = app.add_subcommand(
      "fetch-expansions", "Fetch keyword expansions from a ConceptNet-style HTTP API");
  fetch_cmd->add_option("--keywords", fetch_args.keywords, "Keyword vocabulary, one per line")
      ->required();
  fetch_cmd->add_option("--out", fetch_args.out, "Output expansion TSV")->required();
  fetch_cmd->add_option("--host", fetch_args.host, "API host")->capture_default_str();
  fetch_cmd->add_option("--n", fetch_args.n, "Related words requested per keyword")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (build->parsed()) return cmd_build_graph(build_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (query_cmd->parsed()) return cmd_query(query_args);
    if (eval_cmd->parsed()) {
      if (eval_args.baseline == "pop" && eval_args.popularity.empty()) {
        std::cerr << "error: --baseline pop requires --popularity\n";
        return 1;
      }
      return cmd_evaluate(eval_args);
    }
    if (extract_cmd->parsed()) return cmd_extract_features(extract_args);
    if (synth_cmd->parsed()) return cmd_gen_synth(synth_args);
    if (fetch_cmd->parsed()) return cmd_fetch_expansions(fetch_args);
  } catch (const xmembed::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
