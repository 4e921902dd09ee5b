#include "xmembed/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "io_util.hpp"
#include "xmembed/rng.hpp"
#include "xmembed/sampler.hpp"

namespace xmembed {

namespace {

constexpr char kModelMagic[8] = {'X', 'M', 'E', 'M', 'B', 'E', 'D', '1'};
constexpr double kSigmoidClamp = 30.0;
constexpr double kMinLrFraction = 1e-4;
constexpr int kMaxNegativeAttempts = 100;

double dot(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

EmbeddingModel::EmbeddingModel(std::vector<Vertex> vertices, std::size_t dim)
    : dim_(dim), vertices_(std::move(vertices)) {
  if (dim_ == 0) throw InvalidInputError("embedding dimension must be at least 1");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    auto& v = vertices_[i];
    v.id = static_cast<VertexId>(i);
    if (v.external_id.empty())
      throw InvalidInputError("vertex external_id must be nonempty");
    auto& index = index_[static_cast<std::size_t>(v.kind)];
    if (!index.emplace(v.external_id, v.id).second)
      throw DuplicateKeyError("duplicate vertex (" + std::string(kind_name(v.kind)) + ", " +
                              v.external_id + ") in model");
  }
  vertex_vectors_.assign(vertices_.size() * dim_, 0.0);
  context_vectors_.assign(vertices_.size() * dim_, 0.0);
}

void EmbeddingModel::check_vertex_id(VertexId id) const {
  if (id >= vertices_.size())
    throw InvalidInputError("vertex id " + std::to_string(id) + " out of range");
}

std::span<const double> EmbeddingModel::vertex_vector(VertexId id) const {
  check_vertex_id(id);
  return {vertex_vectors_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::span<double> EmbeddingModel::vertex_vector(VertexId id) {
  check_vertex_id(id);
  return {vertex_vectors_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::span<const double> EmbeddingModel::context_vector(VertexId id) const {
  check_vertex_id(id);
  return {context_vectors_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

std::span<double> EmbeddingModel::context_vector(VertexId id) {
  check_vertex_id(id);
  return {context_vectors_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

const Vertex& EmbeddingModel::vertex(VertexId id) const {
  check_vertex_id(id);
  return vertices_[id];
}

std::optional<VertexId> EmbeddingModel::find(VertexKind kind,
                                             std::string_view external_id) const {
  const auto& index = index_[static_cast<std::size_t>(kind)];
  if (auto it = index.find(external_id); it != index.end()) return it->second;
  return std::nullopt;
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(vertex_vectors_) && finite(context_vectors_);
}

double sigmoid(double x) {
  x = std::clamp(x, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

EmbeddingModel init_model(const TripartiteGraph& graph, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidInputError("embedding dimension must be at least 1");
  if (graph.vertex_count() == 0) throw InvalidInputError("cannot initialize a model on an empty graph");

  std::vector<Vertex> table;
  table.reserve(graph.vertex_count());
  for (VertexId id = 0; id < graph.vertex_count(); ++id) table.push_back(graph.vertex(id));

  EmbeddingModel model(std::move(table), dim);
  Rng rng(seed);
  double* values = model.vertex_data();
  const std::size_t total = model.size() * dim;
  const double scale = 1.0 / static_cast<double>(dim);
  for (std::size_t i = 0; i < total; ++i) values[i] = (rng.uniform01() - 0.5) * scale;
  return model;
}

double pair_score(const EmbeddingModel& model, VertexId u, VertexId v) {
  const auto uv = model.vertex_vector(u);
  const auto vc = model.context_vector(v);
  return dot(uv.data(), vc.data(), model.dim());
}

double edge_loss(double score, bool positive) {
  const double s = std::clamp(score, -kSigmoidClamp, kSigmoidClamp);
  // -log sigma(s) = log(1 + exp(-s)); the negative label flips the sign.
  return positive ? std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

PairGradient step_gradient(const EmbeddingModel& model, VertexId u, VertexId v, bool positive) {
  const double s = pair_score(model, u, v);
  const double g = positive ? sigmoid(s) - 1.0 : sigmoid(s);
  const auto uv = model.vertex_vector(u);
  const auto vc = model.context_vector(v);
  PairGradient grad;
  grad.wrt_vertex.resize(model.dim());
  grad.wrt_context.resize(model.dim());
  for (std::size_t j = 0; j < model.dim(); ++j) {
    grad.wrt_vertex[j] = g * vc[j];
    grad.wrt_context[j] = g * uv[j];
  }
  return grad;
}

namespace {

void validate_config(const TrainConfig& cfg) {
  if (cfg.dim == 0) throw InvalidInputError("train: dim must be at least 1");
  if (cfg.negatives == 0) throw InvalidInputError("train: negatives must be at least 1");
  if (!(cfg.initial_lr > 0.0) || !std::isfinite(cfg.initial_lr))
    throw InvalidInputError("train: initial learning rate must be positive");
  if (cfg.total_samples == 0) throw InvalidInputError("train: total_samples must be at least 1");
}

}  // namespace

EmbeddingModel train(const TripartiteGraph& graph, const TrainConfig& cfg, TrainStats* stats) {
  validate_config(cfg);
  if (graph.edge_count() == 0) throw EmptySupportError("cannot train on a graph without edges");

  EmbeddingModel model = init_model(graph, cfg.dim, cfg.seed);
  const EdgeSampler edge_sampler(graph);

  // One noise distribution per vertex kind that actually has sampling mass.
  std::array<std::optional<NoiseDistribution>, kVertexKindCount> noise;
  for (std::size_t k = 0; k < kVertexKindCount; ++k) {
    const auto kind = static_cast<VertexKind>(k);
    const auto ids = graph.vertices_of(kind);
    const bool has_mass = std::any_of(ids.begin(), ids.end(), [&](VertexId v) {
      const double w = std::pow(graph.degree(v), cfg.noise_exponent);
      return std::isfinite(w) && w > 0.0;
    });
    if (has_mass) noise[k].emplace(graph, kind, cfg.noise_exponent);
  }

  const std::size_t d = cfg.dim;
  const double lr0 = cfg.initial_lr;
  const auto total = cfg.total_samples;
  const bool second_order = cfg.order == ProximityOrder::Second;
  double* const vertex_data = model.vertex_data();
  double* const context_data = model.context_data();
  double* const target_base = second_order ? context_data : vertex_data;

  auto run_worker = [&](std::size_t worker_id, auto&& next_index, TrainStats& st) {
    Rng rng(Rng::mix(cfg.seed, worker_id));
    std::vector<double> acc(d);
    while (true) {
      const std::uint64_t t = next_index();
      if (t >= total) break;
      const double progress = static_cast<double>(t) / static_cast<double>(total);
      const double lr = std::max(lr0 * (1.0 - progress), lr0 * kMinLrFraction);

      const auto [u, v] = edge_sampler.sample(rng);
      const auto target_kind = static_cast<std::size_t>(graph.vertex(v).kind);
      double* const uvec = vertex_data + static_cast<std::size_t>(u) * d;
      std::fill(acc.begin(), acc.end(), 0.0);

      for (std::size_t k = 0; k <= cfg.negatives; ++k) {
        const bool positive = k == 0;
        VertexId target = v;
        if (!positive) {
          // Redraw while the noise sample collides with the true target.
          const auto& nd = noise[target_kind];
          bool found = false;
          for (int attempt = 0; attempt < kMaxNegativeAttempts; ++attempt) {
            const VertexId cand = nd->sample(rng);
            if (cand != v) {
              target = cand;
              found = true;
              break;
            }
          }
          if (!found) {
            st.skipped_negatives += 1;
            continue;
          }
        }
        double* const tvec = target_base + static_cast<std::size_t>(target) * d;
        const double s = dot(uvec, tvec, d);
        const double g = positive ? sigmoid(s) - 1.0 : sigmoid(s);
        const double step = lr * g;
        for (std::size_t j = 0; j < d; ++j) acc[j] += g * tvec[j];
        for (std::size_t j = 0; j < d; ++j) tvec[j] -= step * uvec[j];
        if (positive)
          st.positive_updates += 1;
        else
          st.negative_updates += 1;
      }
      for (std::size_t j = 0; j < d; ++j) uvec[j] -= lr * acc[j];
    }
  };

  TrainStats total_stats;
  if (cfg.workers <= 1) {
    std::uint64_t t = 0;
    run_worker(0, [&t] { return t++; }, total_stats);
  } else {
    std::atomic<std::uint64_t> counter{0};
    std::vector<TrainStats> worker_stats(cfg.workers);
    std::vector<std::thread> threads;
    threads.reserve(cfg.workers);
    for (std::size_t w = 0; w < cfg.workers; ++w) {
      threads.emplace_back([&, w] {
        run_worker(
            w, [&counter] { return counter.fetch_add(1, std::memory_order_relaxed); },
            worker_stats[w]);
      });
    }
    for (auto& th : threads) th.join();
    for (const auto& st : worker_stats) {
      total_stats.positive_updates += st.positive_updates;
      total_stats.negative_updates += st.negative_updates;
      total_stats.skipped_negatives += st.skipped_negatives;
    }
  }
  if (stats) *stats = total_stats;
  return model;
}

double mean_positive_edge_loss(const TripartiteGraph& graph, const EmbeddingModel& model,
                               ProximityOrder order) {
  if (graph.edge_count() == 0) throw EmptySupportError("graph has no edges");
  auto score = [&](VertexId u, VertexId v) {
    if (order == ProximityOrder::Second) return pair_score(model, u, v);
    const auto a = model.vertex_vector(u);
    const auto b = model.vertex_vector(v);
    return dot(a.data(), b.data(), model.dim());
  };
  double sum = 0.0;
  for (const auto& e : graph.edges()) {
    sum += edge_loss(score(e.a, e.b), true);
    sum += edge_loss(score(e.b, e.a), true);
  }
  return sum / (2.0 * static_cast<double>(graph.edge_count()));
}

namespace {

void write_u32(std::ostream& out, std::uint32_t x) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(buf, 4);
}

void write_u64(std::ostream& out, std::uint64_t x) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((x >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

void write_f64(std::ostream& out, double x) { write_u64(out, std::bit_cast<std::uint64_t>(x)); }

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4))
    throw CorruptModelError("model file truncated");
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return x;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8))
    throw CorruptModelError("model file truncated");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return x;
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

void save_model_binary(const EmbeddingModel& model, const std::filesystem::path& path) {
  auto out = detail::open_output(path, std::ios::out | std::ios::binary);
  out.write(kModelMagic, sizeof(kModelMagic));
  write_u64(out, model.size());
  write_u64(out, model.dim());
  for (const auto& v : model.vertices()) {
    write_u32(out, static_cast<std::uint32_t>(v.external_id.size()));
    out.write(v.external_id.data(), static_cast<std::streamsize>(v.external_id.size()));
    out.put(static_cast<char>(v.kind));
  }
  for (double x : model.vertex_matrix()) write_f64(out, x);
  for (double x : model.context_matrix()) write_f64(out, x);
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

void save_model_text(const EmbeddingModel& model, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << model.size() << ' ' << model.dim() << '\n';
  for (const auto& v : model.vertices()) {
    out << kind_name(v.kind) << ':' << v.external_id;
    for (double x : model.vertex_vector(v.id)) out << ' ' << detail::format_double(x);
    out << '\n';
  }
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

EmbeddingModel load_model_binary(std::istream& in, const std::string& path) {
  const std::uint64_t n = read_u64(in);
  const std::uint64_t dim = read_u64(in);
  if (dim == 0 || dim > 1'000'000 || n > 100'000'000)
    throw CorruptModelError(path + ": implausible model header");

  std::vector<Vertex> table;
  table.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t len = read_u32(in);
    if (len == 0 || len > (1u << 20)) throw CorruptModelError(path + ": implausible id length");
    std::string id(len, '\0');
    if (!in.read(id.data(), len)) throw CorruptModelError("model file truncated");
    const int kind_byte = in.get();
    if (kind_byte < 0) throw CorruptModelError("model file truncated");
    if (kind_byte > 2) throw CorruptModelError(path + ": invalid vertex kind byte");
    table.push_back(Vertex{0, static_cast<VertexKind>(kind_byte), std::move(id)});
  }

  EmbeddingModel model(std::move(table), dim);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto row = model.vertex_vector(static_cast<VertexId>(i));
    for (std::size_t j = 0; j < dim; ++j) row[j] = read_f64(in);
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    auto row = model.context_vector(static_cast<VertexId>(i));
    for (std::size_t j = 0; j < dim; ++j) row[j] = read_f64(in);
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw CorruptModelError(path + ": trailing bytes after model payload");
  return model;
}

EmbeddingModel load_model_text(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptModelError(path + ": missing model header");
  const auto header = detail::split_ws(detail::strip_cr(line));
  if (header.size() != 2) throw CorruptModelError(path + ": malformed model header");
  const auto n = detail::parse_u64(header[0]);
  const auto dim = detail::parse_u64(header[1]);
  if (!n || !dim || *dim == 0) throw CorruptModelError(path + ": malformed model header");

  std::vector<Vertex> table;
  std::vector<double> values;
  table.reserve(*n);
  values.reserve(*n * *dim);
  for (std::uint64_t i = 0; i < *n; ++i) {
    if (!std::getline(in, line))
      throw CorruptModelError(path + ": expected " + std::to_string(*n) + " rows, got " +
                              std::to_string(i));
    const auto fields = detail::split_ws(detail::strip_cr(line));
    if (fields.size() != 1 + *dim)
      throw CorruptModelError(path + ": row " + std::to_string(i + 2) + " has " +
                              std::to_string(fields.size() ? fields.size() - 1 : 0) +
                              " values, expected " + std::to_string(*dim));
    const auto colon = fields[0].find(':');
    if (colon == std::string_view::npos)
      throw CorruptModelError(path + ": row " + std::to_string(i + 2) + " lacks kind prefix");
    const auto kind = parse_kind(fields[0].substr(0, colon));
    if (!kind)
      throw CorruptModelError(path + ": row " + std::to_string(i + 2) + " has unknown kind");
    table.push_back(Vertex{0, *kind, std::string(fields[0].substr(colon + 1))});
    for (std::size_t j = 0; j < *dim; ++j) {
      const auto value = detail::parse_double(fields[1 + j]);
      if (!value || !std::isfinite(*value))
        throw CorruptModelError(path + ": row " + std::to_string(i + 2) + " has invalid value");
      values.push_back(*value);
    }
  }

  EmbeddingModel model(std::move(table), *dim);
  for (std::size_t i = 0; i < model.size(); ++i) {
    auto row = model.vertex_vector(static_cast<VertexId>(i));
    for (std::size_t j = 0; j < *dim; ++j) row[j] = values[i * *dim + j];
  }
  return model;
}

}  // namespace

void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format) {
  if (format == ModelFormat::Binary)
    save_model_binary(model, path);
  else
    save_model_text(model, path);
}

EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file for reading");

  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (in.gcount() == sizeof(magic) && std::memcmp(magic, kModelMagic, sizeof(magic)) == 0) {
    try {
      return load_model_binary(in, path.string());
    } catch (const CorruptModelError&) {
      throw;
    } catch (const Error& e) {
      throw CorruptModelError(path.string() + ": " + e.what());
    }
  }

  in.clear();
  in.seekg(0);
  try {
    return load_model_text(in, path.string());
  } catch (const CorruptModelError&) {
    throw;
  } catch (const Error& e) {
    throw CorruptModelError(path.string() + ": " + e.what());
  }
}

}  // namespace xmembed
