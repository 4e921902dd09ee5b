#include "xmembed/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "io_util.hpp"

namespace xmembed {

namespace {

bool allowed_kind_pair(VertexKind a, VertexKind b) {
  if (a == VertexKind::Keyword) std::swap(a, b);
  return b == VertexKind::Keyword &&
         (a == VertexKind::Song || a == VertexKind::Image);
}

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string_view kind_name(VertexKind kind) {
  switch (kind) {
    case VertexKind::Image: return "image";
    case VertexKind::Keyword: return "keyword";
    case VertexKind::Song: return "song";
  }
  return "unknown";
}

std::optional<VertexKind> parse_kind(std::string_view name) {
  if (name == "image") return VertexKind::Image;
  if (name == "keyword") return VertexKind::Keyword;
  if (name == "song") return VertexKind::Song;
  return std::nullopt;
}

VertexId TripartiteGraph::add_vertex(VertexKind kind, std::string_view external_id) {
  if (external_id.empty())
    throw InvalidInputError("vertex external_id must be nonempty");
  if (has_whitespace(external_id))
    throw InvalidInputError("vertex external_id must not contain whitespace: \"" +
                            std::string(external_id) + "\"");
  auto& index = vertex_index_[static_cast<std::size_t>(kind)];
  if (auto it = index.find(external_id); it != index.end()) return it->second;

  const auto id = static_cast<VertexId>(vertices_.size());
  vertices_.push_back(Vertex{id, kind, std::string(external_id)});
  adjacency_.emplace_back();
  degrees_.push_back(0.0);
  kind_counts_[static_cast<std::size_t>(kind)] += 1;
  index.emplace(std::string(external_id), id);
  return id;
}

std::optional<VertexId> TripartiteGraph::find_vertex(VertexKind kind,
                                                     std::string_view external_id) const {
  const auto& index = vertex_index_[static_cast<std::size_t>(kind)];
  if (auto it = index.find(external_id); it != index.end()) return it->second;
  return std::nullopt;
}

void TripartiteGraph::check_vertex_id(VertexId id) const {
  if (id >= vertices_.size())
    throw InvalidInputError("vertex id " + std::to_string(id) + " out of range");
}

std::size_t TripartiteGraph::add_edge(VertexId a, VertexId b, double weight) {
  check_vertex_id(a);
  check_vertex_id(b);
  if (!std::isfinite(weight) || weight <= 0.0)
    throw InvalidWeightError("edge weight must be positive and finite");
  if (!allowed_kind_pair(vertices_[a].kind, vertices_[b].kind))
    throw KindViolationError(std::string("edge kinds must be song-keyword or image-keyword, got ") +
                             std::string(kind_name(vertices_[a].kind)) + "-" +
                             std::string(kind_name(vertices_[b].kind)));

  degrees_[a] += weight;
  degrees_[b] += weight;

  const auto key = pair_key(a, b);
  if (auto it = edge_index_.find(key); it != edge_index_.end()) {
    edges_[it->second].weight += weight;
    return it->second;
  }
  const std::size_t index = edges_.size();
  edges_.push_back(Edge{a, b, weight});
  adjacency_[a].push_back(Incidence{b, index});
  adjacency_[b].push_back(Incidence{a, index});
  edge_index_.emplace(key, index);
  return index;
}

const Vertex& TripartiteGraph::vertex(VertexId id) const {
  check_vertex_id(id);
  return vertices_[id];
}

const Edge& TripartiteGraph::edge(std::size_t index) const {
  if (index >= edges_.size())
    throw InvalidInputError("edge index " + std::to_string(index) + " out of range");
  return edges_[index];
}

std::span<const TripartiteGraph::Incidence> TripartiteGraph::incident(VertexId id) const {
  check_vertex_id(id);
  return adjacency_[id];
}

double TripartiteGraph::degree(VertexId id) const {
  check_vertex_id(id);
  return degrees_[id];
}

std::vector<VertexId> TripartiteGraph::vertices_of(VertexKind kind) const {
  std::vector<VertexId> out;
  for (const auto& v : vertices_)
    if (v.kind == kind) out.push_back(v.id);
  return out;
}

std::size_t build_song_keyword_edges(TripartiteGraph& graph,
                                     std::span<const SongLyrics> lyrics,
                                     std::span<const std::string> keywords) {
  if (keywords.empty()) throw InvalidInputError("keyword set must be nonempty");

  // Deduplicate while keeping first-occurrence order; edges are emitted per
  // song in this keyword order so construction is reproducible.
  std::vector<std::string_view> keyword_order;
  StringMap<std::size_t> keyword_slot;
  for (const auto& k : keywords) {
    if (keyword_slot.emplace(k, keyword_order.size()).second) keyword_order.push_back(k);
  }

  std::size_t added = 0;
  std::vector<std::size_t> counts(keyword_order.size(), 0);
  for (const auto& song : lyrics) {
    std::fill(counts.begin(), counts.end(), 0);
    bool any = false;
    for (const auto& token : song.tokens) {
      if (auto it = keyword_slot.find(token); it != keyword_slot.end()) {
        counts[it->second] += 1;
        any = true;
      }
    }
    if (!any) continue;  // song has no keyword: excluded from the graph
    const VertexId song_id = graph.add_vertex(VertexKind::Song, song.song_id);
    for (std::size_t slot = 0; slot < counts.size(); ++slot) {
      if (counts[slot] == 0) continue;
      const VertexId kw_id = graph.add_vertex(VertexKind::Keyword, keyword_order[slot]);
      graph.add_edge(song_id, kw_id, static_cast<double>(counts[slot]));
      ++added;
    }
  }
  return added;
}

std::size_t build_image_keyword_edges(TripartiteGraph& graph,
                                      std::span<const ManifestRow> manifest) {
  std::size_t added = 0;
  for (const auto& row : manifest) {
    const auto kw = graph.find_vertex(VertexKind::Keyword, row.keyword);
    if (!kw)
      throw UnresolvedReferenceError("manifest references unknown keyword \"" + row.keyword + "\"");
    const VertexId image_id = graph.add_vertex(VertexKind::Image, row.image_id);
    graph.add_edge(image_id, *kw, row.relevance.value_or(1.0));
    ++added;
  }
  return added;
}

TripartiteGraph load_edges(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  TripartiteGraph graph;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.size() != 5)
      throw ParseError(path.string(), line_no,
                       "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    const auto src_kind = parse_kind(fields[0]);
    const auto dst_kind = parse_kind(fields[2]);
    if (!src_kind) throw ParseError(path.string(), line_no, "unknown vertex kind \"" + std::string(fields[0]) + "\"");
    if (!dst_kind) throw ParseError(path.string(), line_no, "unknown vertex kind \"" + std::string(fields[2]) + "\"");
    const auto weight = detail::parse_double(fields[4]);
    if (!weight || !std::isfinite(*weight) || *weight <= 0.0)
      throw ParseError(path.string(), line_no, "invalid edge weight \"" + std::string(fields[4]) + "\"");
    try {
      const VertexId a = graph.add_vertex(*src_kind, fields[1]);
      const VertexId b = graph.add_vertex(*dst_kind, fields[3]);
      graph.add_edge(a, b, *weight);
    } catch (const KindViolationError& e) {
      throw KindViolationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const InvalidInputError& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  return graph;
}

void save_edges(const TripartiteGraph& graph, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& e : graph.edges()) {
    const auto& a = graph.vertex(e.a);
    const auto& b = graph.vertex(e.b);
    out << kind_name(a.kind) << '\t' << a.external_id << '\t'
        << kind_name(b.kind) << '\t' << b.external_id << '\t'
        << detail::format_double(e.weight) << '\n';
  }
  if (!out) throw ParseError(path.string(), 0, "write failed");
}

std::vector<SongLyrics> load_lyrics(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<SongLyrics> out;
  StringMap<std::size_t> by_song;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.empty() || fields[0].empty())
      throw ParseError(path.string(), line_no, "missing song id");
    std::vector<std::string_view> tokens;
    if (fields.size() > 1) tokens = detail::split_ws(fields[1]);
    if (fields.size() > 2)
      throw ParseError(path.string(), line_no, "expected song_id<TAB>tokens");

    auto it = by_song.find(fields[0]);
    if (it == by_song.end()) {
      it = by_song.emplace(std::string(fields[0]), out.size()).first;
      out.push_back(SongLyrics{std::string(fields[0]), {}});
    }
    for (const auto& t : tokens) out[it->second].tokens.emplace_back(t);
  }
  return out;
}

std::vector<std::string> load_keywords(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split_ws(text);
    for (const auto& f : fields) out.emplace_back(f);
  }
  return out;
}

std::vector<ManifestRow> load_manifest(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::vector<ManifestRow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (detail::is_blank_or_comment(text)) continue;
    const auto fields = detail::split(text, '\t');
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(path.string(), line_no, "expected image_id<TAB>keyword[<TAB>relevance]");
    ManifestRow row{std::string(fields[0]), std::string(fields[1]), std::nullopt};
    if (fields.size() == 3) {
      const auto relevance = detail::parse_double(fields[2]);
      if (!relevance)
        throw ParseError(path.string(), line_no, "invalid relevance \"" + std::string(fields[2]) + "\"");
      row.relevance = *relevance;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace xmembed
