#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xmembed/errors.hpp"

namespace xmembed {

enum class VertexKind : std::uint8_t { Image = 0, Keyword = 1, Song = 2 };

inline constexpr std::size_t kVertexKindCount = 3;

std::string_view kind_name(VertexKind kind);
std::optional<VertexKind> parse_kind(std::string_view name);

using VertexId = std::uint32_t;

struct Vertex {
  VertexId id;
  VertexKind kind;
  std::string external_id;
};

struct Edge {
  VertexId a;
  VertexId b;
  double weight;
};

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename T>
using StringMap = std::unordered_map<std::string, T, TransparentStringHash, std::equal_to<>>;

// Heterogeneous tripartite network over songs, keywords and images.
//
// Edges are undirected and restricted to song-keyword and image-keyword
// pairs. Re-adding an existing pair accumulates the weight. Vertex ids are
// dense and contiguous in insertion order. Construction is single-writer;
// afterwards the graph is immutable and safe for concurrent reads.
class TripartiteGraph {
 public:
  struct Incidence {
    VertexId neighbor;
    std::size_t edge;
  };

  // Idempotent: returns the existing id when (kind, external_id) is present.
  // external_id must be nonempty and free of whitespace (ids travel through
  // whitespace-delimited file formats).
  VertexId add_vertex(VertexKind kind, std::string_view external_id);

  std::optional<VertexId> find_vertex(VertexKind kind, std::string_view external_id) const;

  // Returns the index of the stored edge. weight must be positive and finite;
  // endpoint kinds must form a song-keyword or image-keyword pair.
  std::size_t add_edge(VertexId a, VertexId b, double weight);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t count_of(VertexKind kind) const {
    return kind_counts_[static_cast<std::size_t>(kind)];
  }

  const Vertex& vertex(VertexId id) const;
  const Edge& edge(std::size_t index) const;
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Incidence> incident(VertexId id) const;

  // Cached weighted degree: sum of incident edge weights.
  double degree(VertexId id) const;

  // Ids of all vertices of one kind, ascending.
  std::vector<VertexId> vertices_of(VertexKind kind) const;

 private:
  void check_vertex_id(VertexId id) const;

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<double> degrees_;
  std::array<std::size_t, kVertexKindCount> kind_counts_{};
  std::array<StringMap<VertexId>, kVertexKindCount> vertex_index_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

struct SongLyrics {
  std::string song_id;
  std::vector<std::string> tokens;
};

struct ManifestRow {
  std::string image_id;
  std::string keyword;
  std::optional<double> relevance;
};

// Connects each song with the keywords occurring in its lyrics; the edge
// weight is the exact token occurrence count. Songs without any matching
// keyword are left out of the graph. Vertices are created lazily, in
// first-edge order. Returns the number of edges added.
std::size_t build_song_keyword_edges(TripartiteGraph& graph,
                                     std::span<const SongLyrics> lyrics,
                                     std::span<const std::string> keywords);

// One edge per manifest row; relevance defaults to 1.0. Referenced keywords
// must already exist in the graph. Returns the number of edges added.
std::size_t build_image_keyword_edges(TripartiteGraph& graph,
                                      std::span<const ManifestRow> manifest);

// Edge TSV: src_kind, src_id, dst_kind, dst_id, weight. '#' lines are
// comments. save_edges emits edges in insertion order with enough digits
// for an exact round trip.
TripartiteGraph load_edges(const std::filesystem::path& path);
void save_edges(const TripartiteGraph& graph, const std::filesystem::path& path);

// Corpus file loaders (formats documented in the README).
std::vector<SongLyrics> load_lyrics(const std::filesystem::path& path);
std::vector<std::string> load_keywords(const std::filesystem::path& path);
std::vector<ManifestRow> load_manifest(const std::filesystem::path& path);

}  // namespace xmembed
