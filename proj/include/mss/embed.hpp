#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mss/doc2vec.hpp"
#include "mss/graph.hpp"
#include "mss/summarize.hpp"

namespace mss {

using Embedding = std::vector<float>;

enum class EmbeddingMethod : std::uint8_t { fgsd = 0, wl_doc = 1, wl_doc_line = 2 };

std::string_view to_string(EmbeddingMethod m);
std::optional<EmbeddingMethod> parse_embedding_method(std::string_view s);

struct FgsdParams {
  std::uint32_t bins = 200;
  double range = 20.0;
};

/// Histogram of harmonic spectral distances over all n^2 ordered node pairs.
///
/// Distances come from the pseudoinverse of the unnormalized Laplacian of the
/// unweighted graph: S(x, y) = L+(x,x) + L+(y,y) - 2 L+(x,y). Bucket b covers
/// [b, b+1) * range / bins; values at or beyond `range` land in the last
/// bucket. Raw counts, so the entries sum to n^2. Throws on an empty graph.
Embedding fgsd_embed(const StaticGraph& g, const FgsdParams& params = {});

/// Weisfeiler-Lehman subtree tokens: iteration 0 labels are node degrees,
/// each later label hashes (own label, sorted neighbor labels). The document
/// holds every node's label from every iteration 0..iterations.
WlDocument wl_features(const StaticGraph& g, std::uint32_t iterations = 2);

/// Edge-to-vertex dual: node i is g.edges()[i]; two nodes are adjacent when
/// their edges share an endpoint. Throws on a graph without edges.
StaticGraph line_graph(const StaticGraph& g);

/// Coordinate-wise median; even counts take the mean of the two middle values.
Embedding median_embedding(std::span<const Embedding> vectors);

/// Document for the WL-based methods; line-graph documents fall back to the
/// plain graph when it has no edges.
WlDocument method_document(const StaticGraph& g, EmbeddingMethod m, std::uint32_t wl_iterations);

struct EmbeddingRecord {
  std::uint32_t level = 0;
  std::uint32_t index = 0;
  SummaryType summary = SummaryType::union_graph;
  Embedding vector;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// All-zero vectors mark empty summaries; they are never indexed.
bool is_sentinel(const EmbeddingRecord& r);

struct EmbeddingSet {
  EmbeddingMethod method = EmbeddingMethod::fgsd;
  std::uint32_t dim = 0;
  std::vector<EmbeddingRecord> records;

  const EmbeddingRecord* find(std::uint32_t level, std::uint32_t index, SummaryType t) const;
  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;
};

struct EmbedParams {
  EmbeddingMethod method = EmbeddingMethod::fgsd;
  FgsdParams fgsd;
  std::uint32_t wl_iterations = 2;
  Doc2VecParams doc;
  std::vector<SummaryType> summaries{kSummaryTypes.begin(), kSummaryTypes.end()};
};

/// One record per (embeddable snapshot, requested summary type), ordered by
/// (level, index, summary). Per-snapshot work runs concurrently; document
/// training is a single deterministic job.
EmbeddingSet embed_hierarchy(const SnapshotStore& store, const EmbedParams& params);
/// Sequential reference for embed_hierarchy.
EmbeddingSet embed_hierarchy_serial(const SnapshotStore& store, const EmbedParams& params);

/// Binary matrix file ("MSSE"): magic | u16 version | u8 method | u32 dim |
/// u32 count | count x (u32 level, u32 index, u8 summary) | count x dim f32.
std::vector<char> encode_embeddings(const EmbeddingSet& set);
EmbeddingSet decode_embeddings(std::string_view bytes);

}  // namespace mss
