#include <algorithm>

#include "mss/binary_io.hpp"
#include "mss/embed.hpp"

namespace mss {

bool is_sentinel(const EmbeddingRecord& r) {
  return std::all_of(r.vector.begin(), r.vector.end(), [](float x) { return x == 0.0f; });
}

const EmbeddingRecord* EmbeddingSet::find(std::uint32_t level, std::uint32_t index, SummaryType t) const {
  auto it = std::lower_bound(records.begin(), records.end(), std::tuple{level, index, t}, [](const EmbeddingRecord& r, const auto& key) {
    return std::tuple{r.level, r.index, r.summary} < key;
  });
  if (it == records.end() || it->level != level || it->index != index || it->summary != t) return nullptr;
  return &*it;
}

namespace {

EmbeddingSet embed_impl(const SnapshotStore& store, const EmbedParams& params, bool parallel) {
  std::vector<SummaryType> types = params.summaries;
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());

  EmbeddingSet set;
  set.method = params.method;
  for (const Interval& iv : store.hierarchy().embeddable())
    for (auto t : types) set.records.push_back({iv.level, iv.index, t, {}});
  const auto count = static_cast<std::int64_t>(set.records.size());
  auto graph_of = [&](const EmbeddingRecord& r) -> const StaticGraph& {
    return store.get(r.level, r.index).summary(r.summary);
  };

  if (params.method == EmbeddingMethod::fgsd) {
    set.dim = params.fgsd.bins;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t i = 0; i < count; ++i) {
      auto& r = set.records[static_cast<std::size_t>(i)];
      const StaticGraph& g = graph_of(r);
      r.vector = g.empty() ? Embedding(set.dim, 0.0f) : fgsd_embed(g, params.fgsd);
    }
    return set;
  }

  set.dim = params.doc.dim;
  std::vector<WlDocument> docs(set.records.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    const StaticGraph& g = graph_of(set.records[static_cast<std::size_t>(i)]);
    if (!g.empty()) docs[static_cast<std::size_t>(i)] = method_document(g, params.method, params.wl_iterations);
  }
  std::vector<WlDocument> corpus;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].tokens.empty()) continue;
    corpus.push_back(std::move(docs[i]));
    owner.push_back(i);
  }
  for (auto& r : set.records) r.vector.assign(set.dim, 0.0f);
  if (corpus.empty()) return set;
  const auto vectors = doc_embed_train(corpus, params.doc);
  for (std::size_t d = 0; d < owner.size(); ++d) set.records[owner[d]].vector = vectors[d];
  return set;
}

}  // namespace

EmbeddingSet embed_hierarchy(const SnapshotStore& store, const EmbedParams& params) {
  return embed_impl(store, params, true);
}

EmbeddingSet embed_hierarchy_serial(const SnapshotStore& store, const EmbedParams& params) {
  return embed_impl(store, params, false);
}

}  // namespace mss
