#include <algorithm>
#include <stdexcept>

#include "mss/binary_io.hpp"
#include "mss/embed.hpp"

namespace mss {

std::string_view to_string(EmbeddingMethod m) {
  switch (m) {
    case EmbeddingMethod::fgsd: return "fgsd";
    case EmbeddingMethod::wl_doc: return "wl_doc";
    case EmbeddingMethod::wl_doc_line: return "wl_doc_line";
  }
  return "fgsd";
}

std::optional<EmbeddingMethod> parse_embedding_method(std::string_view s) {
  for (auto m : {EmbeddingMethod::fgsd, EmbeddingMethod::wl_doc, EmbeddingMethod::wl_doc_line})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

WlDocument wl_features(const StaticGraph& g, std::uint32_t iterations) {
  const Csr csr = make_csr(g);
  const std::size_t n = csr.size();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(csr.degree(i));

  WlDocument doc;
  doc.tokens.reserve(n * (iterations + 1));
  doc.tokens.insert(doc.tokens.end(), labels.begin(), labels.end());
  std::vector<std::string> next(n);
  std::vector<std::string_view> around;
  std::string buf;
  for (std::uint32_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      around.clear();
      for (auto j : csr.adj(i)) around.push_back(labels[j]);
      std::sort(around.begin(), around.end());
      buf = labels[i];
      buf += '|';
      for (auto s : around) {
        buf += s;
        buf += ',';
      }
      next[i] = hash_hex(content_hash(buf));
    }
    labels.swap(next);
    doc.tokens.insert(doc.tokens.end(), labels.begin(), labels.end());
  }
  return doc;
}

StaticGraph line_graph(const StaticGraph& g) {
  if (g.edge_count() == 0) throw std::invalid_argument("line_graph: graph has no edges");
  const auto& es = g.edges();
  std::vector<std::vector<NodeId>> incident(g.node_count());
  for (std::size_t i = 0; i < es.size(); ++i) {
    incident[*g.local_index(es[i].u)].push_back(static_cast<NodeId>(i));
    incident[*g.local_index(es[i].v)].push_back(static_cast<NodeId>(i));
  }
  std::vector<NodeId> nodes(es.size());
  for (std::size_t i = 0; i < es.size(); ++i) nodes[i] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (const auto& inc : incident)
    for (std::size_t a = 0; a < inc.size(); ++a)
      for (std::size_t b = a + 1; b < inc.size(); ++b) edges.push_back({inc[a], inc[b], 1.0, Sign::none});
  // two edges share at most one endpoint in a simple graph, so no duplicates
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  return StaticGraph::from_sorted(std::move(nodes), std::move(edges));
}

Embedding median_embedding(std::span<const Embedding> vectors) {
  if (vectors.empty()) throw std::invalid_argument("median_embedding: no vectors");
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != dim) throw std::invalid_argument("median_embedding: dimension mismatch");
  Embedding out(dim);
  std::vector<float> column(vectors.size());
  const std::size_t mid = column.size() / 2;
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t i = 0; i < vectors.size(); ++i) column[i] = vectors[i][c];
    std::sort(column.begin(), column.end());
    out[c] = column.size() % 2 ? column[mid] : static_cast<float>((double{column[mid - 1]} + column[mid]) / 2.0);
  }
  return out;
}

WlDocument method_document(const StaticGraph& g, EmbeddingMethod m, std::uint32_t wl_iterations) {
  if (m == EmbeddingMethod::wl_doc_line && g.edge_count() > 0) return wl_features(line_graph(g), wl_iterations);
  return wl_features(g, wl_iterations);
}

}  // namespace mss
