#include "mss/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace mss {

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::negative: return "negative";
    case Sign::positive: return "positive";
    case Sign::none: break;
  }
  return "none";
}

Sign majority_sign(std::uint32_t positive, std::uint32_t negative) {
  if (positive > negative) return Sign::positive;
  if (negative > positive) return Sign::negative;
  return Sign::none;
}

StaticGraph::StaticGraph(std::vector<NodeId> nodes, std::vector<Edge> edges) {
  for (Edge& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    nodes.push_back(e.u);
    nodes.push_back(e.v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  std::uint32_t pos = 0, neg = 0;
  for (const Edge& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      merged.back().weight += e.weight;
    } else {
      if (!merged.empty()) merged.back().sign = majority_sign(pos, neg);
      merged.push_back(e);
      pos = neg = 0;
    }
    pos += e.sign == Sign::positive;
    neg += e.sign == Sign::negative;
  }
  if (!merged.empty()) merged.back().sign = majority_sign(pos, neg);

  nodes_ = std::move(nodes);
  edges_ = std::move(merged);
}

StaticGraph StaticGraph::from_sorted(std::vector<NodeId> nodes, std::vector<Edge> edges) {
  StaticGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  return g;
}

bool StaticGraph::has_node(NodeId n) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), n);
}

std::optional<std::size_t> StaticGraph::local_index(NodeId n) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), n);
  if (it == nodes_.end() || *it != n) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

const Edge* StaticGraph::find_edge(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                             [](const Edge& e, const std::pair<NodeId, NodeId>& k) {
                               return e.u != k.first ? e.u < k.first : e.v < k.second;
                             });
  if (it == edges_.end() || it->u != a || it->v != b) return nullptr;
  return &*it;
}

void GraphBuilder::add_node(NodeId n) { nodes_.emplace(n, true); }

void GraphBuilder::add_edge(NodeId a, NodeId b, Sign sign) {
  if (a == b) return;
  add_node(a);
  add_node(b);
  Tally& t = edges_[edge_key(a, b)];
  ++t.count;
  t.pos += sign == Sign::positive;
  t.neg += sign == Sign::negative;
}

StaticGraph GraphBuilder::build() const {
  std::vector<NodeId> nodes;
  nodes.reserve(nodes_.size());
  for (const auto& [n, _] : nodes_) nodes.push_back(n);
  std::sort(nodes.begin(), nodes.end());

  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const auto& [key, t] : edges_) {
    edges.push_back(Edge{static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu),
                         static_cast<double>(t.count), majority_sign(t.pos, t.neg)});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return StaticGraph::from_sorted(std::move(nodes), std::move(edges));
}

Csr make_csr(const StaticGraph& g) {
  const std::size_t n = g.node_count();
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  std::vector<std::pair<std::size_t, std::size_t>> local;
  local.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const std::size_t a = *g.local_index(e.u);
    const std::size_t b = *g.local_index(e.v);
    local.emplace_back(a, b);
    ++csr.offsets[a + 1];
    ++csr.offsets[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  csr.neighbors.resize(csr.offsets[n]);
  csr.weights.resize(csr.offsets[n]);
  std::vector<std::size_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (std::size_t i = 0; i < local.size(); ++i) {
    const auto [a, b] = local[i];
    const double w = g.edges()[i].weight;
    csr.neighbors[fill[a]] = static_cast<std::uint32_t>(b);
    csr.weights[fill[a]++] = w;
    csr.neighbors[fill[b]] = static_cast<std::uint32_t>(a);
    csr.weights[fill[b]++] = w;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = csr.offsets[i], hi = csr.offsets[i + 1];
    std::vector<std::pair<std::uint32_t, double>> row;
    row.reserve(hi - lo);
    for (std::size_t j = lo; j < hi; ++j) row.emplace_back(csr.neighbors[j], csr.weights[j]);
    std::sort(row.begin(), row.end());
    for (std::size_t j = lo; j < hi; ++j) {
      csr.neighbors[j] = row[j - lo].first;
      csr.weights[j] = row[j - lo].second;
    }
  }
  return csr;
}

NodeId NodeDictionary::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<NodeId> NodeDictionary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace mss
