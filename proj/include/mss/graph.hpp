#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mss {

using NodeId = std::uint32_t;

enum class Sign : std::int8_t { negative = -1, none = 0, positive = 1 };

std::string_view to_string(Sign s);

/// Undirected edge stored canonically with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
  Sign sign = Sign::none;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected graph over interned node ids.
///
/// Nodes are kept sorted and unique, edges sorted by (u, v) with u < v.
/// Construction normalizes arbitrary input: endpoints are added to the node
/// set, self-loops are dropped and parallel edges are merged (weights summed,
/// sign by majority vote of the merged edges).
class StaticGraph {
 public:
  StaticGraph() = default;
  StaticGraph(std::vector<NodeId> nodes, std::vector<Edge> edges);

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  bool has_node(NodeId n) const;
  /// Position of `n` in nodes(), if present.
  std::optional<std::size_t> local_index(NodeId n) const;
  const Edge* find_edge(NodeId a, NodeId b) const;

  /// Subgraph induced by the nodes for which `keep` is true.
  template <class Pred>
  StaticGraph induced(Pred keep) const {
    std::vector<NodeId> ns;
    for (NodeId n : nodes_)
      if (keep(n)) ns.push_back(n);
    std::vector<Edge> es;
    for (const Edge& e : edges_)
      if (keep(e.u) && keep(e.v)) es.push_back(e);
    return from_sorted(std::move(ns), std::move(es));
  }

  /// Trusted constructor for data that is already canonical.
  static StaticGraph from_sorted(std::vector<NodeId> nodes, std::vector<Edge> edges);

  friend bool operator==(const StaticGraph&, const StaticGraph&) = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
};

/// Accumulates edge occurrences and produces a canonical StaticGraph.
/// Each add_edge call counts as one occurrence; weight is the number of
/// occurrences and the sign is the majority over non-neutral votes.
class GraphBuilder {
 public:
  void add_node(NodeId n);
  void add_edge(NodeId a, NodeId b, Sign sign = Sign::none);
  StaticGraph build() const;

 private:
  struct Tally {
    std::uint32_t count = 0;
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
  };
  std::unordered_map<NodeId, bool> nodes_;
  std::unordered_map<std::uint64_t, Tally> edges_;
};

Sign majority_sign(std::uint32_t positive, std::uint32_t negative);

inline std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Compressed adjacency in local (0..n-1) indices, aligned with g.nodes().
struct Csr {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> neighbors;
  std::vector<double> weights;

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
  std::span<const std::uint32_t> adj(std::size_t i) const {
    return {neighbors.data() + offsets[i], degree(i)};
  }
};

/// Neighbor lists are sorted ascending.
Csr make_csr(const StaticGraph& g);

/// Bidirectional string <-> dense id map.
class NodeDictionary {
 public:
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const NodeDictionary& a, const NodeDictionary& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
};

/// Sequence of T contiguous buckets; empty buckets are kept as empty graphs.
struct DynamicGraph {
  std::vector<StaticGraph> graphs;
  std::int64_t bucket_width = 3600;
  std::int64_t origin = 0;
  NodeDictionary dictionary;

  std::size_t length() const noexcept { return graphs.size(); }
  std::span<const StaticGraph> window(std::size_t start, std::size_t end) const {
    return std::span<const StaticGraph>(graphs).subspan(start, end - start);
  }

  friend bool operator==(const DynamicGraph&, const DynamicGraph&) = default;
};

}  // namespace mss
