#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

/// Node-to-community assignment plus the collapsed meta-graph.
struct CommunityPartition {
  std::vector<NodeId> nodes;               // input graph's nodes, ascending
  std::vector<std::uint32_t> assignment;   // community of nodes[i]
  std::vector<std::vector<NodeId>> members;
  /// One meta-node per community (id = community id); meta-edge weight is the
  /// total weight of edges running between the two communities.
  StaticGraph meta_graph;
  double modularity = 0.0;

  std::size_t community_count() const noexcept { return members.size(); }
  std::uint32_t community_of(NodeId n) const;
};

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
///
/// Starts from singletons and repeatedly merges the connected pair of
/// communities with the largest modularity gain while that gain is positive.
/// Equal gains are resolved by the smallest (community, community) pair.
/// Community ids in the result are contiguous and ordered by smallest member.
CommunityPartition cluster_communities(const StaticGraph& g);

/// Weighted Newman modularity of `assignment` (aligned with g.nodes()).
double modularity(const StaticGraph& g, std::span<const std::uint32_t> assignment);

}  // namespace mss
