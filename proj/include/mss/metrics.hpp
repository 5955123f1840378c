#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "mss/graph.hpp"

namespace mss {

/// Undirected, unweighted structural metrics of one graph.
struct GraphMetrics {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;
  double avg_clustering = 0.0;
  double transitivity = 0.0;
  std::size_t components = 0;

  /// Value of a field by name ("node_count", "density", ...).
  std::optional<double> field(std::string_view name) const;

  friend bool operator==(const GraphMetrics&, const GraphMetrics&) = default;
};

GraphMetrics graph_metrics(const StaticGraph& g);

}  // namespace mss
