#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

enum class LayoutAlgorithm : std::uint8_t { fruchterman_reingold, kamada_kawai };

std::string_view to_string(LayoutAlgorithm a);
std::optional<LayoutAlgorithm> parse_layout_algorithm(std::string_view s);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct LayoutParams {
  LayoutAlgorithm algorithm = LayoutAlgorithm::fruchterman_reingold;
  std::uint64_t seed = 1;
  std::uint32_t iterations = 300;
  /// Ideal edge length: the two-body equilibrium distance of both algorithms.
  double edge_length = 1.0;
};

struct LayoutResult {
  LayoutAlgorithm algorithm = LayoutAlgorithm::fruchterman_reingold;
  std::uint64_t seed = 0;
  std::vector<NodeId> nodes;     // ascending
  std::vector<Point> positions;  // aligned with nodes

  std::optional<Point> position(NodeId n) const;
};

/// Force-directed layout of `g`, centered on the origin. Edge weights are
/// ignored. Deterministic for a given seed. Throws std::invalid_argument on an
/// empty graph.
LayoutResult global_layout(const StaticGraph& g, const LayoutParams& params = {});

}  // namespace mss
