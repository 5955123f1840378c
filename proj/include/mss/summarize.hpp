#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mss/graph.hpp"
#include "mss/hierarchy.hpp"
#include "mss/metrics.hpp"

namespace mss {

enum class SummaryType : std::uint8_t { union_graph = 0, intersection = 1, disjoint = 2 };

inline constexpr std::array<SummaryType, 3> kSummaryTypes{SummaryType::union_graph, SummaryType::intersection,
                                                          SummaryType::disjoint};

std::string_view to_string(SummaryType t);
std::optional<SummaryType> parse_summary_type(std::string_view s);

/// Union of node and edge sets; edge weight = number of member graphs that
/// contain the edge, sign = majority over those members. Throws on empty input.
StaticGraph union_graph(std::span<const StaticGraph> graphs);
/// Nodes appearing in more than `threshold` graphs, and edges appearing more
/// than `threshold` times between such nodes.
StaticGraph intersection_graph(std::span<const StaticGraph> graphs, std::uint32_t threshold);
/// Nodes appearing in fewer than `threshold` graphs, and edges appearing fewer
/// than `threshold` times between such nodes. A node that appears exactly
/// `threshold` times is in neither summary.
StaticGraph disjoint_graph(std::span<const StaticGraph> graphs, std::uint32_t threshold);

struct SummaryGraphs {
  StaticGraph union_graph;
  StaticGraph intersection;
  StaticGraph disjoint;
};

/// All three summaries from a single counting pass.
SummaryGraphs summarize_window(std::span<const StaticGraph> graphs, std::uint32_t threshold);

/// Default i: the overlap between consecutive windows, floor(length / 2).
std::uint32_t default_threshold(const Interval& iv);

/// Per-build policy for the intersection/disjoint threshold. A fixed value is
/// clamped to each window's length.
struct ThresholdPolicy {
  std::optional<std::uint32_t> fixed;
  std::uint32_t for_interval(const Interval& iv) const;
};

struct Snapshot {
  Interval interval;
  SummaryGraphs summaries;
  std::uint32_t threshold = 0;
  std::array<GraphMetrics, 3> metrics{};

  const StaticGraph& summary(SummaryType t) const;
  const GraphMetrics& metrics_of(SummaryType t) const { return metrics[static_cast<std::size_t>(t)]; }
};

Snapshot make_snapshot(const DynamicGraph& dg, const Interval& iv, const ThresholdPolicy& policy = {});

/// Summaries for every interval, computed concurrently across intervals.
std::vector<Snapshot> summarize_all(const DynamicGraph& dg, std::span<const Interval> intervals,
                                    const ThresholdPolicy& policy = {});
/// Sequential reference for summarize_all.
std::vector<Snapshot> summarize_all_serial(const DynamicGraph& dg, std::span<const Interval> intervals,
                                           const ThresholdPolicy& policy = {});

/// Lazily computed, cached snapshots for one hierarchy. Safe for concurrent
/// readers; each snapshot is computed at most once.
class SnapshotStore {
 public:
  SnapshotStore(const DynamicGraph& dg, const SnapshotHierarchy& h, ThresholdPolicy policy = {});

  const Snapshot& get(std::uint32_t level, std::uint32_t index) const;
  const Snapshot& at(std::size_t flat_index) const;
  /// Computes every snapshot not yet cached (in parallel).
  void materialize_all() const;
  /// Seeds a cache slot with precomputed summaries (e.g. loaded from disk).
  void seed(std::size_t flat_index, Snapshot snapshot);
  std::size_t computed() const;
  const SnapshotHierarchy& hierarchy() const noexcept { return *hierarchy_; }
  const DynamicGraph& graph() const noexcept { return *graph_; }

 private:
  std::size_t flat(std::uint32_t level, std::uint32_t index) const;

  const DynamicGraph* graph_;
  const SnapshotHierarchy* hierarchy_;
  ThresholdPolicy policy_;
  std::vector<std::size_t> level_offsets_;
  mutable std::vector<std::unique_ptr<Snapshot>> slots_;
  mutable std::unique_ptr<std::once_flag[]> once_;
  mutable std::atomic<std::size_t> computed_{0};
};

}  // namespace mss
