#pragma once

#include <cstdint>
#include <vector>

#include "mss/interval_tree.hpp"

namespace mss {

/// One hierarchy interval [start, end) in bucket indices.
///
/// Level 1 holds singletons; level l >= 2 holds windows of nominal width
/// 2^(l-1) starting every 2^(l-2) buckets, clipped at T. The root covers
/// [0, T) and sits one level above the widest window level (for T = 1 the
/// single level-1 interval is also the root).
struct Interval {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t level = 1;
  std::uint32_t index = 0;
  bool is_root = false;

  std::uint32_t length() const noexcept { return end - start; }
  bool contains(std::uint32_t t) const noexcept { return start <= t && t < end; }
  std::uint32_t overlap(std::uint32_t s, std::uint32_t e) const noexcept {
    const auto lo = start > s ? start : s;
    const auto hi = end < e ? end : e;
    return hi > lo ? hi - lo : 0;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Nominal window width of a level (1 for level 1).
std::uint32_t level_width(std::uint32_t level);

class SnapshotHierarchy {
 public:
  SnapshotHierarchy() = default;

  std::uint32_t length() const noexcept { return length_; }
  /// Levels 1..level_count(); the root level is the last one.
  std::uint32_t level_count() const noexcept { return static_cast<std::uint32_t>(levels_.size()); }
  const std::vector<Interval>& level(std::uint32_t l) const { return levels_.at(l - 1); }
  const Interval& at(std::uint32_t level, std::uint32_t index) const { return levels_.at(level - 1).at(index); }
  bool contains(std::uint32_t level, std::uint32_t index) const;
  const Interval& root() const { return levels_.back().back(); }

  /// All intervals ordered by (level, index).
  const std::vector<Interval>& all() const noexcept { return all_; }
  std::size_t size() const noexcept { return all_.size(); }
  const IntervalTree& tree() const noexcept { return tree_; }

  /// Intervals that get summary embeddings: everything above level 1, plus
  /// the root when T = 1.
  std::vector<Interval> embeddable() const;

  friend SnapshotHierarchy build_hierarchy(std::uint32_t length);
  friend SnapshotHierarchy build_hierarchy_parallel(std::uint32_t length);

 private:
  void finish();

  std::uint32_t length_ = 0;
  std::vector<std::vector<Interval>> levels_;
  std::vector<Interval> all_;
  IntervalTree tree_;
};

/// Throws std::invalid_argument for length < 1.
SnapshotHierarchy build_hierarchy(std::uint32_t length);
/// Same result, levels generated concurrently.
SnapshotHierarchy build_hierarchy_parallel(std::uint32_t length);

/// Hierarchy interval with maximal Jaccard overlap with [start, end);
/// ties go to the smaller level, then the smaller start.
const Interval& window_query(const SnapshotHierarchy& h, std::uint32_t start, std::uint32_t end);

/// All intervals containing bucket t, ordered by (level, start).
std::vector<Interval> stabbing_query(const SnapshotHierarchy& h, std::uint32_t t);

}  // namespace mss
