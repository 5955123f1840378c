#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mss {

/// Static augmented interval tree over half-open [start, end) ranges.
///
/// Intervals are sorted by (start, end) and laid out as an implicit balanced
/// BST; each subtree records its maximum end so that overlap queries visit
/// O(log n + hits) nodes. Payloads are the caller's indices.
class IntervalTree {
 public:
  struct Entry {
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    std::size_t payload = 0;
  };

  IntervalTree() = default;
  explicit IntervalTree(std::vector<Entry> entries);

  /// Payloads of all intervals containing point t.
  std::vector<std::size_t> stab(std::uint32_t t) const { return overlapping(t, t + 1); }
  /// Payloads of all intervals intersecting [start, end).
  std::vector<std::size_t> overlapping(std::uint32_t start, std::uint32_t end) const;

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  void collect(std::size_t lo, std::size_t hi, std::uint32_t qs, std::uint32_t qe,
               std::vector<std::size_t>& out) const;
  std::uint32_t build_max(std::size_t lo, std::size_t hi);

  std::vector<Entry> entries_;
  std::vector<std::uint32_t> max_end_;  // per node, over its subtree [lo, hi)
};

}  // namespace mss
