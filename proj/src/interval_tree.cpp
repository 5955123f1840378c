#include "mss/interval_tree.hpp"

#include <algorithm>

namespace mss {

IntervalTree::IntervalTree(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.payload < b.payload;
  });
  max_end_.assign(entries_.size(), 0);
  build_max(0, entries_.size());
}

std::uint32_t IntervalTree::build_max(std::size_t lo, std::size_t hi) {
  if (lo >= hi) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::uint32_t m = std::max({entries_[mid].end, build_max(lo, mid), build_max(mid + 1, hi)});
  max_end_[mid] = m;
  return m;
}

void IntervalTree::collect(std::size_t lo, std::size_t hi, std::uint32_t qs, std::uint32_t qe,
                           std::vector<std::size_t>& out) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  if (max_end_[mid] <= qs) return;  // nothing in this subtree reaches the query
  collect(lo, mid, qs, qe, out);
  const Entry& e = entries_[mid];
  if (e.start >= qe) return;  // this and everything to the right start too late
  if (e.end > qs) out.push_back(e.payload);
  collect(mid + 1, hi, qs, qe, out);
}

std::vector<std::size_t> IntervalTree::overlapping(std::uint32_t start, std::uint32_t end) const {
  std::vector<std::size_t> out;
  if (start < end) collect(0, entries_.size(), start, end, out);
  return out;
}

}  // namespace mss
