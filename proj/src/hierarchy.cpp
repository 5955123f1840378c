#include "mss/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>

namespace mss {
namespace {

std::uint32_t window_levels(std::uint32_t length) {
  // number of levels with width >= 2: widths 2, 4, ..., 2^ceil(log2 T)
  std::uint32_t levels = 0;
  std::uint64_t width = 1;
  while (width < length) {
    width *= 2;
    ++levels;
  }
  return levels;
}

std::vector<Interval> make_level(std::uint32_t length, std::uint32_t level) {
  std::vector<Interval> out;
  if (level == 1) {
    out.reserve(length);
    for (std::uint32_t t = 0; t < length; ++t) out.push_back({t, t + 1, 1, t, false});
    return out;
  }
  const std::uint32_t width = level_width(level);
  const std::uint32_t stride = width / 2;
  std::uint32_t k = 0;
  for (std::uint64_t s = 0; s < length; s += stride, ++k) {
    const auto start = static_cast<std::uint32_t>(s);
    const auto end = static_cast<std::uint32_t>(std::min<std::uint64_t>(s + width, length));
    out.push_back({start, end, level, k, false});
  }
  return out;
}

void check_length(std::uint32_t length) {
  if (length < 1) throw std::invalid_argument("build_hierarchy: T must be at least 1");
}

}  // namespace

std::uint32_t level_width(std::uint32_t level) { return level <= 1 ? 1u : 1u << (level - 1); }

bool SnapshotHierarchy::contains(std::uint32_t level, std::uint32_t index) const {
  return level >= 1 && level <= levels_.size() && index < levels_[level - 1].size();
}

std::vector<Interval> SnapshotHierarchy::embeddable() const {
  std::vector<Interval> out;
  for (const Interval& iv : all_)
    if (iv.level >= 2) out.push_back(iv);
  return out;
}

void SnapshotHierarchy::finish() {
  // The root always gets its own level, even when it repeats the single bucket of T = 1.
  const auto root_level = static_cast<std::uint32_t>(levels_.size() + 1);
  levels_.push_back({Interval{0, length_, root_level, 0, true}});
  all_.clear();
  for (const auto& lvl : levels_) all_.insert(all_.end(), lvl.begin(), lvl.end());
  std::vector<IntervalTree::Entry> entries;
  entries.reserve(all_.size());
  for (std::size_t i = 0; i < all_.size(); ++i) entries.push_back({all_[i].start, all_[i].end, i});
  tree_ = IntervalTree(std::move(entries));
}

SnapshotHierarchy build_hierarchy(std::uint32_t length) {
  check_length(length);
  SnapshotHierarchy h;
  h.length_ = length;
  const std::uint32_t levels = 1 + window_levels(length);
  for (std::uint32_t l = 1; l <= levels; ++l) h.levels_.push_back(make_level(length, l));
  h.finish();
  return h;
}

SnapshotHierarchy build_hierarchy_parallel(std::uint32_t length) {
  check_length(length);
  SnapshotHierarchy h;
  h.length_ = length;
  const auto levels = static_cast<int>(1 + window_levels(length));
  h.levels_.resize(static_cast<std::size_t>(levels));
#pragma omp parallel for schedule(dynamic)
  for (int l = 1; l <= levels; ++l) h.levels_[static_cast<std::size_t>(l - 1)] = make_level(length, static_cast<std::uint32_t>(l));
  h.finish();
  return h;
}

const Interval& window_query(const SnapshotHierarchy& h, std::uint32_t start, std::uint32_t end) {
  if (start >= end || end > h.length()) throw std::invalid_argument("window_query: invalid range");
  const Interval* best = nullptr;
  std::uint64_t best_inter = 0, best_union = 1;
  for (std::size_t idx : h.tree().overlapping(start, end)) {
    const Interval& iv = h.all()[idx];
    const std::uint64_t inter = iv.overlap(start, end);
    const std::uint64_t uni = std::uint64_t{iv.length()} + (end - start) - inter;
    if (best) {
      const std::uint64_t lhs = inter * best_union, rhs = best_inter * uni;
      if (lhs < rhs) continue;
      if (lhs == rhs && (iv.level > best->level || (iv.level == best->level && iv.start >= best->start))) continue;
    }
    best = &iv;
    best_inter = inter;
    best_union = uni;
  }
  return *best;  // the root overlaps every valid query
}

std::vector<Interval> stabbing_query(const SnapshotHierarchy& h, std::uint32_t t) {
  if (t >= h.length()) throw std::invalid_argument("stabbing_query: bucket out of range");
  std::vector<Interval> out;
  for (std::size_t idx : h.tree().stab(t)) out.push_back(h.all()[idx]);
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
    return a.level != b.level ? a.level < b.level : a.start < b.start;
  });
  return out;
}

}  // namespace mss
