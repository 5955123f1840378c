#include "mss/summarize.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "mss/errors.hpp"

namespace mss {

std::string_view to_string(SummaryType t) {
  switch (t) {
    case SummaryType::union_graph: return "union";
    case SummaryType::intersection: return "intersection";
    case SummaryType::disjoint: return "disjoint";
  }
  return "union";
}

std::optional<SummaryType> parse_summary_type(std::string_view s) {
  for (auto t : kSummaryTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

namespace {

struct Tally {
  std::uint32_t count = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

struct Occurrences {
  std::vector<std::pair<NodeId, std::uint32_t>> nodes;  // sorted by id
  std::vector<std::pair<std::uint64_t, Tally>> edges;   // sorted by key
};

Occurrences count_occurrences(std::span<const StaticGraph> graphs) {
  std::unordered_map<NodeId, std::uint32_t> nodes;
  std::unordered_map<std::uint64_t, Tally> edges;
  for (const StaticGraph& g : graphs) {
    for (NodeId n : g.nodes()) ++nodes[n];
    for (const Edge& e : g.edges()) {
      Tally& t = edges[edge_key(e.u, e.v)];
      ++t.count;
      t.pos += e.sign == Sign::positive;
      t.neg += e.sign == Sign::negative;
    }
  }
  Occurrences occ;
  occ.nodes.assign(nodes.begin(), nodes.end());
  std::sort(occ.nodes.begin(), occ.nodes.end());
  occ.edges.assign(edges.begin(), edges.end());
  std::sort(occ.edges.begin(), occ.edges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return occ;
}

template <class Pred>
StaticGraph select(const Occurrences& occ, Pred keep) {
  std::vector<NodeId> nodes;
  for (const auto& [n, c] : occ.nodes)
    if (keep(c)) nodes.push_back(n);
  auto present = [&](NodeId n) { return std::binary_search(nodes.begin(), nodes.end(), n); };
  std::vector<Edge> edges;
  for (const auto& [key, t] : occ.edges) {
    const auto u = static_cast<NodeId>(key >> 32);
    const auto v = static_cast<NodeId>(key & 0xffffffffu);
    if (keep(t.count) && present(u) && present(v))
      edges.push_back({u, v, static_cast<double>(t.count), majority_sign(t.pos, t.neg)});
  }
  return StaticGraph::from_sorted(std::move(nodes), std::move(edges));
}

void require_nonempty(std::span<const StaticGraph> graphs) {
  if (graphs.empty()) throw std::invalid_argument("summary of an empty graph sequence");
}

}  // namespace

StaticGraph union_graph(std::span<const StaticGraph> graphs) {
  require_nonempty(graphs);
  return select(count_occurrences(graphs), [](std::uint32_t) { return true; });
}

StaticGraph intersection_graph(std::span<const StaticGraph> graphs, std::uint32_t threshold) {
  require_nonempty(graphs);
  return select(count_occurrences(graphs), [threshold](std::uint32_t c) { return c > threshold; });
}

StaticGraph disjoint_graph(std::span<const StaticGraph> graphs, std::uint32_t threshold) {
  require_nonempty(graphs);
  return select(count_occurrences(graphs), [threshold](std::uint32_t c) { return c < threshold; });
}

SummaryGraphs summarize_window(std::span<const StaticGraph> graphs, std::uint32_t threshold) {
  require_nonempty(graphs);
  const Occurrences occ = count_occurrences(graphs);
  return {select(occ, [](std::uint32_t) { return true; }),
          select(occ, [threshold](std::uint32_t c) { return c > threshold; }),
          select(occ, [threshold](std::uint32_t c) { return c < threshold; })};
}

std::uint32_t default_threshold(const Interval& iv) { return iv.length() / 2; }

std::uint32_t ThresholdPolicy::for_interval(const Interval& iv) const {
  return fixed ? std::min(*fixed, iv.length()) : default_threshold(iv);
}

const StaticGraph& Snapshot::summary(SummaryType t) const {
  switch (t) {
    case SummaryType::intersection: return summaries.intersection;
    case SummaryType::disjoint: return summaries.disjoint;
    case SummaryType::union_graph: break;
  }
  return summaries.union_graph;
}

Snapshot make_snapshot(const DynamicGraph& dg, const Interval& iv, const ThresholdPolicy& policy) {
  if (iv.end > dg.length() || iv.start >= iv.end) throw std::invalid_argument("interval outside dynamic graph");
  Snapshot s;
  s.interval = iv;
  s.threshold = policy.for_interval(iv);
  s.summaries = summarize_window(dg.window(iv.start, iv.end), s.threshold);
  for (auto t : kSummaryTypes) s.metrics[static_cast<std::size_t>(t)] = graph_metrics(s.summary(t));
  return s;
}

std::vector<Snapshot> summarize_all(const DynamicGraph& dg, std::span<const Interval> intervals,
                                    const ThresholdPolicy& policy) {
  std::vector<Snapshot> out(intervals.size());
  const auto n = static_cast<std::int64_t>(intervals.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = make_snapshot(dg, intervals[static_cast<std::size_t>(i)], policy);
  return out;
}

std::vector<Snapshot> summarize_all_serial(const DynamicGraph& dg, std::span<const Interval> intervals,
                                           const ThresholdPolicy& policy) {
  std::vector<Snapshot> out;
  out.reserve(intervals.size());
  for (const Interval& iv : intervals) out.push_back(make_snapshot(dg, iv, policy));
  return out;
}

SnapshotStore::SnapshotStore(const DynamicGraph& dg, const SnapshotHierarchy& h, ThresholdPolicy policy)
    : graph_(&dg), hierarchy_(&h), policy_(policy) {
  if (h.length() != dg.length()) throw std::invalid_argument("hierarchy does not match dynamic graph length");
  std::size_t offset = 0;
  for (std::uint32_t l = 1; l <= h.level_count(); ++l) {
    level_offsets_.push_back(offset);
    offset += h.level(l).size();
  }
  slots_.resize(h.size());
  once_ = std::make_unique<std::once_flag[]>(h.size());
}

std::size_t SnapshotStore::flat(std::uint32_t level, std::uint32_t index) const {
  if (!hierarchy_->contains(level, index))
    throw NotFoundError("no snapshot at level " + std::to_string(level) + ", index " + std::to_string(index));
  return level_offsets_[level - 1] + index;
}

const Snapshot& SnapshotStore::get(std::uint32_t level, std::uint32_t index) const { return at(flat(level, index)); }

const Snapshot& SnapshotStore::at(std::size_t i) const {
  std::call_once(once_[i], [&] {
    slots_[i] = std::make_unique<Snapshot>(make_snapshot(*graph_, hierarchy_->all()[i], policy_));
    ++computed_;
  });
  return *slots_[i];
}

void SnapshotStore::materialize_all() const {
  const auto n = static_cast<std::int64_t>(slots_.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) at(static_cast<std::size_t>(i));
}

void SnapshotStore::seed(std::size_t i, Snapshot snapshot) {
  std::call_once(once_[i], [&] {
    slots_[i] = std::make_unique<Snapshot>(std::move(snapshot));
    ++computed_;
  });
}

std::size_t SnapshotStore::computed() const { return computed_.load(); }

}  // namespace mss
