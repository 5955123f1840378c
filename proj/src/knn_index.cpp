#include "mss/knn_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mss {
namespace {

constexpr std::uint16_t kIndexVersion = 1;

void sort_hits(SlotHits& hits) {
  std::sort(hits.begin(), hits.end());
}

}  // namespace

LevelIndex LevelIndex::build(std::uint32_t level, std::span<const EmbeddingRecord> records, const SnapshotHierarchy& h,
                             const IndexParams& params) {
  std::vector<RecordKey> keys;
  std::vector<Embedding> vectors;
  for (const auto& r : records) {
    if (r.level != level) throw std::invalid_argument("LevelIndex: record from another level");
    if (is_sentinel(r)) continue;
    const Interval& iv = h.at(r.level, r.index);
    keys.push_back({r.level, r.index, r.summary, iv.start, iv.end});
    vectors.push_back(r.vector);
  }
  return build(level, std::move(keys), vectors, params);
}

LevelIndex LevelIndex::build(std::uint32_t level, std::vector<RecordKey> keys, std::span<const Embedding> vectors,
                             const IndexParams& params) {
  if (keys.size() != vectors.size()) throw std::invalid_argument("LevelIndex: keys and vectors differ in count");
  LevelIndex idx;
  idx.level_ = level;
  idx.keys_ = std::move(keys);
  if (!vectors.empty()) idx.dim_ = static_cast<std::uint32_t>(vectors.front().size());
  idx.data_.reserve(vectors.size() * idx.dim_);
  for (const auto& v : vectors) {
    if (v.size() != idx.dim_) throw std::invalid_argument("LevelIndex: mixed embedding dimensions");
    idx.data_.insert(idx.data_.end(), v.begin(), v.end());
  }
  idx.brute_force_ = idx.keys_.size() < params.brute_force_below;
  if (!idx.brute_force_) idx.graph_.build(idx.data_, idx.dim_, params.hnsw);
  return idx;
}

SlotHits LevelIndex::exact(std::span<const float> query, std::size_t k, const RecordFilter& accept) const {
  const auto n = static_cast<std::int64_t>(keys_.size());
  std::vector<float> dist(keys_.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    dist[static_cast<std::size_t>(i)] = squared_l2(query.data(), data_.data() + static_cast<std::size_t>(i) * dim_, dim_);
  SlotHits hits;
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (!accept || accept(keys_[i])) hits.emplace_back(dist[i], i);
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end());
  hits.resize(keep);
  for (auto& h : hits) h.first = std::sqrt(h.first);
  return hits;
}

SlotHits LevelIndex::exact_serial(std::span<const float> query, std::size_t k, const RecordFilter& accept) const {
  SlotHits hits;
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (!accept || accept(keys_[i])) hits.emplace_back(squared_l2(query.data(), data_.data() + i * dim_, dim_), i);
  sort_hits(hits);
  if (hits.size() > k) hits.resize(k);
  for (auto& h : hits) h.first = std::sqrt(h.first);
  return hits;
}

SlotHits LevelIndex::search(std::span<const float> query, std::size_t k, const RecordFilter& accept,
                            std::uint32_t ef_search) const {
  if (query.size() != dim_ && !keys_.empty()) throw std::invalid_argument("query dimension mismatch");
  if (keys_.empty() || k == 0) return {};
  if (brute_force_) return exact(query, k, accept);
  std::size_t ef = std::max<std::size_t>(ef_search, 4 * k);
  while (true) {
    if (ef >= keys_.size()) return exact(query, k, accept);
    const auto found = graph_.search(data_, dim_, query.data(), ef);
    SlotHits hits;
    for (const auto& [d, slot] : found)
      if (!accept || accept(keys_[slot])) hits.emplace_back(d, slot);
    if (hits.size() >= k) {
      sort_hits(hits);
      hits.resize(k);
      for (auto& h : hits) h.first = std::sqrt(h.first);
      return hits;
    }
    ef *= 2;
  }
}

void LevelIndex::write(ByteWriter& w) const {
  w.put(level_);
  w.put(dim_);
  w.put(static_cast<std::uint32_t>(keys_.size()));
  w.put(static_cast<std::uint8_t>(brute_force_));
  for (const auto& k : keys_) {
    w.put(k.level);
    w.put(k.index);
    w.put(static_cast<std::uint8_t>(k.summary));
    w.put(k.start);
    w.put(k.end);
  }
  for (float x : data_) w.put(x);
  if (!brute_force_) graph_.write(w);
}

LevelIndex LevelIndex::read(ByteReader& r) {
  LevelIndex idx;
  idx.level_ = r.get<std::uint32_t>();
  idx.dim_ = r.get<std::uint32_t>();
  const std::size_t count = r.get_count(17);
  idx.brute_force_ = r.get<std::uint8_t>() != 0;
  idx.keys_.resize(count);
  for (auto& k : idx.keys_) {
    k.level = r.get<std::uint32_t>();
    k.index = r.get<std::uint32_t>();
    const auto t = r.get<std::uint8_t>();
    if (t > 2) throw FormatError("unknown summary type in index");
    k.summary = static_cast<SummaryType>(t);
    k.start = r.get<std::uint32_t>();
    k.end = r.get<std::uint32_t>();
  }
  if (idx.dim_ > 0 && count > r.remaining() / (std::size_t{idx.dim_} * sizeof(float))) throw FormatError("truncated file");
  idx.data_.resize(count * idx.dim_);
  for (float& x : idx.data_) x = r.get<float>();
  if (!idx.brute_force_) idx.graph_ = HnswGraph::read(r, count);
  return idx;
}

MultiLevelIndex MultiLevelIndex::build(const EmbeddingSet& set, const SnapshotHierarchy& h, const IndexParams& params) {
  MultiLevelIndex m;
  m.dim_ = set.dim;
  m.ef_search_ = params.hnsw.ef_search;
  std::map<std::uint32_t, std::vector<EmbeddingRecord>> by_level;
  for (const auto& r : set.records) {
    if (r.vector.size() != set.dim) throw std::invalid_argument("MultiLevelIndex: mixed embedding dimensions");
    by_level[r.level].push_back(r);
  }
  for (const auto& [level, recs] : by_level) m.levels_.emplace(level, LevelIndex::build(level, recs, h, params));
  return m;
}

std::size_t MultiLevelIndex::size() const {
  std::size_t n = 0;
  for (const auto& [_, l] : levels_) n += l.size();
  return n;
}

KnnResult MultiLevelIndex::knn(std::span<const float> query, const KnnQuery& q) const {
  if (q.k < 1) throw std::invalid_argument("knn: k must be at least 1");
  if (size() > 0 && query.size() != dim_) throw std::invalid_argument("knn: query dimension mismatch");
  if (q.levels && q.levels->empty()) throw std::invalid_argument("knn: no levels selected");

  KnnResult result;
  result.k = q.k;
  result.summary = q.summary;
  result.time_range = q.time_range;
  const RecordFilter accept = [&q](const RecordKey& key) {
    if (q.summary && key.summary != *q.summary) return false;
    if (q.time_range && !(key.start < q.time_range->second && q.time_range->first < key.end)) return false;
    return true;
  };
  for (const auto& [level, idx] : levels_) {
    if (q.levels && !q.levels->contains(level)) continue;
    result.levels_searched.push_back(level);
    for (const auto& [d, slot] : idx.search(query, q.k, accept, ef_search_))
      result.neighbors.push_back({idx.key(slot), static_cast<double>(d)});
  }
  std::sort(result.neighbors.begin(), result.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    return std::tuple{a.distance, a.key.level, a.key.index, a.key.summary} <
           std::tuple{b.distance, b.key.level, b.key.index, b.key.summary};
  });
  if (result.neighbors.size() > q.k) result.neighbors.resize(q.k);
  return result;
}

std::vector<char> MultiLevelIndex::encode(std::uint64_t embedding_hash) const {
  ByteWriter w;
  w.put_bytes("MSSI");
  w.put(kIndexVersion);
  w.put(embedding_hash);
  w.put(dim_);
  w.put(ef_search_);
  w.put(static_cast<std::uint32_t>(levels_.size()));
  for (const auto& [_, idx] : levels_) idx.write(w);
  return w.take();
}

MultiLevelIndex MultiLevelIndex::decode(std::string_view bytes, std::optional<std::uint64_t> expected_hash) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.get_bytes(4) != "MSSI") throw FormatError("not an index file (bad magic)");
  if (const auto v = r.get<std::uint16_t>(); v != kIndexVersion)
    throw FormatError("unsupported index file version " + std::to_string(v));
  MultiLevelIndex m;
  m.embedding_hash_ = r.get<std::uint64_t>();
  if (expected_hash && *expected_hash != m.embedding_hash_)
    throw FormatError("index was built from a different embedding file");
  m.dim_ = r.get<std::uint32_t>();
  m.ef_search_ = r.get<std::uint32_t>();
  const std::size_t levels = r.get_count(13);
  for (std::size_t i = 0; i < levels; ++i) {
    LevelIndex idx = LevelIndex::read(r);
    if (idx.size() > 0 && idx.dim() != m.dim_) throw FormatError("index level dimension mismatch");
    m.levels_.emplace(idx.level(), std::move(idx));
  }
  if (!r.at_end()) throw FormatError("trailing bytes after index");
  return m;
}

void save_index(const std::string& path, const MultiLevelIndex& index, std::uint64_t embedding_hash) {
  write_file(path, index.encode(embedding_hash));
}

MultiLevelIndex load_index(const std::string& path, std::optional<std::uint64_t> expected_hash) {
  return MultiLevelIndex::decode(read_file(path), expected_hash);
}

}  // namespace mss
