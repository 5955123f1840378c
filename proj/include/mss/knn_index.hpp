#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mss/embed.hpp"
#include "mss/hierarchy.hpp"
#include "mss/hnsw.hpp"

namespace mss {

/// Identity and time extent of one indexed embedding.
struct RecordKey {
  std::uint32_t level = 0;
  std::uint32_t index = 0;
  SummaryType summary = SummaryType::union_graph;
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

struct IndexParams {
  HnswParams hnsw;
  /// Levels with fewer records are searched exactly.
  std::uint32_t brute_force_below = 64;
};

/// (euclidean distance, slot) pairs, ascending.
using SlotHits = std::vector<std::pair<float, std::size_t>>;
using RecordFilter = std::function<bool(const RecordKey&)>;

/// Index over the embeddings of one hierarchy level.
class LevelIndex {
 public:
  LevelIndex() = default;

  /// Sentinel (all-zero) records are skipped. Throws std::invalid_argument for
  /// mixed levels or dimensions.
  static LevelIndex build(std::uint32_t level, std::span<const EmbeddingRecord> records, const SnapshotHierarchy& h,
                          const IndexParams& params = {});
  /// Same, from explicit keys and equally sized vectors.
  static LevelIndex build(std::uint32_t level, std::vector<RecordKey> keys, std::span<const Embedding> vectors,
                          const IndexParams& params = {});

  std::uint32_t level() const noexcept { return level_; }
  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool brute_force() const noexcept { return brute_force_; }
  bool connected() const { return brute_force_ || graph_.connected(); }
  const RecordKey& key(std::size_t slot) const { return keys_.at(slot); }
  std::span<const float> row(std::size_t slot) const { return {data_.data() + slot * dim_, dim_}; }

  /// k nearest accepted records. ANN levels over-fetch at least 4k candidates
  /// and widen the beam until k accepted hits are found or the level is
  /// exhausted.
  SlotHits search(std::span<const float> query, std::size_t k, const RecordFilter& accept = {},
                  std::uint32_t ef_search = 64) const;
  /// Exact scan with distances computed concurrently.
  SlotHits exact(std::span<const float> query, std::size_t k, const RecordFilter& accept = {}) const;
  /// Sequential reference for exact().
  SlotHits exact_serial(std::span<const float> query, std::size_t k, const RecordFilter& accept = {}) const;

  void write(ByteWriter& w) const;
  static LevelIndex read(ByteReader& r);

 private:
  std::uint32_t level_ = 0;
  std::uint32_t dim_ = 0;
  bool brute_force_ = true;
  std::vector<RecordKey> keys_;
  std::vector<float> data_;
  HnswGraph graph_;
};

struct Neighbor {
  RecordKey key;
  double distance = 0.0;
};

struct KnnQuery {
  std::size_t k = 5;
  /// Unset means every level; an empty set is an error.
  std::optional<std::set<std::uint32_t>> levels;
  std::optional<SummaryType> summary;
  /// Half-open bucket range the result intervals must overlap.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> time_range;
};

struct KnnResult {
  std::vector<Neighbor> neighbors;
  std::size_t k = 0;
  std::vector<std::uint32_t> levels_searched;
  std::optional<SummaryType> summary;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> time_range;
};

/// One LevelIndex per hierarchy level that has embeddings.
class MultiLevelIndex {
 public:
  MultiLevelIndex() = default;
  static MultiLevelIndex build(const EmbeddingSet& set, const SnapshotHierarchy& h, const IndexParams& params = {});

  KnnResult knn(std::span<const float> query, const KnnQuery& q) const;

  const std::map<std::uint32_t, LevelIndex>& levels() const noexcept { return levels_; }
  std::uint32_t dim() const noexcept { return dim_; }
  std::uint32_t ef_search() const noexcept { return ef_search_; }
  std::size_t size() const;
  std::uint64_t embedding_hash() const noexcept { return embedding_hash_; }

  /// "MSSI" file; `embedding_hash` ties it to the embedding file it was built from.
  std::vector<char> encode(std::uint64_t embedding_hash) const;
  /// Throws FormatError on bad magic, version, truncation, or when
  /// `expected_hash` is given and does not match.
  static MultiLevelIndex decode(std::string_view bytes, std::optional<std::uint64_t> expected_hash = std::nullopt);

 private:
  std::map<std::uint32_t, LevelIndex> levels_;
  std::uint32_t dim_ = 0;
  std::uint32_t ef_search_ = 64;
  std::uint64_t embedding_hash_ = 0;
};

void save_index(const std::string& path, const MultiLevelIndex& index, std::uint64_t embedding_hash);
MultiLevelIndex load_index(const std::string& path, std::optional<std::uint64_t> expected_hash = std::nullopt);

}  // namespace mss
