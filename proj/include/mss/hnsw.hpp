#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mss/binary_io.hpp"

namespace mss {

struct HnswParams {
  std::uint32_t M = 16;
  std::uint32_t ef_construction = 200;
  std::uint32_t ef_search = 64;
  std::uint64_t seed = 42;
};

/// Squared Euclidean distance.
float squared_l2(const float* a, const float* b, std::size_t dim);

/// Hierarchical navigable small-world proximity graph (Malkov & Yashunin).
///
/// Holds only topology; the row-major vectors are passed to every call so the
/// owner controls storage. Node levels are drawn from a seeded generator and
/// nodes are inserted in row order, so a build is reproducible. New nodes take
/// up to the layer capacity (2M on layer 0) and heuristic-pruned lists are
/// refilled with the nearest discarded candidates.
class HnswGraph {
 public:
  using Hit = std::pair<float, std::uint32_t>;  // (squared distance, row)

  void build(std::span<const float> data, std::size_t dim, const HnswParams& params);

  /// Up to `ef` nearest rows found by the layered beam search, ascending.
  std::vector<Hit> search(std::span<const float> data, std::size_t dim, const float* query, std::size_t ef) const;

  std::size_t size() const noexcept { return links_.size(); }
  /// True when every node is reachable from the entry point on layer 0.
  bool connected() const;

  void write(ByteWriter& w) const;
  static HnswGraph read(ByteReader& r, std::size_t count);

 private:
  std::vector<Hit> search_layer(std::span<const float> data, std::size_t dim, const float* query,
                                const std::vector<std::uint32_t>& entries, std::size_t ef, int layer) const;
  std::vector<std::uint32_t> select_neighbors(std::span<const float> data, std::size_t dim, std::vector<Hit> candidates,
                                              std::size_t m) const;
  void repair_connectivity(std::span<const float> data, std::size_t dim);

  std::uint32_t M_ = 16;
  std::uint32_t entry_ = 0;
  int max_level_ = -1;
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // node -> layer -> neighbors
};

}  // namespace mss
