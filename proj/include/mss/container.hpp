#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

/// Binary graph container ("MSSG"). Layout, little-endian:
///   magic "MSSG" | u16 version | u8 kind | i64 origin | i64 bucket_width
///   u32 node_count, node names (u32 length + bytes)
///   u32 block_count, blocks: u32 key0 | u32 key1 | u8 key2 |
///     u32 n, n x u32 node id | u32 m, m x (u32 u, u32 v, f64 weight, i8 sign)
/// Dynamic graphs store one block per bucket keyed (bucket, 0, 0); summary
/// sets store one block per (level, k, summary type).
inline constexpr std::uint16_t kContainerVersion = 1;

enum class ContainerKind : std::uint8_t { dynamic_graph = 0, summaries = 1 };

struct GraphBlock {
  std::uint32_t key0 = 0;
  std::uint32_t key1 = 0;
  std::uint8_t key2 = 0;
  StaticGraph graph;

  friend bool operator==(const GraphBlock&, const GraphBlock&) = default;
};

struct GraphContainer {
  ContainerKind kind = ContainerKind::dynamic_graph;
  std::int64_t origin = 0;
  std::int64_t bucket_width = 0;
  NodeDictionary dictionary;
  std::vector<GraphBlock> blocks;

  friend bool operator==(const GraphContainer&, const GraphContainer&) = default;
};

std::vector<char> encode_container(const GraphContainer& c);
/// Throws FormatError on bad magic, unknown version or truncation.
GraphContainer decode_container(std::string_view bytes);

std::vector<char> encode_dynamic_graph(const DynamicGraph& dg);
DynamicGraph decode_dynamic_graph(std::string_view bytes);

void save_dynamic_graph(const std::string& path, const DynamicGraph& dg);
DynamicGraph load_dynamic_graph(const std::string& path);

}  // namespace mss
