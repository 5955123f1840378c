#include "mss/container.hpp"

#include "mss/binary_io.hpp"

namespace mss {

std::vector<char> encode_container(const GraphContainer& c) {
  ByteWriter w;
  w.put_bytes("MSSG");
  w.put(kContainerVersion);
  w.put(static_cast<std::uint8_t>(c.kind));
  w.put(c.origin);
  w.put(c.bucket_width);
  w.put(static_cast<std::uint32_t>(c.dictionary.size()));
  for (const auto& name : c.dictionary.names()) w.put_string(name);
  w.put(static_cast<std::uint32_t>(c.blocks.size()));
  for (const auto& b : c.blocks) {
    w.put(b.key0);
    w.put(b.key1);
    w.put(b.key2);
    w.put(static_cast<std::uint32_t>(b.graph.node_count()));
    for (NodeId n : b.graph.nodes()) w.put(n);
    w.put(static_cast<std::uint32_t>(b.graph.edge_count()));
    for (const Edge& e : b.graph.edges()) {
      w.put(e.u);
      w.put(e.v);
      w.put(e.weight);
      w.put(static_cast<std::int8_t>(e.sign));
    }
  }
  return w.take();
}

GraphContainer decode_container(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.get_bytes(4) != "MSSG") throw FormatError("not a graph container (bad magic)");
  const auto version = r.get<std::uint16_t>();
  if (version != kContainerVersion)
    throw FormatError("unsupported graph container version " + std::to_string(version));
  GraphContainer c;
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw FormatError("unknown container kind");
  c.kind = static_cast<ContainerKind>(kind);
  c.origin = r.get<std::int64_t>();
  c.bucket_width = r.get<std::int64_t>();
  const std::size_t names = r.get_count(4);
  for (std::size_t i = 0; i < names; ++i) {
    const auto name = r.get_string();
    if (c.dictionary.intern(name) != i) throw FormatError("duplicate node name in dictionary");
  }
  const std::size_t blocks = r.get_count(17);
  c.blocks.reserve(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    GraphBlock b;
    b.key0 = r.get<std::uint32_t>();
    b.key1 = r.get<std::uint32_t>();
    b.key2 = r.get<std::uint8_t>();
    std::vector<NodeId> nodes(r.get_count(4));
    for (auto& n : nodes) {
      n = r.get<NodeId>();
      if (n >= names) throw FormatError("node id outside dictionary");
    }
    std::vector<Edge> edges(r.get_count(17));
    for (auto& e : edges) {
      e.u = r.get<NodeId>();
      e.v = r.get<NodeId>();
      e.weight = r.get<double>();
      const auto s = r.get<std::int8_t>();
      if (s < -1 || s > 1) throw FormatError("invalid edge sign");
      e.sign = static_cast<Sign>(s);
    }
    b.graph = StaticGraph::from_sorted(std::move(nodes), std::move(edges));
    c.blocks.push_back(std::move(b));
  }
  if (!r.at_end()) throw FormatError("trailing bytes after graph container");
  return c;
}

std::vector<char> encode_dynamic_graph(const DynamicGraph& dg) {
  GraphContainer c;
  c.kind = ContainerKind::dynamic_graph;
  c.origin = dg.origin;
  c.bucket_width = dg.bucket_width;
  c.dictionary = dg.dictionary;
  for (std::size_t t = 0; t < dg.graphs.size(); ++t)
    c.blocks.push_back({static_cast<std::uint32_t>(t), 0, 0, dg.graphs[t]});
  return encode_container(c);
}

DynamicGraph decode_dynamic_graph(std::string_view bytes) {
  GraphContainer c = decode_container(bytes);
  if (c.kind != ContainerKind::dynamic_graph) throw FormatError("container does not hold a dynamic graph");
  DynamicGraph dg;
  dg.origin = c.origin;
  dg.bucket_width = c.bucket_width;
  dg.dictionary = std::move(c.dictionary);
  for (std::size_t t = 0; t < c.blocks.size(); ++t) {
    if (c.blocks[t].key0 != t) throw FormatError("bucket blocks out of order");
    dg.graphs.push_back(std::move(c.blocks[t].graph));
  }
  if (dg.graphs.empty()) throw FormatError("dynamic graph without buckets");
  return dg;
}

void save_dynamic_graph(const std::string& path, const DynamicGraph& dg) {
  write_file(path, encode_dynamic_graph(dg));
}

DynamicGraph load_dynamic_graph(const std::string& path) { return decode_dynamic_graph(read_file(path)); }

}  // namespace mss
