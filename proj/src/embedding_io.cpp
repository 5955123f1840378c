#include "mss/binary_io.hpp"
#include "mss/embed.hpp"

namespace mss {
namespace {
constexpr std::uint16_t kEmbeddingVersion = 1;
}

std::vector<char> encode_embeddings(const EmbeddingSet& set) {
  ByteWriter w;
  w.put_bytes("MSSE");
  w.put(kEmbeddingVersion);
  w.put(static_cast<std::uint8_t>(set.method));
  w.put(set.dim);
  w.put(static_cast<std::uint32_t>(set.records.size()));
  for (const auto& r : set.records) {
    w.put(r.level);
    w.put(r.index);
    w.put(static_cast<std::uint8_t>(r.summary));
  }
  for (const auto& r : set.records) {
    if (r.vector.size() != set.dim) throw std::invalid_argument("embedding row has wrong dimension");
    for (float x : r.vector) w.put(x);
  }
  return w.take();
}

EmbeddingSet decode_embeddings(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < 4 || r.get_bytes(4) != "MSSE") throw FormatError("not an embedding file (bad magic)");
  if (const auto v = r.get<std::uint16_t>(); v != kEmbeddingVersion)
    throw FormatError("unsupported embedding file version " + std::to_string(v));
  EmbeddingSet set;
  const auto method = r.get<std::uint8_t>();
  if (method > 2) throw FormatError("unknown embedding method");
  set.method = static_cast<EmbeddingMethod>(method);
  set.dim = r.get<std::uint32_t>();
  const std::size_t count = r.get_count(9);
  set.records.resize(count);
  for (auto& rec : set.records) {
    rec.level = r.get<std::uint32_t>();
    rec.index = r.get<std::uint32_t>();
    const auto t = r.get<std::uint8_t>();
    if (t > 2) throw FormatError("unknown summary type");
    rec.summary = static_cast<SummaryType>(t);
  }
  if (r.remaining() != count * set.dim * sizeof(float)) throw FormatError("embedding matrix size mismatch");
  for (auto& rec : set.records) {
    rec.vector.resize(set.dim);
    for (float& x : rec.vector) x = r.get<float>();
  }
  return set;
}

}  // namespace mss
