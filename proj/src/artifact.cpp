#include "mss/artifact.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mss/binary_io.hpp"
#include "mss/container.hpp"
#include "mss/errors.hpp"
#include "mss/ingest.hpp"

namespace mss {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kArtifactVersion = 1;

std::vector<char> encode_summaries(const SnapshotStore& store) {
  const auto& dg = store.graph();
  GraphContainer c;
  c.kind = ContainerKind::summaries;
  c.origin = dg.origin;
  c.bucket_width = dg.bucket_width;
  c.dictionary = dg.dictionary;
  for (std::size_t i = 0; i < store.hierarchy().size(); ++i) {
    const Snapshot& s = store.at(i);
    for (auto t : kSummaryTypes)
      c.blocks.push_back({s.interval.level, s.interval.index, static_cast<std::uint8_t>(t), s.summary(t)});
  }
  return encode_container(c);
}

/// Removes the staging directory unless released.
class StagingDir {
 public:
  explicit StagingDir(fs::path p) : path_(std::move(p)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~StagingDir() {
    if (!released_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  const fs::path& path() const { return path_; }
  void release() { released_ = true; }

 private:
  fs::path path_;
  bool released_ = false;
};

}  // namespace

std::string hierarchy_table(const SnapshotHierarchy& h) {
  std::ostringstream out;
  out << "level\tindex\tstart\tend\tis_root\n";
  for (const Interval& iv : h.all())
    out << iv.level << '\t' << iv.index << '\t' << iv.start << '\t' << iv.end << '\t' << (iv.is_root ? 1 : 0) << '\n';
  return out.str();
}

json layout_to_json(const LayoutResult& layout, const NodeDictionary& dict) {
  json nodes = json::array();
  for (std::size_t i = 0; i < layout.nodes.size(); ++i) {
    const NodeId n = layout.nodes[i];
    nodes.push_back({{"id", n},
                     {"name", n < dict.size() ? dict.name(n) : std::to_string(n)},
                     {"x", layout.positions[i].x},
                     {"y", layout.positions[i].y}});
  }
  return {{"algorithm", std::string(to_string(layout.algorithm))}, {"seed", layout.seed}, {"nodes", nodes}};
}

LayoutResult layout_from_json(const json& j) {
  LayoutResult out;
  try {
    const auto alg = parse_layout_algorithm(j.at("algorithm").get<std::string>());
    if (!alg) throw FormatError("layout: unknown algorithm");
    out.algorithm = *alg;
    out.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& n : j.at("nodes")) {
      out.nodes.push_back(n.at("id").get<NodeId>());
      out.positions.push_back({n.at("x").get<double>(), n.at("y").get<double>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("layout: ") + e.what());
  }
  if (!std::is_sorted(out.nodes.begin(), out.nodes.end())) throw FormatError("layout: node ids not ascending");
  return out;
}

json cmd_build(const BuildConfig& config) {
  config.validate();
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read input '" + config.input + "'");
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream stream(raw);
  const ParseResult parsed = parse_edge_stream(stream, config.schema);
  if (parsed.edges.empty())
    throw std::runtime_error("input '" + config.input + "' has no valid edges (" +
                             std::to_string(parsed.errors.size()) + " malformed lines)");

  const DynamicGraph dg = bucket_by_hour(parsed.edges, config.bucket_width);
  const SnapshotHierarchy h = build_hierarchy_parallel(static_cast<std::uint32_t>(dg.length()));
  const ThresholdPolicy policy{config.threshold};
  SnapshotStore store(dg, h, policy);
  store.materialize_all();

  EmbedParams ep = config.embed;
  ep.doc.seed = config.seed;
  const EmbeddingSet emb = embed_hierarchy(store, ep);
  IndexParams ip = config.index;
  ip.hnsw.seed = config.seed;
  const MultiLevelIndex index = MultiLevelIndex::build(emb, h, ip);

  const StaticGraph& root = store.get(h.root().level, h.root().index).summary(SummaryType::union_graph);
  LayoutResult layout;
  layout.algorithm = config.layout.algorithm;
  layout.seed = config.seed;
  if (!root.empty()) {
    LayoutParams lp = config.layout;
    lp.seed = config.seed;
    layout = global_layout(root, lp);
  }

  const auto graph_bytes = encode_dynamic_graph(dg);
  const auto hier_text = hierarchy_table(h);
  const auto summary_bytes = encode_summaries(store);
  const auto emb_bytes = encode_embeddings(emb);
  const std::uint64_t emb_hash = content_hash({emb_bytes.data(), emb_bytes.size()});
  const auto index_bytes = index.encode(emb_hash);
  const auto layout_text = layout_to_json(layout, dg.dictionary).dump(1) + "\n";

  const fs::path out = fs::absolute(config.output).lexically_normal();
  if (out.empty() || out == out.root_path()) throw std::invalid_argument("output: refusing to use '" + out.string() + "'");
  StagingDir staging(out.string() + ".partial");

  json files = json::object();
  auto emit = [&](const char* name, std::string_view bytes) {
    write_file((staging.path() / name).string(), bytes);
    files[name] = {{"bytes", bytes.size()}, {"fnv1a64", hash_hex(content_hash(bytes))}};
  };
  emit(artifact_files::graph, {graph_bytes.data(), graph_bytes.size()});
  emit(artifact_files::hierarchy, hier_text);
  emit(artifact_files::summaries, {summary_bytes.data(), summary_bytes.size()});
  emit(artifact_files::embeddings, {emb_bytes.data(), emb_bytes.size()});
  emit(artifact_files::index, {index_bytes.data(), index_bytes.size()});
  emit(artifact_files::layout, layout_text);

  std::size_t sentinels = 0;
  for (const auto& r : emb.records) sentinels += is_sentinel(r);
  std::size_t snapshots = 0;
  for (const Interval& iv : h.all()) snapshots += iv.level >= 2;

  json cfg = to_json(config);
  cfg.erase("input");
  cfg.erase("output");
  json manifest = {
      {"format", "mss-artifact"},
      {"version", kArtifactVersion},
      {"input", {{"name", fs::path(config.input).filename().string()}, {"fnv1a64", hash_hex(content_hash(raw))}}},
      {"config", cfg},
      {"counts",
       {{"edges_parsed", parsed.edges.size()},
        {"parse_errors", parsed.errors.size()},
        {"buckets", dg.length()},
        {"nodes", dg.dictionary.size()},
        {"levels", h.level_count()},
        {"intervals", h.size()},
        {"embedded_snapshots", snapshots},
        {"embedding_records", emb.records.size()},
        {"sentinel_records", sentinels},
        {"indexed_records", index.size()}}},
      {"embedding", {{"method", std::string(to_string(emb.method))}, {"dim", emb.dim}}},
      {"time", {{"origin", dg.origin}, {"bucket_width", dg.bucket_width}}},
      {"files", files},
  };
  write_file((staging.path() / artifact_files::manifest).string(), manifest.dump(2) + "\n");

  fs::remove_all(out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  fs::rename(staging.path(), out);
  staging.release();
  return manifest;
}

std::unique_ptr<Artifact> Artifact::load(const std::string& dir) {
  const fs::path root(dir);
  std::unique_ptr<Artifact> a(new Artifact());
  try {
    a->manifest_ = json::parse(read_file((root / artifact_files::manifest).string()));
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest.json: ") + e.what());
  }
  const json& m = a->manifest_;
  if (m.value("format", "") != "mss-artifact" || m.value("version", 0) != kArtifactVersion)
    throw FormatError("manifest.json: not a supported artifact");

  auto load_checked = [&](const char* name) {
    const std::string bytes = read_file((root / name).string());
    const json* entry = nullptr;
    if (m.contains("files") && m["files"].contains(name)) entry = &m["files"][name];
    if (!entry || entry->value("fnv1a64", "") != hash_hex(content_hash(bytes)))
      throw FormatError(std::string(name) + ": content hash does not match the manifest");
    return bytes;
  };

  a->graph_ = decode_dynamic_graph(load_checked(artifact_files::graph));
  a->hierarchy_ = build_hierarchy(static_cast<std::uint32_t>(a->graph_.length()));
  if (load_checked(artifact_files::hierarchy) != hierarchy_table(a->hierarchy_))
    throw FormatError("hierarchy.tsv does not match the stored graph");

  const json& cfg = m.at("config");
  if (cfg.contains("threshold") && !cfg["threshold"].is_null()) a->policy_.fixed = cfg["threshold"].get<std::uint32_t>();
  a->store_ = std::make_unique<SnapshotStore>(a->graph_, a->hierarchy_, a->policy_);

  const GraphContainer sums = decode_container(load_checked(artifact_files::summaries));
  if (sums.kind != ContainerKind::summaries || sums.blocks.size() != 3 * a->hierarchy_.size())
    throw FormatError("summaries.mssg: unexpected block layout");
  for (std::size_t i = 0; i < a->hierarchy_.size(); ++i) {
    const Interval& iv = a->hierarchy_.all()[i];
    Snapshot s;
    s.interval = iv;
    s.threshold = a->policy_.for_interval(iv);
    StaticGraph* slots[3] = {&s.summaries.union_graph, &s.summaries.intersection, &s.summaries.disjoint};
    for (std::size_t t = 0; t < 3; ++t) {
      const GraphBlock& b = sums.blocks[3 * i + t];
      if (b.key0 != iv.level || b.key1 != iv.index || b.key2 != t)
        throw FormatError("summaries.mssg: block order does not match the hierarchy");
      *slots[t] = b.graph;
      s.metrics[t] = graph_metrics(b.graph);
    }
    a->store_->seed(i, std::move(s));
  }

  const std::string emb_bytes = load_checked(artifact_files::embeddings);
  a->embeddings_ = decode_embeddings(emb_bytes);
  a->index_ = MultiLevelIndex::decode(load_checked(artifact_files::index), content_hash(emb_bytes));
  try {
    a->layout_ = layout_from_json(json::parse(load_checked(artifact_files::layout)));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("layout.json: ") + e.what());
  }
  return a;
}

}  // namespace mss
