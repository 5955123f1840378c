#pragma once

#include <memory>
#include <string>

#include "json.hpp"
#include "mss/config.hpp"
#include "mss/embed.hpp"
#include "mss/hierarchy.hpp"
#include "mss/knn_index.hpp"
#include "mss/layout.hpp"
#include "mss/summarize.hpp"

namespace mss {

/// File names inside an artifact directory.
namespace artifact_files {
inline constexpr const char* graph = "graph.mssg";
inline constexpr const char* hierarchy = "hierarchy.tsv";
inline constexpr const char* summaries = "summaries.mssg";
inline constexpr const char* embeddings = "embeddings.msse";
inline constexpr const char* index = "index.mssi";
inline constexpr const char* layout = "layout.json";
inline constexpr const char* manifest = "manifest.json";
}  // namespace artifact_files

/// Runs the whole pipeline and writes the artifact directory. Output is
/// staged next to the target and renamed into place, so a failed build leaves
/// no directory behind. Returns the manifest. Throws on unreadable input,
/// invalid config, or input without usable edges.
nlohmann::json cmd_build(const BuildConfig& config);

/// Tab-separated hierarchy table with a header row.
std::string hierarchy_table(const SnapshotHierarchy& h);

nlohmann::json layout_to_json(const LayoutResult& layout, const NodeDictionary& dict);
LayoutResult layout_from_json(const nlohmann::json& j);

/// A loaded artifact: immutable apart from the snapshot cache.
class Artifact {
 public:
  /// Verifies every file against the manifest hashes; throws FormatError on
  /// mismatch or corruption.
  static std::unique_ptr<Artifact> load(const std::string& dir);

  const DynamicGraph& graph() const noexcept { return graph_; }
  const SnapshotHierarchy& hierarchy() const noexcept { return hierarchy_; }
  const SnapshotStore& store() const noexcept { return *store_; }
  const EmbeddingSet& embeddings() const noexcept { return embeddings_; }
  const MultiLevelIndex& index() const noexcept { return index_; }
  const LayoutResult& layout() const noexcept { return layout_; }
  const nlohmann::json& manifest() const noexcept { return manifest_; }
  const ThresholdPolicy& policy() const noexcept { return policy_; }

 private:
  Artifact() = default;

  DynamicGraph graph_;
  SnapshotHierarchy hierarchy_;
  ThresholdPolicy policy_;
  std::unique_ptr<SnapshotStore> store_;
  EmbeddingSet embeddings_;
  MultiLevelIndex index_;
  LayoutResult layout_;
  nlohmann::json manifest_;
};

}  // namespace mss
