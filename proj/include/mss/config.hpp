#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mss/embed.hpp"
#include "mss/experiment.hpp"
#include "mss/ingest.hpp"
#include "mss/knn_index.hpp"
#include "mss/layout.hpp"
#include "mss/sbm.hpp"

namespace mss {

/// Interactive builds train documents for 80 epochs; benchmarks use 250.
inline EmbedParams interactive_embed_params() {
  EmbedParams p;
  p.doc.epochs = 80;
  return p;
}

/// Everything `build` needs. Relative paths are resolved against the
/// directory of the config file they were read from.
struct BuildConfig {
  std::string input;
  EdgeSchema schema;
  std::int64_t bucket_width = 3600;
  EmbedParams embed = interactive_embed_params();
  /// Unset: i = floor(window length / 2).
  std::optional<std::uint32_t> threshold;
  IndexParams index;
  LayoutParams layout;
  std::uint64_t seed = 42;
  std::string output = "artifact";

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

/// Benchmark run: either a synthetic SBM or an edge file.
struct EvalConfig {
  std::string dataset = "synthetic";
  std::optional<std::string> input;
  EdgeSchema schema;
  std::int64_t bucket_width = 3600;
  SbmConfig sbm;
  ExperimentConfig experiment;

  void validate() const;
};

nlohmann::json to_json(const BuildConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
BuildConfig build_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalConfig& c);
EvalConfig eval_config_from_json(const nlohmann::json& j);

/// Reads a JSON file, resolving relative paths against its directory.
BuildConfig load_build_config(const std::string& path);
EvalConfig load_eval_config(const std::string& path);

/// Overrides from MSS_* variables: MSS_INPUT, MSS_OUTPUT, MSS_SEED, MSS_EPOCHS,
/// MSS_METHOD, MSS_BUCKET_WIDTH. `env` maps variable names to values.
void apply_env_overrides(BuildConfig& c, const std::map<std::string, std::string>& env);
void apply_env_overrides(EvalConfig& c, const std::map<std::string, std::string>& env);
/// The MSS_* subset of the process environment.
std::map<std::string, std::string> process_env();

}  // namespace mss
