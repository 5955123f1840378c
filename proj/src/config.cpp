#include "mss/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

extern char** environ;

namespace mss {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(where + "." + key + ": wrong type");
  }
}

json schema_json(const EdgeSchema& s) {
  return {{"delimiter", std::string(1, s.delimiter)}, {"header", s.header},       {"source", s.source},
          {"target", s.target},                      {"timestamp", s.timestamp}, {"weight", s.weight},
          {"sign", s.sign}};
}

EdgeSchema schema_from(const json& j) {
  only_keys(j, {"delimiter", "header", "source", "target", "timestamp", "weight", "sign"}, "schema");
  EdgeSchema s;
  std::string delim(1, s.delimiter);
  read(j, "delimiter", delim, "schema");
  if (delim == "\\t" || delim == "tab") delim = "\t";
  if (delim.size() != 1) throw std::invalid_argument("schema.delimiter: must be a single character");
  s.delimiter = delim[0];
  read(j, "header", s.header, "schema");
  read(j, "source", s.source, "schema");
  read(j, "target", s.target, "schema");
  read(j, "timestamp", s.timestamp, "schema");
  read(j, "weight", s.weight, "schema");
  read(j, "sign", s.sign, "schema");
  return s;
}

json doc_json(const Doc2VecParams& d) {
  return {{"dim", d.dim},         {"epochs", d.epochs},     {"learning_rate", d.learning_rate},
          {"negatives", d.negatives}, {"min_count", d.min_count}, {"sample", d.sample}};
}

void read_embedding(const json& j, const std::string& where, FgsdParams& fgsd, std::uint32_t& wl, Doc2VecParams& d,
                    std::optional<EmbeddingMethod>* method, std::vector<SummaryType>* summaries) {
  if (method) {
    only_keys(j,
              {"method", "summaries", "bins", "range", "wl_iterations", "dim", "epochs", "learning_rate", "negatives",
               "min_count", "sample"},
              where);
  } else {
    only_keys(j, {"bins", "range", "wl_iterations", "dim", "epochs", "learning_rate", "negatives", "min_count", "sample"},
              where);
  }
  if (method && j.contains("method")) {
    std::string m;
    read(j, "method", m, where);
    *method = parse_embedding_method(m);
    if (!*method) throw std::invalid_argument(where + ".method: unknown method '" + m + "'");
  }
  if (summaries && j.contains("summaries")) {
    std::vector<std::string> names;
    read(j, "summaries", names, where);
    summaries->clear();
    for (const auto& n : names) {
      const auto t = parse_summary_type(n);
      if (!t) throw std::invalid_argument(where + ".summaries: unknown summary type '" + n + "'");
      summaries->push_back(*t);
    }
  }
  read(j, "bins", fgsd.bins, where);
  read(j, "range", fgsd.range, where);
  read(j, "wl_iterations", wl, where);
  read(j, "dim", d.dim, where);
  read(j, "epochs", d.epochs, where);
  read(j, "learning_rate", d.learning_rate, where);
  read(j, "negatives", d.negatives, where);
  read(j, "min_count", d.min_count, where);
  read(j, "sample", d.sample, where);
}

json ann_json(const IndexParams& p) {
  return {{"M", p.hnsw.M},
          {"ef_construction", p.hnsw.ef_construction},
          {"ef_search", p.hnsw.ef_search},
          {"brute_force_below", p.brute_force_below}};
}

void read_ann(const json& j, IndexParams& p) {
  only_keys(j, {"M", "ef_construction", "ef_search", "brute_force_below"}, "ann");
  read(j, "M", p.hnsw.M, "ann");
  read(j, "ef_construction", p.hnsw.ef_construction, "ann");
  read(j, "ef_search", p.hnsw.ef_search, "ann");
  read(j, "brute_force_below", p.brute_force_below, "ann");
}

void check_embedding(const FgsdParams& f, std::uint32_t wl, const Doc2VecParams& d) {
  if (f.bins < 1 || f.bins > 100000) throw std::invalid_argument("embedding.bins must be in [1, 100000]");
  if (!(f.range > 0.0)) throw std::invalid_argument("embedding.range must be positive");
  if (wl > 16) throw std::invalid_argument("embedding.wl_iterations must be at most 16");
  if (d.dim < 1 || d.dim > 4096) throw std::invalid_argument("embedding.dim must be in [1, 4096]");
  if (d.epochs < 1) throw std::invalid_argument("embedding.epochs must be at least 1");
  if (!(d.learning_rate > 0.0 && d.learning_rate <= 1.0))
    throw std::invalid_argument("embedding.learning_rate must be in (0, 1]");
  if (d.negatives < 1 || d.negatives > 100) throw std::invalid_argument("embedding.negatives must be in [1, 100]");
  if (!(d.sample >= 0.0 && d.sample < 1.0)) throw std::invalid_argument("embedding.sample must be in [0, 1)");
}

void check_ann(const IndexParams& p) {
  if (p.hnsw.M < 2) throw std::invalid_argument("ann.M must be at least 2");
  if (p.hnsw.ef_construction < 1 || p.hnsw.ef_search < 1) throw std::invalid_argument("ann.ef values must be positive");
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

std::string method_alias(BenchMethod m) {
  switch (m) {
    case BenchMethod::graph2vec: return "graph2vec";
    case BenchMethod::gl2vec: return "gl2vec";
    case BenchMethod::fgsd: return "fgsd";
    case BenchMethod::multiscale_graph2vec: return "ms_graph2vec";
    case BenchMethod::multiscale_gl2vec: return "ms_gl2vec";
    case BenchMethod::multiscale_fgsd: return "ms_fgsd";
    case BenchMethod::random_vectors: return "random";
  }
  return "fgsd";
}

template <class T>
T env_number(const std::map<std::string, std::string>& env, const std::string& key) {
  const std::string& v = env.at(key);
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<T>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

}  // namespace

void BuildConfig::validate() const {
  if (input.empty()) throw std::invalid_argument("input: path is required");
  if (output.empty()) throw std::invalid_argument("output: path is required");
  if (bucket_width <= 0) throw std::invalid_argument("bucket_width must be positive");
  check_embedding(embed.fgsd, embed.wl_iterations, embed.doc);
  if (embed.summaries.empty()) throw std::invalid_argument("embedding.summaries must not be empty");
  check_ann(index);
  if (layout.iterations < 1) throw std::invalid_argument("layout.iterations must be at least 1");
  if (!(layout.edge_length > 0.0)) throw std::invalid_argument("layout.edge_length must be positive");
}

void EvalConfig::validate() const {
  if (!input) sbm.validate();
  if (bucket_width <= 0) throw std::invalid_argument("bucket_width must be positive");
  const auto& e = experiment;
  if (e.methods.empty()) throw std::invalid_argument("methods must not be empty");
  if (e.lengths.empty()) throw std::invalid_argument("lengths must not be empty");
  if (e.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (e.k < 1) throw std::invalid_argument("k must be at least 1");
  check_embedding(e.fgsd, e.wl_iterations, e.doc);
  check_ann(e.index);
}

json to_json(const BuildConfig& c) {
  json emb = doc_json(c.embed.doc);
  emb["method"] = std::string(to_string(c.embed.method));
  json types = json::array();
  for (auto t : c.embed.summaries) types.push_back(std::string(to_string(t)));
  emb["summaries"] = types;
  emb["bins"] = c.embed.fgsd.bins;
  emb["range"] = c.embed.fgsd.range;
  emb["wl_iterations"] = c.embed.wl_iterations;
  return {{"input", c.input},
          {"schema", schema_json(c.schema)},
          {"bucket_width", c.bucket_width},
          {"embedding", emb},
          {"threshold", c.threshold ? json(*c.threshold) : json(nullptr)},
          {"ann", ann_json(c.index)},
          {"layout",
           {{"algorithm", std::string(to_string(c.layout.algorithm))},
            {"iterations", c.layout.iterations},
            {"edge_length", c.layout.edge_length}}},
          {"seed", c.seed},
          {"output", c.output}};
}

BuildConfig build_config_from_json(const json& j) {
  only_keys(j, {"input", "schema", "bucket_width", "embedding", "threshold", "ann", "layout", "seed", "output"},
            "config");
  BuildConfig c;
  read(j, "input", c.input, "config");
  read(j, "output", c.output, "config");
  read(j, "bucket_width", c.bucket_width, "config");
  read(j, "seed", c.seed, "config");
  if (j.contains("schema")) c.schema = schema_from(j["schema"]);
  if (j.contains("embedding")) {
    std::optional<EmbeddingMethod> m = c.embed.method;
    read_embedding(j["embedding"], "embedding", c.embed.fgsd, c.embed.wl_iterations, c.embed.doc, &m,
                   &c.embed.summaries);
    c.embed.method = *m;
  }
  if (j.contains("threshold") && !j["threshold"].is_null()) {
    std::uint32_t t = 0;
    read(j, "threshold", t, "config");
    c.threshold = t;
  }
  if (j.contains("ann")) read_ann(j["ann"], c.index);
  if (j.contains("layout")) {
    const auto& l = j["layout"];
    only_keys(l, {"algorithm", "iterations", "edge_length"}, "layout");
    if (l.contains("algorithm")) {
      std::string a;
      read(l, "algorithm", a, "layout");
      const auto alg = parse_layout_algorithm(a);
      if (!alg) throw std::invalid_argument("layout.algorithm: unknown algorithm '" + a + "'");
      c.layout.algorithm = *alg;
    }
    read(l, "iterations", c.layout.iterations, "layout");
    read(l, "edge_length", c.layout.edge_length, "layout");
  }
  return c;
}

json to_json(const EvalConfig& c) {
  const auto& e = c.experiment;
  json methods = json::array();
  for (auto m : e.methods) methods.push_back(method_alias(m));
  json emb = doc_json(e.doc);
  emb["bins"] = e.fgsd.bins;
  emb["range"] = e.fgsd.range;
  emb["wl_iterations"] = e.wl_iterations;
  const auto& s = c.sbm;
  return {{"dataset", c.dataset},
          {"input", c.input ? json(*c.input) : json(nullptr)},
          {"schema", schema_json(c.schema)},
          {"bucket_width", c.bucket_width},
          {"sbm",
           {{"nodes", s.nodes},
            {"communities", s.communities},
            {"timesteps", s.timesteps},
            {"diminish_len", s.diminish_len},
            {"diminish_events", s.diminish_events},
            {"swaps_per_step", s.swaps_per_step},
            {"p_in", s.p_in},
            {"p_out", s.p_out},
            {"seed", s.seed}}},
          {"methods", methods},
          {"lengths", e.lengths},
          {"runs", e.runs},
          {"k", e.k},
          {"seed", e.seed},
          {"perturb", e.perturb},
          {"embedding", emb},
          {"ann", ann_json(e.index)}};
}

EvalConfig eval_config_from_json(const json& j) {
  only_keys(j,
            {"dataset", "input", "schema", "bucket_width", "sbm", "methods", "lengths", "runs", "k", "seed", "perturb",
             "embedding", "ann"},
            "config");
  EvalConfig c;
  auto& e = c.experiment;
  read(j, "dataset", c.dataset, "config");
  if (j.contains("input") && !j["input"].is_null()) {
    std::string in;
    read(j, "input", in, "config");
    c.input = in;
  }
  if (j.contains("schema")) c.schema = schema_from(j["schema"]);
  read(j, "bucket_width", c.bucket_width, "config");
  if (j.contains("sbm")) {
    const auto& s = j["sbm"];
    only_keys(s,
              {"nodes", "communities", "timesteps", "diminish_len", "diminish_events", "swaps_per_step", "p_in", "p_out",
               "seed"},
              "sbm");
    read(s, "nodes", c.sbm.nodes, "sbm");
    read(s, "communities", c.sbm.communities, "sbm");
    read(s, "timesteps", c.sbm.timesteps, "sbm");
    read(s, "diminish_len", c.sbm.diminish_len, "sbm");
    read(s, "diminish_events", c.sbm.diminish_events, "sbm");
    read(s, "swaps_per_step", c.sbm.swaps_per_step, "sbm");
    read(s, "p_in", c.sbm.p_in, "sbm");
    read(s, "p_out", c.sbm.p_out, "sbm");
    read(s, "seed", c.sbm.seed, "sbm");
  }
  if (j.contains("methods")) {
    std::vector<std::string> names;
    read(j, "methods", names, "config");
    e.methods.clear();
    for (const auto& n : names) {
      const auto m = parse_bench_method(n);
      if (!m) throw std::invalid_argument("methods: unknown method '" + n + "'");
      e.methods.push_back(*m);
    }
  }
  read(j, "lengths", e.lengths, "config");
  read(j, "runs", e.runs, "config");
  read(j, "k", e.k, "config");
  read(j, "seed", e.seed, "config");
  read(j, "perturb", e.perturb, "config");
  if (j.contains("embedding")) read_embedding(j["embedding"], "embedding", e.fgsd, e.wl_iterations, e.doc, nullptr, nullptr);
  if (j.contains("ann")) read_ann(j["ann"], e.index);
  return c;
}

BuildConfig load_build_config(const std::string& path) {
  BuildConfig c = build_config_from_json(read_json_file(path));
  const fs::path base = fs::path(path).parent_path();
  c.input = resolve(base, c.input);
  c.output = resolve(base, c.output);
  return c;
}

EvalConfig load_eval_config(const std::string& path) {
  EvalConfig c = eval_config_from_json(read_json_file(path));
  if (c.input) c.input = resolve(fs::path(path).parent_path(), *c.input);
  return c;
}

void apply_env_overrides(BuildConfig& c, const std::map<std::string, std::string>& env) {
  if (env.count("MSS_INPUT")) c.input = env.at("MSS_INPUT");
  if (env.count("MSS_OUTPUT")) c.output = env.at("MSS_OUTPUT");
  if (env.count("MSS_SEED")) c.seed = env_number<std::uint64_t>(env, "MSS_SEED");
  if (env.count("MSS_EPOCHS")) c.embed.doc.epochs = env_number<std::uint32_t>(env, "MSS_EPOCHS");
  if (env.count("MSS_BUCKET_WIDTH")) c.bucket_width = env_number<std::int64_t>(env, "MSS_BUCKET_WIDTH");
  if (env.count("MSS_METHOD")) {
    const auto m = parse_embedding_method(env.at("MSS_METHOD"));
    if (!m) throw std::invalid_argument("MSS_METHOD: unknown method '" + env.at("MSS_METHOD") + "'");
    c.embed.method = *m;
  }
}

void apply_env_overrides(EvalConfig& c, const std::map<std::string, std::string>& env) {
  if (env.count("MSS_INPUT")) c.input = env.at("MSS_INPUT");
  if (env.count("MSS_SEED")) c.experiment.seed = env_number<std::uint64_t>(env, "MSS_SEED");
  if (env.count("MSS_EPOCHS")) c.experiment.doc.epochs = env_number<std::uint32_t>(env, "MSS_EPOCHS");
  if (env.count("MSS_BUCKET_WIDTH")) c.bucket_width = env_number<std::int64_t>(env, "MSS_BUCKET_WIDTH");
}

std::map<std::string, std::string> process_env() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq == std::string::npos || kv.rfind("MSS_", 0) != 0) continue;
    out.emplace(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return out;
}

}  // namespace mss
