#include "mss/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "mss/hierarchy.hpp"
#include "mss/oracle.hpp"
#include "mss/summarize.hpp"

namespace mss {
namespace {

constexpr std::uint32_t kRandomDim = 16;

struct MethodInfo {
  BenchMethod method;
  std::string_view name;
};

constexpr MethodInfo kMethods[] = {
    {BenchMethod::graph2vec, "Graph2Vec"},
    {BenchMethod::gl2vec, "GL2Vec"},
    {BenchMethod::fgsd, "FGSD"},
    {BenchMethod::multiscale_graph2vec, "Multiscale Graph2Vec"},
    {BenchMethod::multiscale_gl2vec, "Multiscale GL2Vec"},
    {BenchMethod::multiscale_fgsd, "Multiscale FGSD"},
    {BenchMethod::random_vectors, "Random"},
};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  float gaussian() {
    // Box-Muller on our own uniforms keeps draws identical across standard libraries.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return static_cast<float>(std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2));
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

EmbeddingMethod base_method(BenchMethod m) {
  switch (m) {
    case BenchMethod::graph2vec:
    case BenchMethod::multiscale_graph2vec: return EmbeddingMethod::wl_doc;
    case BenchMethod::gl2vec:
    case BenchMethod::multiscale_gl2vec: return EmbeddingMethod::wl_doc_line;
    default: return EmbeddingMethod::fgsd;
  }
}

/// Embeds arbitrary graphs with one method after training on a fixed corpus.
class Embedder {
 public:
  Embedder(BenchMethod m, const ExperimentConfig& cfg, std::span<const StaticGraph> corpus)
      : method_(base_method(m)), random_(m == BenchMethod::random_vectors), cfg_(&cfg) {
    if (random_) {
      dim_ = kRandomDim;
      return;
    }
    if (method_ == EmbeddingMethod::fgsd) {
      dim_ = cfg.fgsd.bins;
      for (const auto& g : corpus) trained_.push_back(g.empty() ? Embedding(dim_, 0.0f) : fgsd_embed(g, cfg.fgsd));
      return;
    }
    dim_ = cfg.doc.dim;
    std::vector<WlDocument> docs;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].empty()) continue;
      docs.push_back(method_document(corpus[i], method_, cfg.wl_iterations));
      owner.push_back(i);
    }
    trained_.assign(corpus.size(), Embedding(dim_, 0.0f));
    if (docs.empty()) return;
    model_ = DocEmbeddingModel::train(docs, cfg.doc);
    for (std::size_t d = 0; d < owner.size(); ++d) trained_[owner[d]] = model_->vector(d);
  }

  std::uint32_t dim() const { return dim_; }
  std::span<const Embedding> trained() const { return trained_; }

  /// `same_as` names a corpus entry known to equal `g`, whose vector is reused.
  Embedding embed(const StaticGraph& g, std::optional<std::size_t> same_as, Draw& draw) const {
    if (random_) {
      Embedding v(dim_);
      for (float& x : v) x = draw.gaussian();
      return v;
    }
    if (same_as) return trained_.at(*same_as);
    if (g.empty()) return Embedding(dim_, 0.0f);
    if (method_ == EmbeddingMethod::fgsd) return fgsd_embed(g, cfg_->fgsd);
    if (!model_) return Embedding(dim_, 0.0f);
    return model_->infer(method_document(g, method_, cfg_->wl_iterations));
  }

 private:
  EmbeddingMethod method_;
  bool random_;
  const ExperimentConfig* cfg_;
  std::uint32_t dim_ = 0;
  std::vector<Embedding> trained_;
  std::optional<DocEmbeddingModel> model_;
};

double squared_distance(const Embedding& a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

/// Starts of the k windows nearest to `q`; ties go to the earlier start.
std::vector<std::size_t> nearest_windows(const Embedding& q, const std::vector<Embedding>& windows, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(windows.size());
  for (std::size_t s = 0; s < windows.size(); ++s) d.emplace_back(squared_distance(q, windows[s]), s);
  k = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

double score(const std::vector<std::size_t>& retrieved, const std::vector<std::size_t>& truth, std::size_t k) {
  std::size_t hits = 0;
  for (auto r : retrieved) hits += std::find(truth.begin(), truth.end(), r) != truth.end();
  return static_cast<double>(hits) / static_cast<double>(k);
}

struct Query {
  std::size_t start = 0;
  std::vector<StaticGraph> graphs;
  StaticGraph union_graph;
  bool perturbed = false;
};

/// Single-embedding method: every window is the median of its graphs' vectors.
class SingleMethod {
 public:
  SingleMethod(BenchMethod m, const ExperimentConfig& cfg, const DynamicGraph& dg)
      : embedder_(m, cfg, dg.graphs) {
    for (auto L : cfg.lengths) {
      auto& table = windows_[L];
      const auto trained = embedder_.trained();
      for (std::size_t s = 0; s + L <= dg.length(); ++s) {
        if (trained.empty()) {
          table.emplace_back(embedder_.dim(), 0.0f);
          continue;
        }
        table.push_back(median_embedding(trained.subspan(s, L)));
      }
    }
  }

  std::vector<std::size_t> retrieve(const Query& q, std::size_t k, Draw& draw) const {
    std::vector<Embedding> parts;
    for (std::size_t i = 0; i < q.graphs.size(); ++i) {
      std::optional<std::size_t> same;
      if (!q.perturbed) same = q.start + i;
      parts.push_back(embedder_.embed(q.graphs[i], same, draw));
    }
    if (embedder_.trained().empty()) {
      // Random baseline: candidate vectors are fresh noise for every query.
      std::vector<Embedding> noise;
      for (std::size_t s = 0; s < windows_.at(static_cast<std::uint32_t>(q.graphs.size())).size(); ++s)
        noise.push_back(embedder_.embed(StaticGraph{}, std::nullopt, draw));
      return nearest_windows(median_embedding(parts), noise, k);
    }
    return nearest_windows(median_embedding(parts), windows_.at(static_cast<std::uint32_t>(q.graphs.size())), k);
  }

 private:
  Embedder embedder_;
  std::map<std::uint32_t, std::vector<Embedding>> windows_;
};

/// Multiscale method: union summaries of the hierarchy, one index per level.
class MultiscaleMethod {
 public:
  MultiscaleMethod(BenchMethod m, const ExperimentConfig& cfg, const DynamicGraph& dg)
      : hierarchy_(build_hierarchy(static_cast<std::uint32_t>(dg.length()))), T_(dg.length()) {
    std::vector<Interval> ivs;
    for (const Interval& iv : hierarchy_.embeddable())
      if (!iv.is_root) ivs.push_back(iv);
    if (ivs.empty()) ivs.push_back(hierarchy_.root());
    std::vector<StaticGraph> unions;
    for (const Interval& iv : ivs) unions.push_back(union_graph(dg.window(iv.start, iv.end)));
    embedder_.emplace(m, cfg, unions);

    std::map<std::uint32_t, std::pair<std::vector<RecordKey>, std::vector<Embedding>>> per_level;
    const auto vecs = embedder_->trained();
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      if (unions[i].empty()) continue;
      auto& [keys, rows] = per_level[ivs[i].level];
      keys.push_back({ivs[i].level, ivs[i].index, SummaryType::union_graph, ivs[i].start, ivs[i].end});
      rows.push_back(vecs[i]);
    }
    for (auto& [level, kr] : per_level)
      levels_.emplace(level, LevelIndex::build(level, std::move(kr.first), kr.second, cfg.index));
    ef_search_ = cfg.index.hnsw.ef_search;
  }

  /// Indexed level whose nominal width is closest to L; ties go to the finer level.
  const LevelIndex& level_for(std::uint32_t L) const {
    const LevelIndex* best = nullptr;
    std::uint64_t best_gap = std::numeric_limits<std::uint64_t>::max();
    for (const auto& [level, idx] : levels_) {
      const std::uint64_t w = hierarchy_.at(level, 0).is_root ? T_ : level_width(level);
      const std::uint64_t gap = w > L ? w - L : L - w;
      if (gap < best_gap) {
        best_gap = gap;
        best = &idx;
      }
    }
    if (!best) throw std::invalid_argument("multiscale method has no indexed levels");
    return *best;
  }

  std::vector<std::size_t> retrieve(const Query& q, std::size_t k, Draw& draw) const {
    const auto L = static_cast<std::uint32_t>(q.graphs.size());
    const Embedding v = embedder_->embed(q.union_graph, std::nullopt, draw);
    const LevelIndex& idx = level_for(L);
    const auto last_start = T_ - L;
    const auto hits = idx.search(v, k, [&](const RecordKey& key) { return key.start <= last_start; }, ef_search_);
    std::vector<std::size_t> starts;
    for (const auto& [d, slot] : hits) starts.push_back(idx.key(slot).start);
    return starts;
  }

 private:
  SnapshotHierarchy hierarchy_;
  std::size_t T_;
  std::optional<Embedder> embedder_;
  std::map<std::uint32_t, LevelIndex> levels_;
  std::uint32_t ef_search_ = 64;
};

}  // namespace

std::string_view to_string(BenchMethod m) {
  for (const auto& info : kMethods)
    if (info.method == m) return info.name;
  return "unknown";
}

std::optional<BenchMethod> parse_bench_method(std::string_view s) {
  for (const auto& info : kMethods)
    if (info.name == s) return info.method;
  static const std::pair<std::string_view, BenchMethod> aliases[] = {
      {"graph2vec", BenchMethod::graph2vec},
      {"gl2vec", BenchMethod::gl2vec},
      {"fgsd", BenchMethod::fgsd},
      {"ms_graph2vec", BenchMethod::multiscale_graph2vec},
      {"ms_gl2vec", BenchMethod::multiscale_gl2vec},
      {"ms_fgsd", BenchMethod::multiscale_fgsd},
      {"random", BenchMethod::random_vectors},
  };
  for (const auto& [alias, m] : aliases)
    if (alias == s) return m;
  return std::nullopt;
}

bool is_multiscale(BenchMethod m) {
  return m == BenchMethod::multiscale_graph2vec || m == BenchMethod::multiscale_gl2vec ||
         m == BenchMethod::multiscale_fgsd;
}

double chance_accuracy(std::size_t candidates, std::size_t k) {
  return static_cast<double>(k) / static_cast<double>(candidates);
}

double chance_sigma(std::size_t candidates, std::size_t k, std::size_t runs) {
  const double N = static_cast<double>(candidates);
  const double kk = static_cast<double>(k);
  if (candidates < 2 || runs == 0) return 0.0;
  // Overlap of two independent k-subsets of N is hypergeometric.
  const double var_hits = kk * (kk / N) * ((N - kk) / N) * ((N - kk) / (N - 1.0));
  return std::sqrt(var_hits / (kk * kk) / static_cast<double>(runs));
}

AccuracyTable run_accuracy_experiment(const DynamicGraph& dg, const ExperimentConfig& cfg, std::string dataset) {
  const std::size_t T = dg.length();
  if (T == 0) throw std::invalid_argument("experiment: empty dynamic graph");
  if (cfg.k == 0) throw std::invalid_argument("experiment: k must be positive");
  if (cfg.runs == 0) throw std::invalid_argument("experiment: runs must be positive");
  for (auto L : cfg.lengths) {
    if (L == 0 || L > T) throw std::invalid_argument("experiment: interval length " + std::to_string(L) +
                                                     " outside [1, " + std::to_string(T) + "]");
    if (cfg.k > T - L + 1)
      throw std::invalid_argument("experiment: k exceeds the number of windows of length " + std::to_string(L));
  }

  AccuracyTable table;
  table.dataset = std::move(dataset);
  table.runs = cfg.runs;
  table.k = cfg.k;
  table.lengths = cfg.lengths;
  for (auto L : cfg.lengths) table.candidates.push_back(T - L + 1);

  // Train every method before any query interval is drawn.
  std::vector<std::variant<SingleMethod, MultiscaleMethod>> methods;
  for (auto m : cfg.methods) {
    table.methods.emplace_back(to_string(m));
    if (is_multiscale(m))
      methods.emplace_back(std::in_place_type<MultiscaleMethod>, m, cfg, dg);
    else
      methods.emplace_back(std::in_place_type<SingleMethod>, m, cfg, dg);
  }

  // Candidate union graphs and their fnorms per length.
  std::map<std::uint32_t, std::vector<double>> cand_fnorm;
  for (auto L : cfg.lengths) {
    if (cand_fnorm.count(L)) continue;
    std::vector<StaticGraph> unions;
    for (std::size_t s = 0; s + L <= T; ++s) unions.push_back(union_graph(dg.window(s, s + L)));
    cand_fnorm[L] = fnorm_all(unions);
  }

  table.samples.assign(cfg.methods.size(),
                       std::vector<std::vector<double>>(cfg.lengths.size(), std::vector<double>(cfg.runs, 0.0)));
  Draw query_draw(mix(cfg.seed, 1));
  for (std::uint32_t run = 0; run < cfg.runs; ++run) {
    for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
      const std::uint32_t L = cfg.lengths[li];
      Query q;
      q.start = query_draw.below(T - L + 1);
      q.perturbed = cfg.perturb;
      for (std::size_t t = q.start; t < q.start + L; ++t) {
        const StaticGraph& g = dg.graphs[t];
        if (cfg.perturb && !g.empty()) {
          const NodeId drop = g.nodes()[query_draw.below(g.node_count())];
          q.graphs.push_back(g.induced([drop](NodeId n) { return n != drop; }));
        } else {
          q.graphs.push_back(g);
        }
      }
      q.union_graph = union_graph(q.graphs);

      const auto& fn = cand_fnorm.at(L);
      std::vector<std::size_t> ids(fn.size());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
      const auto truth = nearest_by_fnorm(fnorm(q.union_graph), fn, ids, cfg.k);

      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        Draw method_draw(mix(cfg.seed, 1000 + (run * cfg.lengths.size() + li) * methods.size() + mi));
        const auto retrieved =
            std::visit([&](const auto& method) { return method.retrieve(q, cfg.k, method_draw); }, methods[mi]);
        table.samples[mi][li][run] = score(retrieved, truth, cfg.k);
      }
    }
  }

  table.accuracy.assign(cfg.methods.size(), std::vector<double>(cfg.lengths.size(), 0.0));
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
    for (std::size_t li = 0; li < cfg.lengths.size(); ++li) {
      double sum = 0.0;
      for (double a : table.samples[mi][li]) sum += a;
      table.accuracy[mi][li] = sum / static_cast<double>(cfg.runs);
    }
  return table;
}

std::string AccuracyTable::to_csv() const {
  std::ostringstream out;
  out << "dataset,method,length,accuracy,runs,k,candidates\n";
  out << std::setprecision(6) << std::fixed;
  for (std::size_t m = 0; m < methods.size(); ++m)
    for (std::size_t l = 0; l < lengths.size(); ++l)
      out << dataset << ',' << methods[m] << ',' << lengths[l] << ',' << accuracy[m][l] << ',' << runs << ',' << k
          << ',' << candidates[l] << '\n';
  return out.str();
}

std::string AccuracyTable::to_text() const {
  std::size_t name_w = 6;
  for (const auto& m : methods) name_w = std::max(name_w, m.size());
  std::ostringstream out;
  out << "dataset: " << dataset << "  runs: " << runs << "  k: " << k << '\n';
  out << std::left << std::setw(static_cast<int>(name_w)) << "method";
  for (auto L : lengths) out << "  " << std::right << std::setw(6) << ("L=" + std::to_string(L));
  out << '\n';
  out << std::fixed << std::setprecision(3);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    out << std::left << std::setw(static_cast<int>(name_w)) << methods[m];
    for (std::size_t l = 0; l < lengths.size(); ++l) out << "  " << std::right << std::setw(6) << accuracy[m][l];
    out << '\n';
  }
  return out.str();
}

}  // namespace mss
