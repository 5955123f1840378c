#include "mss/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace mss {

float squared_l2(const float* a, const float* b, std::size_t dim) {
  float s = 0.0f;
  for (std::size_t i = 0; i < dim; ++i) {
    const float d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

struct Farther {
  bool operator()(const HnswGraph::Hit& a, const HnswGraph::Hit& b) const { return a > b; }
};

}  // namespace

std::vector<HnswGraph::Hit> HnswGraph::search_layer(std::span<const float> data, std::size_t dim, const float* query,
                                                    const std::vector<std::uint32_t>& entries, std::size_t ef,
                                                    int layer) const {
  std::vector<char> visited(links_.size(), 0);
  std::priority_queue<Hit, std::vector<Hit>, Farther> frontier;  // nearest first
  std::priority_queue<Hit> best;                                 // farthest first
  for (auto e : entries) {
    if (visited[e]) continue;
    visited[e] = 1;
    const float d = squared_l2(query, data.data() + std::size_t{e} * dim, dim);
    frontier.push({d, e});
    best.push({d, e});
  }
  while (best.size() > ef) best.pop();
  while (!frontier.empty()) {
    const auto [d, c] = frontier.top();
    if (d > best.top().first && best.size() >= ef) break;
    frontier.pop();
    for (auto nb : links_[c][static_cast<std::size_t>(layer)]) {
      if (visited[nb]) continue;
      visited[nb] = 1;
      const float dn = squared_l2(query, data.data() + std::size_t{nb} * dim, dim);
      if (best.size() < ef || dn < best.top().first) {
        frontier.push({dn, nb});
        best.push({dn, nb});
        if (best.size() > ef) best.pop();
      }
    }
  }
  std::vector<Hit> out(best.size());
  for (std::size_t i = out.size(); i-- > 0; best.pop()) out[i] = best.top();
  return out;
}

std::vector<std::uint32_t> HnswGraph::select_neighbors(std::span<const float> data, std::size_t dim,
                                                       std::vector<Hit> candidates, std::size_t m) const {
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::uint32_t> chosen;
  for (const auto& [d, c] : candidates) {
    if (chosen.size() >= m) break;
    const bool diverse = std::none_of(chosen.begin(), chosen.end(), [&](std::uint32_t s) {
      return squared_l2(data.data() + std::size_t{c} * dim, data.data() + std::size_t{s} * dim, dim) < d;
    });
    if (diverse) chosen.push_back(c);
  }
  // Top up with the nearest pruned candidates so every list stays full.
  for (const auto& [d, c] : candidates) {
    if (chosen.size() >= m) break;
    if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
  }
  return chosen;
}

void HnswGraph::build(std::span<const float> data, std::size_t dim, const HnswParams& params) {
  M_ = std::max<std::uint32_t>(2, params.M);
  const std::size_t n = dim == 0 ? 0 : data.size() / dim;
  links_.assign(n, {});
  max_level_ = -1;
  entry_ = 0;
  std::mt19937_64 rng(params.seed);
  const double ml = 1.0 / std::log(static_cast<double>(M_));
  const std::size_t ef_c = std::max<std::size_t>(params.ef_construction, M_);

  for (std::size_t i = 0; i < n; ++i) {
    const auto node = static_cast<std::uint32_t>(i);
    const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const int level = static_cast<int>(std::floor(-std::log(u) * ml));
    links_[i].resize(static_cast<std::size_t>(level) + 1);
    if (max_level_ < 0) {
      entry_ = node;
      max_level_ = level;
      continue;
    }
    const float* q = data.data() + i * dim;
    std::vector<std::uint32_t> eps{entry_};
    for (int l = max_level_; l > level; --l) eps = {search_layer(data, dim, q, eps, 1, l).front().second};
    for (int l = std::min(level, max_level_); l >= 0; --l) {
      auto found = search_layer(data, dim, q, eps, ef_c, l);
      const std::size_t cap = l == 0 ? 2 * M_ : M_;
      auto chosen = select_neighbors(data, dim, found, cap);
      links_[i][static_cast<std::size_t>(l)] = chosen;
      for (auto nb : chosen) {
        auto& list = links_[nb][static_cast<std::size_t>(l)];
        list.push_back(node);
        if (list.size() > cap) {
          std::vector<Hit> cand;
          const float* base = data.data() + std::size_t{nb} * dim;
          for (auto x : list) cand.push_back({squared_l2(base, data.data() + std::size_t{x} * dim, dim), x});
          list = select_neighbors(data, dim, std::move(cand), cap);
        }
      }
      eps.clear();
      for (const auto& h : found) eps.push_back(h.second);
    }
    if (level > max_level_) {
      max_level_ = level;
      entry_ = node;
    }
  }
  repair_connectivity(data, dim);
}

bool HnswGraph::connected() const {
  if (links_.empty()) return true;
  std::vector<char> seen(links_.size(), 0);
  std::vector<std::uint32_t> stack{entry_};
  seen[entry_] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    for (auto nb : links_[c][0])
      if (!seen[nb]) {
        seen[nb] = 1;
        ++reached;
        stack.push_back(nb);
      }
  }
  return reached == links_.size();
}

void HnswGraph::repair_connectivity(std::span<const float> data, std::size_t dim) {
  // Pruning can orphan a node on layer 0; link each orphan to its nearest
  // reachable node in both directions.
  while (!connected()) {
    std::vector<char> seen(links_.size(), 0);
    std::vector<std::uint32_t> stack{entry_};
    seen[entry_] = 1;
    while (!stack.empty()) {
      const auto c = stack.back();
      stack.pop_back();
      for (auto nb : links_[c][0])
        if (!seen[nb]) {
          seen[nb] = 1;
          stack.push_back(nb);
        }
    }
    for (std::uint32_t v = 0; v < links_.size(); ++v) {
      if (seen[v]) continue;
      std::uint32_t nearest = entry_;
      float best = std::numeric_limits<float>::max();
      for (std::uint32_t r = 0; r < links_.size(); ++r) {
        if (!seen[r]) continue;
        const float d = squared_l2(data.data() + std::size_t{v} * dim, data.data() + std::size_t{r} * dim, dim);
        if (d < best) {
          best = d;
          nearest = r;
        }
      }
      links_[nearest][0].push_back(v);
      links_[v][0].push_back(nearest);
      break;
    }
  }
}

std::vector<HnswGraph::Hit> HnswGraph::search(std::span<const float> data, std::size_t dim, const float* query,
                                              std::size_t ef) const {
  if (links_.empty()) return {};
  std::vector<std::uint32_t> eps{entry_};
  for (int l = max_level_; l > 0; --l) eps = {search_layer(data, dim, query, eps, 1, l).front().second};
  return search_layer(data, dim, query, eps, std::max<std::size_t>(ef, 1), 0);
}

void HnswGraph::write(ByteWriter& w) const {
  w.put(M_);
  w.put(entry_);
  w.put(static_cast<std::int32_t>(max_level_));
  for (const auto& layers : links_) {
    w.put(static_cast<std::uint32_t>(layers.size()));
    for (const auto& list : layers) {
      w.put(static_cast<std::uint32_t>(list.size()));
      for (auto x : list) w.put(x);
    }
  }
}

HnswGraph HnswGraph::read(ByteReader& r, std::size_t count) {
  HnswGraph g;
  g.M_ = r.get<std::uint32_t>();
  g.entry_ = r.get<std::uint32_t>();
  g.max_level_ = r.get<std::int32_t>();
  if (count > 0 && (g.entry_ >= count || g.max_level_ < 0)) throw FormatError("corrupt ANN graph header");
  g.links_.resize(count);
  for (auto& layers : g.links_) {
    layers.resize(r.get_count(4));
    if (layers.empty() || layers.size() > static_cast<std::size_t>(g.max_level_) + 1)
      throw FormatError("corrupt ANN node level");
    for (auto& list : layers) {
      list.resize(r.get_count(4));
      for (auto& x : list) {
        x = r.get<std::uint32_t>();
        if (x >= count) throw FormatError("ANN link outside index");
      }
    }
  }
  if (count > 0 && g.links_[g.entry_].size() != static_cast<std::size_t>(g.max_level_) + 1)
    throw FormatError("corrupt ANN entry point");
  for (const auto& layers : g.links_)
    for (std::size_t l = 0; l < layers.size(); ++l)
      for (auto x : layers[l])
        if (g.links_[x].size() <= l) throw FormatError("ANN link to a node below its layer");
  return g;
}

}  // namespace mss
