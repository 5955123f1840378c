#include "mss/sbm.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace mss {
namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

void SbmConfig::validate() const {
  if (communities < 2) throw std::invalid_argument("SBM: need at least two communities");
  if (nodes < communities) throw std::invalid_argument("SBM: fewer nodes than communities");
  if (timesteps < 1) throw std::invalid_argument("SBM: need at least one timestep");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) throw std::invalid_argument("SBM: require 0 <= p_out < p_in <= 1");
  if (diminish_len > 20) throw std::invalid_argument("SBM: diminishing events last at most 20 steps");
  if (diminish_events > 0 && diminish_len > timesteps / diminish_events)
    throw std::invalid_argument("SBM: diminishing events do not fit the timeline");
}

SbmRun generate_sbm(const SbmConfig& cfg) {
  cfg.validate();
  Draw draw(cfg.seed);
  SbmRun run;

  std::vector<std::uint32_t> member(cfg.nodes);
  for (std::uint32_t v = 0; v < cfg.nodes; ++v)
    member[v] = static_cast<std::uint32_t>(std::uint64_t{v} * cfg.communities / cfg.nodes);

  if (cfg.diminish_events > 0 && cfg.diminish_len > 0) {
    const std::uint32_t segment = cfg.timesteps / cfg.diminish_events;
    for (std::uint32_t e = 0; e < cfg.diminish_events; ++e) {
      const std::uint32_t slack = segment - cfg.diminish_len + 1;
      run.events.push_back({e * segment + draw.below(slack), cfg.diminish_len, draw.below(cfg.communities)});
    }
  }

  for (std::uint32_t v = 0; v < cfg.nodes; ++v) run.graph.dictionary.intern(std::to_string(v));
  std::vector<NodeId> all_nodes(cfg.nodes);
  for (std::uint32_t v = 0; v < cfg.nodes; ++v) all_nodes[v] = v;

  for (std::uint32_t t = 0; t < cfg.timesteps; ++t) {
    for (const auto& ev : run.events) {
      if (t < ev.start || t >= ev.start + ev.length) continue;
      for (std::uint32_t s = 0; s < cfg.swaps_per_step; ++s) {
        std::vector<std::uint32_t> pool;
        for (std::uint32_t v = 0; v < cfg.nodes; ++v)
          if (member[v] == ev.community) pool.push_back(v);
        if (pool.empty()) break;
        const auto v = pool[draw.below(static_cast<std::uint32_t>(pool.size()))];
        const auto shift = 1 + draw.below(cfg.communities - 1);
        member[v] = (ev.community + shift) % cfg.communities;
      }
    }
    run.membership.push_back(member);

    std::vector<Edge> edges;
    for (std::uint32_t a = 0; a < cfg.nodes; ++a)
      for (std::uint32_t b = a + 1; b < cfg.nodes; ++b) {
        const double p = member[a] == member[b] ? cfg.p_in : cfg.p_out;
        if (draw.uniform() < p) edges.push_back({a, b, 1.0, Sign::none});
      }
    run.graph.graphs.push_back(StaticGraph::from_sorted(all_nodes, std::move(edges)));
  }
  run.graph.bucket_width = 1;
  run.graph.origin = 0;
  return run;
}

DynamicGraph synth_dynamic_sbm(const SbmConfig& cfg) { return generate_sbm(cfg).graph; }

}  // namespace mss
