#pragma once

#include <cstdint>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

/// Dynamic stochastic block model with diminishing communities.
struct SbmConfig {
  std::uint32_t nodes = 150;
  std::uint32_t communities = 3;
  std::uint32_t timesteps = 100;
  /// Steps per diminishing event (at most 20).
  std::uint32_t diminish_len = 10;
  /// Number of diminishing events spread over the timeline.
  std::uint32_t diminish_events = 3;
  /// Nodes leaving the diminishing community per event step.
  std::uint32_t swaps_per_step = 2;
  double p_in = 0.1;
  double p_out = 0.01;
  std::uint64_t seed = 7;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct DiminishEvent {
  std::uint32_t start = 0;
  std::uint32_t length = 0;
  std::uint32_t community = 0;
};

struct SbmRun {
  DynamicGraph graph;
  /// membership[t][v]: community of node v while edges of step t were drawn.
  std::vector<std::vector<std::uint32_t>> membership;
  std::vector<DiminishEvent> events;
};

/// Every node is present in every step. Community c initially holds the
/// contiguous node block [c*n/C, (c+1)*n/C). Each step of an event moves
/// `swaps_per_step` random members of the diminishing community to random
/// other communities before that step's edges are drawn.
SbmRun generate_sbm(const SbmConfig& cfg);
DynamicGraph synth_dynamic_sbm(const SbmConfig& cfg);

}  // namespace mss
