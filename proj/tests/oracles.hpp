#pragma once

// Brute-force reference implementations used as test oracles. Deliberately
// naive: dense matrices, std::map counting, exhaustive enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mss/graph.hpp"

namespace oracle {

using mss::Edge;
using mss::NodeId;
using mss::Sign;
using mss::StaticGraph;

inline StaticGraph make_graph(std::vector<std::pair<NodeId, NodeId>> edges, std::vector<NodeId> extra_nodes = {}) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.push_back({a, b, 1.0, Sign::none});
  return StaticGraph(std::move(extra_nodes), std::move(es));
}

/// Erdos-Renyi graph over a random subset of [0, max_nodes).
inline StaticGraph random_graph(std::mt19937_64& rng, NodeId max_nodes, double p, bool weighted = false,
                                double node_keep = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < max_nodes; ++v)
    if (u(rng) < node_keep) nodes.push_back(v);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (u(rng) < p) {
        const double w = weighted ? std::floor(u(rng) * 5.0) + 1.0 : 1.0;
        const int s = static_cast<int>(u(rng) * 3.0) - 1;
        edges.push_back({nodes[i], nodes[j], w, static_cast<Sign>(s)});
      }
  return StaticGraph(nodes, edges);
}

inline Eigen::MatrixXd dense_adjacency(const StaticGraph& g, bool weighted = true) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(*g.local_index(e.u));
    const auto j = static_cast<Eigen::Index>(*g.local_index(e.v));
    a(i, j) = a(j, i) = weighted ? e.weight : 1.0;
  }
  return a;
}

inline double frobenius(const StaticGraph& g) {
  double s = 0.0;
  for (const Edge& e : g.edges()) s += 2.0 * e.weight * e.weight;
  return std::sqrt(s);
}

struct Metrics {
  double nodes, edges, density, avg_clustering, transitivity, components;
};

/// O(n^3) metrics over a dense 0/1 adjacency matrix.
inline Metrics brute_metrics(const StaticGraph& g) {
  const auto A = dense_adjacency(g, false);
  const int n = static_cast<int>(A.rows());
  Metrics m{};
  m.nodes = n;
  m.edges = static_cast<double>(g.edge_count());
  m.density = n < 2 ? 0.0 : 2.0 * m.edges / (n * (n - 1.0));
  double closed = 0.0, triads = 0.0, cc_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    int deg = 0, links = 0;
    for (int a = 0; a < n; ++a) deg += A(v, a) > 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (A(v, a) > 0 && A(v, b) > 0) {
          triads += 1;
          if (A(a, b) > 0) {
            ++links;
            closed += 1;
          }
        }
    if (deg >= 2) cc_sum += 2.0 * links / (deg * (deg - 1.0));
  }
  m.avg_clustering = n == 0 ? 0.0 : cc_sum / n;
  m.transitivity = triads == 0 ? 0.0 : closed / triads;
  // Components by repeated relaxation of labels.
  std::vector<int> label(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = v;
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (A(a, b) > 0 && label[static_cast<std::size_t>(b)] < label[static_cast<std::size_t>(a)]) {
          label[static_cast<std::size_t>(a)] = label[static_cast<std::size_t>(b)];
          changed = true;
        }
  }
  m.components = static_cast<double>(std::set<int>(label.begin(), label.end()).size());
  return m;
}

/// Counting oracle for the three summaries: returns (nodes, edge -> (count, pos, neg)).
struct Summaries {
  std::set<NodeId> union_nodes, inter_nodes, disj_nodes;
  std::map<std::pair<NodeId, NodeId>, std::tuple<int, int, int>> edge_counts;
  std::map<NodeId, int> node_counts;
};

inline Summaries count_summaries(const std::vector<StaticGraph>& graphs, int i) {
  Summaries s;
  for (const auto& g : graphs) {
    for (NodeId n : g.nodes()) s.node_counts[n] += 1;
    for (const Edge& e : g.edges()) {
      auto& [c, p, q] = s.edge_counts[{e.u, e.v}];
      c += 1;
      p += e.sign == Sign::positive;
      q += e.sign == Sign::negative;
    }
  }
  for (auto [n, c] : s.node_counts) {
    s.union_nodes.insert(n);
    if (c > i) s.inter_nodes.insert(n);
    if (c < i) s.disj_nodes.insert(n);
  }
  return s;
}

inline Sign majority(int p, int q) { return p > q ? Sign::positive : q > p ? Sign::negative : Sign::none; }

inline StaticGraph oracle_union(const std::vector<StaticGraph>& graphs) {
  const auto s = count_summaries(graphs, 0);
  std::vector<Edge> es;
  for (const auto& [k, v] : s.edge_counts) es.push_back({k.first, k.second, double(std::get<0>(v)), majority(std::get<1>(v), std::get<2>(v))});
  return StaticGraph::from_sorted({s.union_nodes.begin(), s.union_nodes.end()}, es);
}

inline StaticGraph oracle_threshold(const std::vector<StaticGraph>& graphs, int i, bool intersection) {
  const auto s = count_summaries(graphs, i);
  const auto& keep = intersection ? s.inter_nodes : s.disj_nodes;
  std::vector<Edge> es;
  for (const auto& [k, v] : s.edge_counts) {
    const int c = std::get<0>(v);
    if (!(intersection ? c > i : c < i)) continue;
    if (!keep.count(k.first) || !keep.count(k.second)) continue;
    es.push_back({k.first, k.second, double(c), majority(std::get<1>(v), std::get<2>(v))});
  }
  return StaticGraph::from_sorted({keep.begin(), keep.end()}, es);
}

/// All hierarchy intervals by direct enumeration over (width, stride).
struct Iv {
  std::uint32_t start, end, level;
  bool root;
};

inline std::vector<Iv> enumerate_intervals(std::uint32_t T) {
  std::vector<Iv> out;
  for (std::uint32_t t = 0; t < T; ++t) out.push_back({t, t + 1, 1, false});
  std::uint32_t level = 1;
  for (std::uint32_t width = 2; width / 2 < T; width *= 2) {
    ++level;
    const std::uint32_t stride = width / 2;
    for (std::uint32_t s = 0; s < T; s += stride) out.push_back({s, std::min(T, s + width), level, false});
  }
  out.push_back({0, T, level + 1, true});
  return out;
}

/// Dense weighted modularity.
inline double brute_modularity(const StaticGraph& g, const std::vector<std::uint32_t>& comm) {
  const auto A = dense_adjacency(g, true);
  const double two_m = A.sum();
  if (two_m == 0.0) return 0.0;
  const Eigen::VectorXd k = A.rowwise().sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.rows(); ++j)
      if (comm[static_cast<std::size_t>(i)] == comm[static_cast<std::size_t>(j)]) q += A(i, j) - k(i) * k(j) / two_m;
  return q / two_m;
}

/// Harmonic distances for a connected graph via (L + J/n)^-1 - J/n.
inline Eigen::MatrixXd harmonic_distances_connected(const StaticGraph& g) {
  const auto A = dense_adjacency(g, false);
  const auto n = A.rows();
  Eigen::MatrixXd L = -A;
  for (Eigen::Index i = 0; i < n; ++i) L(i, i) = A.row(i).sum();
  const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd P = (L + J).inverse() - J;
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y) S(x, y) = x == y ? 0.0 : P(x, x) + P(y, y) - 2 * P(x, y);
  return S;
}

}  // namespace oracle
