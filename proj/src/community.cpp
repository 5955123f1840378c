#include "mss/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace mss {

std::uint32_t CommunityPartition::community_of(NodeId n) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), n);
  if (it == nodes.end() || *it != n) throw std::out_of_range("node not in partition");
  return assignment[static_cast<std::size_t>(it - nodes.begin())];
}

double modularity(const StaticGraph& g, std::span<const std::uint32_t> assignment) {
  double total = 0.0;
  for (const Edge& e : g.edges()) total += e.weight;
  if (total <= 0.0) return 0.0;
  const std::uint32_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  std::vector<double> internal(k, 0.0), degree(k, 0.0);
  for (const Edge& e : g.edges()) {
    const auto cu = assignment[*g.local_index(e.u)];
    const auto cv = assignment[*g.local_index(e.v)];
    degree[cu] += e.weight;
    degree[cv] += e.weight;
    if (cu == cv) internal[cu] += e.weight;
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < k; ++c) {
    const double d = degree[c] / (2.0 * total);
    q += internal[c] / total - d * d;
  }
  return q;
}

CommunityPartition cluster_communities(const StaticGraph& g) {
  const std::size_t n = g.node_count();
  const Csr csr = make_csr(g);

  // Gains are kept scaled by (2m)^2, which keeps them exact for integer weights:
  // dq_ij = 2 * (2m * w_ij - k_i * k_j).
  double two_m = 0.0;
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = csr.offsets[i]; p < csr.offsets[i + 1]; ++p) degree[i] += csr.weights[p];
    two_m += degree[i];
  }

  std::vector<std::map<std::uint32_t, double>> dq(n);
  using Key = std::tuple<double, std::uint32_t, std::uint32_t>;  // (-gain, i, j), i < j
  std::set<Key> heap;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = csr.offsets[i]; p < csr.offsets[i + 1]; ++p) {
      const auto j = csr.neighbors[p];
      const double gain = 2.0 * (two_m * csr.weights[p] - degree[i] * degree[j]);
      dq[i][j] = gain;
      if (i < j) heap.insert({-gain, static_cast<std::uint32_t>(i), j});
    }
  }

  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto set_gain = [&](std::uint32_t a, std::uint32_t b, double gain) {
    const auto lo = std::min(a, b), hi = std::max(a, b);
    auto it = dq[a].find(b);
    if (it != dq[a].end()) heap.erase({-it->second, lo, hi});
    dq[a][b] = gain;
    dq[b][a] = gain;
    heap.insert({-gain, lo, hi});
  };
  auto drop_gain = [&](std::uint32_t a, std::uint32_t b) {
    auto it = dq[a].find(b);
    if (it == dq[a].end()) return;
    heap.erase({-it->second, std::min(a, b), std::max(a, b)});
    dq[a].erase(it);
    dq[b].erase(a);
  };

  while (!heap.empty()) {
    const auto [neg_gain, i, j] = *heap.begin();
    if (-neg_gain <= 0.0) break;
    // merge j into i
    std::map<std::uint32_t, double> nj = dq[j];
    std::map<std::uint32_t, double> ni = dq[i];
    drop_gain(i, j);
    std::set<std::uint32_t> touched;
    for (const auto& [k, _] : ni) touched.insert(k);
    for (const auto& [k, _] : nj) touched.insert(k);
    touched.erase(i);
    touched.erase(j);
    for (auto k : touched) {
      const auto ik = ni.find(k), jk = nj.find(k);
      double gain;
      if (ik != ni.end() && jk != nj.end()) gain = ik->second + jk->second;
      else if (ik != ni.end()) gain = ik->second - 2.0 * degree[j] * degree[k];
      else gain = jk->second - 2.0 * degree[i] * degree[k];
      drop_gain(j, k);
      set_gain(i, k, gain);
    }
    degree[i] += degree[j];
    degree[j] = 0.0;
    parent[j] = i;
  }

  auto root = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  CommunityPartition part;
  part.nodes = g.nodes();
  part.assignment.assign(n, 0);
  std::map<std::uint32_t, std::uint32_t> relabel;
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = root(static_cast<std::uint32_t>(v));
    auto [it, fresh] = relabel.emplace(r, static_cast<std::uint32_t>(relabel.size()));
    part.assignment[v] = it->second;
    if (fresh) part.members.emplace_back();
    part.members[it->second].push_back(g.nodes()[v]);
  }

  std::vector<NodeId> meta_nodes(part.members.size());
  std::iota(meta_nodes.begin(), meta_nodes.end(), NodeId{0});
  std::vector<Edge> meta_edges;
  for (const Edge& e : g.edges()) {
    const auto cu = part.assignment[*g.local_index(e.u)];
    const auto cv = part.assignment[*g.local_index(e.v)];
    if (cu != cv) meta_edges.push_back({cu, cv, e.weight, Sign::none});
  }
  part.meta_graph = StaticGraph(std::move(meta_nodes), std::move(meta_edges));
  part.modularity = modularity(g, part.assignment);
  return part;
}

}  // namespace mss
