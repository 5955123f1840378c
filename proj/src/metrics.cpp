#include "mss/metrics.hpp"

#include <numeric>
#include <vector>

namespace mss {

std::optional<double> GraphMetrics::field(std::string_view name) const {
  if (name == "node_count") return static_cast<double>(node_count);
  if (name == "edge_count") return static_cast<double>(edge_count);
  if (name == "density") return density;
  if (name == "avg_clustering") return avg_clustering;
  if (name == "transitivity") return transitivity;
  if (name == "components") return static_cast<double>(components);
  return std::nullopt;
}

GraphMetrics graph_metrics(const StaticGraph& g) {
  GraphMetrics m;
  const std::size_t n = g.node_count();
  m.node_count = n;
  m.edge_count = g.edge_count();
  if (n == 0) return m;
  if (n >= 2) m.density = 2.0 * static_cast<double>(m.edge_count) / (static_cast<double>(n) * (n - 1));

  const Csr csr = make_csr(g);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : csr.adj(i)) parent[find(i)] = find(j);
  for (std::size_t i = 0; i < n; ++i) m.components += find(i) == i;

  // Triangles through each node via sorted-list intersection.
  double local_sum = 0.0, triangles = 0.0, triads = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ni = csr.adj(i);
    const double d = static_cast<double>(ni.size());
    if (ni.size() < 2) continue;
    std::size_t t = 0;
    for (auto j : ni) {
      const auto nj = csr.adj(j);
      auto a = ni.begin();
      auto b = nj.begin();
      while (a != ni.end() && b != nj.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++t; ++a; ++b; }
      }
    }
    const double tri = static_cast<double>(t) / 2.0;  // each triangle seen from both other corners
    const double pairs = d * (d - 1) / 2.0;
    local_sum += tri / pairs;
    triangles += tri;
    triads += pairs;
  }
  m.avg_clustering = local_sum / static_cast<double>(n);
  m.transitivity = triads > 0 ? triangles / triads : 0.0;
  return m;
}

}  // namespace mss
