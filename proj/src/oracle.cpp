#include "mss/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mss {

double fnorm(const StaticGraph& g) {
  if (g.empty()) return 0.0;
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(*g.local_index(e.u));
    const auto j = static_cast<Eigen::Index>(*g.local_index(e.v));
    a(i, j) = e.weight;
    a(j, i) = e.weight;
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return std::sqrt(svd.singularValues().squaredNorm());
}

double fnorm_frobenius(const StaticGraph& g) {
  double s = 0.0;
  for (const Edge& e : g.edges()) s += 2.0 * e.weight * e.weight;
  return std::sqrt(s);
}

double madist(const StaticGraph& a, const StaticGraph& b) { return std::abs(fnorm(a) - fnorm(b)); }

std::vector<std::size_t> nearest_by_fnorm(double query_fnorm, std::span<const double> candidate_fnorms,
                                          std::span<const std::size_t> ids, std::size_t k) {
  if (ids.empty()) throw std::invalid_argument("ground truth: no candidates");
  if (k > ids.size()) throw std::invalid_argument("ground truth: k exceeds candidate count");
  // SVD round-off (~1e-13) would otherwise split exact ties between equal-norm graphs.
  std::vector<std::pair<std::int64_t, std::size_t>> ranked;
  ranked.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    ranked.emplace_back(std::llround(std::abs(query_fnorm - candidate_fnorms[i]) * 1e9), ids[i]);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> fnorm_all(std::span<const StaticGraph> graphs) {
  std::vector<double> out(graphs.size());
  const auto n = static_cast<std::int64_t>(graphs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fnorm(graphs[static_cast<std::size_t>(i)]);
  return out;
}

namespace {

std::vector<std::size_t> gt_impl(const StaticGraph& query, std::span<const Candidate> candidates, std::size_t k,
                                 bool parallel) {
  if (candidates.empty()) throw std::invalid_argument("ground truth: no candidates");
  if (k > candidates.size()) throw std::invalid_argument("ground truth: k exceeds candidate count");
  std::vector<double> norms(candidates.size());
  std::vector<std::size_t> ids(candidates.size());
  const auto n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& c = candidates[static_cast<std::size_t>(i)];
    norms[static_cast<std::size_t>(i)] = fnorm(*c.graph);
    ids[static_cast<std::size_t>(i)] = c.id;
  }
  return nearest_by_fnorm(fnorm(query), norms, ids, k);
}

}  // namespace

std::vector<std::size_t> ground_truth_knn(const StaticGraph& query, std::span<const Candidate> candidates,
                                          std::size_t k) {
  return gt_impl(query, candidates, k, true);
}

std::vector<std::size_t> ground_truth_knn_serial(const StaticGraph& query, std::span<const Candidate> candidates,
                                                 std::size_t k) {
  return gt_impl(query, candidates, k, false);
}

}  // namespace mss
