#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mss/graph.hpp"

namespace mss {

/// sqrt of the sum of squared singular values of the weighted adjacency
/// matrix, computed through an SVD. Empty graph -> 0.
double fnorm(const StaticGraph& g);
/// Entry-wise Frobenius norm of the same matrix; must agree with fnorm().
double fnorm_frobenius(const StaticGraph& g);
/// |fnorm(a) - fnorm(b)|
double madist(const StaticGraph& a, const StaticGraph& b);

struct Candidate {
  std::size_t id = 0;
  const StaticGraph* graph = nullptr;
};

/// Ids of the k candidates closest to `query` under madist, returned as an
/// ascending id list (membership is what matters; ties go to smaller ids).
/// Throws std::invalid_argument if candidates is empty or k exceeds its size.
std::vector<std::size_t> ground_truth_knn(const StaticGraph& query, std::span<const Candidate> candidates,
                                          std::size_t k);
/// Sequential reference for ground_truth_knn.
std::vector<std::size_t> ground_truth_knn_serial(const StaticGraph& query, std::span<const Candidate> candidates,
                                                 std::size_t k);

/// The selection step alone, over precomputed fnorms aligned with `ids`.
/// Distances are compared on a 1e-9 grid.
std::vector<std::size_t> nearest_by_fnorm(double query_fnorm, std::span<const double> candidate_fnorms,
                                          std::span<const std::size_t> ids, std::size_t k);

/// fnorm of every graph, computed concurrently.
std::vector<double> fnorm_all(std::span<const StaticGraph> graphs);

}  // namespace mss
