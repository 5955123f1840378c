#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mss/embed.hpp"
#include "mss/graph.hpp"
#include "mss/knn_index.hpp"

namespace mss {

/// Methods compared by the window-query benchmark. The single-embedding
/// variants embed every bucket graph and represent a window by the median of
/// its graphs' vectors; the multiscale variants embed hierarchy union graphs
/// and search one level's index. `random_vectors` is a chance baseline.
enum class BenchMethod : std::uint8_t {
  graph2vec,
  gl2vec,
  fgsd,
  multiscale_graph2vec,
  multiscale_gl2vec,
  multiscale_fgsd,
  random_vectors,
};

std::string_view to_string(BenchMethod m);
std::optional<BenchMethod> parse_bench_method(std::string_view s);
bool is_multiscale(BenchMethod m);

struct ExperimentConfig {
  std::vector<BenchMethod> methods{BenchMethod::graph2vec,          BenchMethod::gl2vec,
                                   BenchMethod::fgsd,               BenchMethod::multiscale_graph2vec,
                                   BenchMethod::multiscale_gl2vec,  BenchMethod::multiscale_fgsd};
  std::vector<std::uint32_t> lengths{1, 2, 3, 4, 8};
  std::uint32_t runs = 5;
  std::uint32_t k = 5;
  std::uint64_t seed = 1;
  /// Remove one random node from every query graph.
  bool perturb = true;
  FgsdParams fgsd;
  std::uint32_t wl_iterations = 2;
  Doc2VecParams doc;
  IndexParams index;
};

struct AccuracyTable {
  std::string dataset;
  std::uint32_t runs = 0;
  std::uint32_t k = 0;
  std::vector<std::string> methods;
  std::vector<std::uint32_t> lengths;
  /// Candidate window count per length.
  std::vector<std::size_t> candidates;
  /// accuracy[m][l]: mean over runs.
  std::vector<std::vector<double>> accuracy;
  /// samples[m][l][r]: accuracy of run r.
  std::vector<std::vector<std::vector<double>>> samples;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Window-query k-NN accuracy against the madist ground truth.
///
/// All methods are trained on `dg` first. Per run and per length L a random
/// window is drawn and (optionally) perturbed; its query vector is searched
/// among all windows of length L (stride 1), and accuracy is the fraction of
/// the k ground-truth windows (madist between union graphs) that the method
/// retrieves. Throws std::invalid_argument when a length exceeds T.
AccuracyTable run_accuracy_experiment(const DynamicGraph& dg, const ExperimentConfig& cfg,
                                      std::string dataset = "synthetic");

/// Expected accuracy of a random retrieval: k / N.
double chance_accuracy(std::size_t candidates, std::size_t k);
/// Standard deviation of the run-averaged accuracy of a random retrieval
/// (hypergeometric overlap of two k-subsets of N).
double chance_sigma(std::size_t candidates, std::size_t k, std::size_t runs);

}  // namespace mss
