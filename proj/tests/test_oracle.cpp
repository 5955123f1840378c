#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "mss/experiment.hpp"
#include "mss/oracle.hpp"
#include "mss/sbm.hpp"
#include "oracles.hpp"

using namespace mss;
using oracle::make_graph;

namespace {

double binom(double n, double k) { return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)); }

SbmConfig small_sbm() {
  SbmConfig c;
  c.nodes = 30;
  c.timesteps = 24;
  c.diminish_events = 1;
  c.diminish_len = 5;
  c.p_in = 0.3;
  c.p_out = 0.02;
  return c;
}

}  // namespace

TEST_CASE("fnorm and madist examples") {
  const auto k2 = make_graph({{0, 1}});
  const auto k3 = make_graph({{0, 1}, {1, 2}, {0, 2}});
  const auto p3 = make_graph({{0, 1}, {1, 2}});
  CHECK(fnorm(StaticGraph{}) == 0.0);
  CHECK(fnorm(StaticGraph({1, 2, 3}, {})) == 0.0);
  CHECK(fnorm(k2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(madist(k2, StaticGraph{}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(madist(k3, p3) == doctest::Approx(std::sqrt(6.0) - 2.0).epsilon(1e-12));
  CHECK(madist(k3, k3) == 0.0);
}

TEST_CASE("fnorm SVD path equals the entrywise norm") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const NodeId n = static_cast<NodeId>(rng() % 51);
    const auto g = oracle::random_graph(rng, n, std::uniform_real_distribution<double>(0.0, 0.5)(rng), true);
    const double ref = oracle::frobenius(g);
    CHECK(std::abs(fnorm(g) - ref) <= 1e-9);
    CHECK(std::abs(fnorm_frobenius(g) - ref) <= 1e-9);
    CHECK(std::abs(oracle::dense_adjacency(g).norm() - ref) <= 1e-9);
  }
}

TEST_CASE("madist is a pseudometric") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_graph(rng, 15, 0.3, true);
    const auto b = oracle::random_graph(rng, 15, 0.3, true);
    const auto c = oracle::random_graph(rng, 15, 0.3, true);
    CHECK(madist(a, b) == madist(b, a));
    CHECK(madist(a, b) >= 0.0);
    CHECK(madist(a, a) == 0.0);
    CHECK(madist(a, c) <= madist(a, b) + madist(b, c) + 1e-12);
  }
}

TEST_CASE("ground truth k-NN") {
  std::mt19937_64 rng(53);
  std::vector<StaticGraph> graphs;
  for (int i = 0; i < 20; ++i) graphs.push_back(oracle::random_graph(rng, 12, 0.1 + 0.02 * i, true));
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < graphs.size(); ++i) cands.push_back({i * 10, &graphs[i]});

  CHECK(ground_truth_knn(graphs[7], cands, 1) == std::vector<std::size_t>{70});
  std::vector<std::size_t> all;
  for (auto& c : cands) all.push_back(c.id);
  CHECK(ground_truth_knn(graphs[0], cands, cands.size()) == all);
  CHECK_THROWS_AS(ground_truth_knn(graphs[0], cands, 21), std::invalid_argument);
  CHECK_THROWS_AS(ground_truth_knn(graphs[0], std::span<const Candidate>{}, 1), std::invalid_argument);

  for (int trial = 0; trial < 50; ++trial) {
    const auto q = oracle::random_graph(rng, 12, 0.3, true);
    // Independent full sort by (distance, id).
    std::vector<std::pair<double, std::size_t>> d;
    for (auto& c : cands) d.emplace_back(std::abs(oracle::frobenius(q) - oracle::frobenius(*c.graph)), c.id);
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> expect;
    for (int i = 0; i < 5; ++i) expect.push_back(d[static_cast<std::size_t>(i)].second);
    std::sort(expect.begin(), expect.end());
    CHECK(ground_truth_knn(q, cands, 5) == expect);
    CHECK(ground_truth_knn_serial(q, cands, 5) == expect);
  }

  // Ties go to the smaller id.
  const auto k2 = make_graph({{0, 1}});
  const auto k2b = make_graph({{5, 9}});
  std::vector<Candidate> tied{{3, &k2b}, {1, &k2}, {2, &k2}};
  CHECK(ground_truth_knn(k2, tied, 2) == std::vector<std::size_t>{1, 2});

  const std::vector<double> f{1.0, 2.0, 3.0, 2.0};
  const std::vector<std::size_t> ids{0, 1, 2, 3};
  CHECK(nearest_by_fnorm(2.1, f, ids, 2) == std::vector<std::size_t>{1, 3});
  CHECK(fnorm_all(graphs)[4] == doctest::Approx(fnorm(graphs[4])));
}

TEST_CASE("SBM generator") {
  SbmConfig cliques;
  cliques.nodes = 12;
  cliques.timesteps = 3;
  cliques.diminish_events = 0;
  cliques.p_in = 1.0;
  cliques.p_out = 0.0;
  const auto dg = synth_dynamic_sbm(cliques);
  REQUIRE(dg.length() == 3);
  for (const auto& g : dg.graphs) {
    CHECK(g.node_count() == 12);
    CHECK(g.edge_count() == 3 * 6);
    for (const Edge& e : g.edges()) CHECK(e.u / 4 == e.v / 4);
  }

  const SbmConfig def;
  const auto run = generate_sbm(def);
  CHECK(run.graph.length() == 100);
  CHECK(run.events.size() == def.diminish_events);
  for (const auto& ev : run.events) {
    CHECK(ev.length == 10);
    std::vector<std::uint32_t> before(def.nodes);
    if (ev.start == 0)
      for (std::uint32_t v = 0; v < def.nodes; ++v) before[v] = v * def.communities / def.nodes;
    else
      before = run.membership[ev.start - 1];
    const auto& after = run.membership[ev.start + ev.length - 1];
    std::size_t changed = 0;
    for (std::uint32_t v = 0; v < def.nodes; ++v) changed += before[v] != after[v];
    CHECK(changed == 10 * def.swaps_per_step);
  }
  CHECK(synth_dynamic_sbm(def) == run.graph);
  SbmConfig other = def;
  other.seed = 8;
  CHECK_FALSE(synth_dynamic_sbm(other) == run.graph);

  SbmConfig bad = def;
  bad.p_in = 0.01;
  bad.p_out = 0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = def;
  bad.communities = 1;
  CHECK_THROWS_AS(synth_dynamic_sbm(bad), std::invalid_argument);
  bad = def;
  bad.diminish_len = 21;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("chance level formulas") {
  const std::size_t N = 99, k = 5;
  CHECK(chance_accuracy(N, k) == doctest::Approx(5.0 / 99.0));
  // Exact hypergeometric moments of the overlap of two k-subsets.
  double mean = 0, sq = 0;
  for (std::size_t x = 0; x <= k; ++x) {
    const double p = binom(k, x) * binom(N - k, k - x) / binom(N, k);
    mean += x * p;
    sq += x * x * p;
  }
  CHECK(mean / k == doctest::Approx(chance_accuracy(N, k)));
  CHECK(std::sqrt((sq - mean * mean) / (k * k) / 5.0) == doctest::Approx(chance_sigma(N, k, 5)));
}

TEST_CASE("experiment: self retrieval without perturbation") {
  // Bucket t is a path on t + 2 nodes: every window has a distinct fnorm, so
  // the unperturbed query is its own unique nearest neighbour.
  DynamicGraph dg;
  for (NodeId t = 0; t < 24; ++t) {
    std::vector<Edge> es;
    for (NodeId v = 0; v <= t; ++v) es.push_back({v, v + 1});
    dg.graphs.emplace_back(std::vector<NodeId>{}, es);
  }
  ExperimentConfig cfg;
  cfg.methods = {BenchMethod::fgsd};
  cfg.lengths = {1, 2, 4};
  cfg.k = 1;
  cfg.runs = 4;
  cfg.perturb = false;
  const auto t = run_accuracy_experiment(dg, cfg);
  for (std::size_t l = 0; l < 3; ++l) CHECK(t.accuracy[0][l] == 1.0);
  CHECK(t.candidates == std::vector<std::size_t>{24, 23, 21});
}

TEST_CASE("experiment: table shape, determinism and CSV") {
  const auto dg = synth_dynamic_sbm(small_sbm());
  ExperimentConfig cfg;
  cfg.methods = {BenchMethod::fgsd, BenchMethod::gl2vec, BenchMethod::multiscale_graph2vec, BenchMethod::random_vectors};
  cfg.lengths = {1, 3};
  cfg.runs = 3;
  cfg.doc.epochs = 10;
  cfg.doc.dim = 16;
  cfg.doc.min_count = 1;
  const auto a = run_accuracy_experiment(dg, cfg, "tiny");
  const auto b = run_accuracy_experiment(dg, cfg, "tiny");
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.samples == b.samples);
  CHECK(a.to_csv() == b.to_csv());
  REQUIRE(a.methods.size() == 4);
  CHECK(a.methods[0] == "FGSD");
  CHECK(a.methods[3] == "Random");
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t l = 0; l < 2; ++l) {
      CHECK(a.accuracy[m][l] >= 0.0);
      CHECK(a.accuracy[m][l] <= 1.0);
      REQUIRE(a.samples[m][l].size() == 3);
      const double mean = std::accumulate(a.samples[m][l].begin(), a.samples[m][l].end(), 0.0) / 3.0;
      CHECK(a.accuracy[m][l] == doctest::Approx(mean));
      for (double s : a.samples[m][l]) CHECK(std::abs(s * 5 - std::round(s * 5)) < 1e-12);
    }
  const auto csv = a.to_csv();
  CHECK(csv.rfind("dataset,method,length,accuracy,runs,k,candidates\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 2);
  CHECK(a.to_text().find("Multiscale Graph2Vec") != std::string::npos);

  cfg.seed = 2;
  CHECK(run_accuracy_experiment(dg, cfg).samples != a.samples);

  ExperimentConfig bad = cfg;
  bad.lengths = {25};
  CHECK_THROWS_AS(run_accuracy_experiment(dg, bad), std::invalid_argument);
  bad.lengths = {0};
  CHECK_THROWS_AS(run_accuracy_experiment(dg, bad), std::invalid_argument);
  bad = cfg;
  bad.k = 30;
  CHECK_THROWS_AS(run_accuracy_experiment(dg, bad), std::invalid_argument);
}

TEST_CASE("experiment: random vectors sit at chance level") {
  SbmConfig c = small_sbm();
  c.timesteps = 60;
  c.diminish_events = 0;
  const auto dg = synth_dynamic_sbm(c);
  ExperimentConfig cfg;
  cfg.methods = {BenchMethod::random_vectors};
  cfg.lengths = {2};
  cfg.runs = 20;
  const auto t = run_accuracy_experiment(dg, cfg);
  const std::size_t N = t.candidates[0];
  CHECK(N == 59);
  CHECK(std::abs(t.accuracy[0][0] - chance_accuracy(N, 5)) <= 3.0 * chance_sigma(N, 5, 20));
}

TEST_CASE("bench method names") {
  for (auto m : {BenchMethod::graph2vec, BenchMethod::gl2vec, BenchMethod::fgsd, BenchMethod::multiscale_graph2vec,
                 BenchMethod::multiscale_gl2vec, BenchMethod::multiscale_fgsd, BenchMethod::random_vectors})
    CHECK(parse_bench_method(to_string(m)) == m);
  CHECK(parse_bench_method("ms_fgsd") == BenchMethod::multiscale_fgsd);
  CHECK(is_multiscale(BenchMethod::multiscale_gl2vec));
  CHECK_FALSE(is_multiscale(BenchMethod::fgsd));
  CHECK_FALSE(parse_bench_method("sgd"));
}
