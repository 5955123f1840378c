#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mss/abstraction.hpp"
#include "mss/layout.hpp"
#include "oracles.hpp"

using namespace mss;

namespace {

SnapshotView view(const SnapshotHierarchy& h, std::uint32_t level, std::uint32_t index) {
  return {h.at(level, index), Metaphor::node_link, false};
}

ViewState random_state(std::mt19937_64& rng, const SnapshotHierarchy& h) {
  ViewState s;
  s.max_levels = 1 + static_cast<std::uint32_t>(rng() % 5);
  s.per_level_budget = 1 + static_cast<std::uint32_t>(rng() % 7);
  const double p = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
  for (const auto& iv : h.all()) {
    if (std::uniform_real_distribution<double>(0, 1)(rng) >= p) continue;
    s.views.push_back({iv, static_cast<Metaphor>(rng() % 4), rng() % 8 == 0});
  }
  std::shuffle(s.views.begin(), s.views.end(), rng);
  return s;
}

}  // namespace

TEST_CASE("root covered by both halves is abstracted") {
  const auto h = build_hierarchy(8);
  ViewState s;
  s.views = {view(h, 5, 0), view(h, 4, 0), view(h, 4, 1)};
  const auto out = auto_abstract(s, h);
  CHECK(out.views[0].abstracted);
  CHECK_FALSE(out.views[1].abstracted);
  CHECK_FALSE(out.views[2].abstracted);
  CHECK(out.visible_levels() == std::vector<std::uint32_t>{4});
}

TEST_CASE("half coverage is not a majority") {
  const auto h = build_hierarchy(8);
  ViewState s;
  s.views = {view(h, 5, 0), view(h, 3, 0)};
  CHECK(auto_abstract(s, h) == s);
  CHECK(coverage_fraction(h.root(), {h.at(3, 0)}) == 0.5);
  CHECK(coverage_fraction(h.root(), {h.at(4, 0), h.at(4, 1), h.at(2, 3)}) == 1.0);
}

TEST_CASE("budget examples") {
  const auto h = build_hierarchy(16);
  ViewState s;
  for (std::uint32_t k : {4u, 0u, 8u}) s.views.push_back(view(h, 1, k));
  CHECK(auto_abstract(s, h) == s);

  s.views.clear();
  for (std::uint32_t k : {12u, 2u, 10u, 6u, 14u, 8u, 4u}) s.views.push_back(view(h, 1, k));
  const auto out = auto_abstract(s, h);
  std::size_t abstracted = 0;
  for (const auto& v : out.views) {
    abstracted += v.abstracted;
    if (v.abstracted) CHECK(v.interval.start == 2);
  }
  CHECK(abstracted == 1);
}

TEST_CASE("level limit drops the coarsest levels first") {
  const auto h = build_hierarchy(16);
  ViewState s;
  s.max_levels = 2;
  s.views = {view(h, 1, 0), view(h, 2, 5), view(h, 3, 7), view(h, 4, 3)};
  const auto out = auto_abstract(s, h);
  CHECK(out.visible_levels() == std::vector<std::uint32_t>{1, 2});
  CHECK(out.views[2].abstracted);
  CHECK(out.views[3].abstracted);
}

TEST_CASE("invalid views are rejected") {
  const auto h = build_hierarchy(8);
  ViewState s;
  s.views = {{Interval{0, 3, 2, 0, false}, Metaphor::matrix, false}};
  CHECK_THROWS_AS(auto_abstract(s, h), std::invalid_argument);
  s.views = {{Interval{0, 2, 9, 0, false}, Metaphor::matrix, false}};
  CHECK_THROWS_AS(auto_abstract(s, h), std::invalid_argument);
}

TEST_CASE("abstraction invariants over random states") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto h = build_hierarchy(1 + static_cast<std::uint32_t>(rng() % 48));
    const auto s = random_state(rng, h);
    const auto once = auto_abstract(s, h);
    const auto twice = auto_abstract(once, h);
    CHECK(twice == once);
    CHECK(once.visible_levels().size() <= s.max_levels);
    for (auto l : once.visible_levels()) CHECK(once.visible_count(l) <= s.per_level_budget);
    REQUIRE(once.views.size() == s.views.size());
    for (std::size_t i = 0; i < s.views.size(); ++i) {
      CHECK(once.views[i].interval == s.views[i].interval);
      CHECK(once.views[i].metaphor == s.views[i].metaphor);
      if (s.views[i].abstracted) CHECK(once.views[i].abstracted);
    }
    if (s.visible_levels().size() > s.max_levels) continue;
    for (std::size_t i = 0; i < s.views.size(); ++i) {
      const auto& v = s.views[i];
      if (v.abstracted || s.visible_count(v.interval.level) > s.per_level_budget) continue;
      bool isolated = true;
      for (std::size_t j = 0; j < s.views.size(); ++j)
        if (j != i && !s.views[j].abstracted && v.interval.overlap(s.views[j].interval.start, s.views[j].interval.end) > 0)
          isolated = false;
      if (isolated) CHECK_FALSE(once.views[i].abstracted);
    }
  }
}

TEST_CASE("metric colors") {
  CHECK(metric_color(0.0, 0.0, 1.0) == kLowColor);
  CHECK(metric_color(1.0, 0.0, 1.0) == kHighColor);
  CHECK(metric_color(-5.0, 0.0, 1.0) == kLowColor);
  CHECK(metric_color(5.0, 0.0, 1.0) == kHighColor);
  CHECK(metric_color(3.0, 3.0, 3.0) == kLowColor);
  CHECK(metric_color(0.5, 0.0, 1.0).hex() == "#739ECA");
  CHECK(kLowColor.hex() == "#DEEBF7");
  CHECK(kHighColor.hex() == "#08519C");
  CHECK_THROWS_AS(metric_color(0.5, 1.0, 0.0), std::invalid_argument);
  // Monotone darkening along the scale.
  Rgb prev = kLowColor;
  for (int i = 1; i <= 100; ++i) {
    const auto c = metric_color(i / 100.0, 0.0, 1.0);
    CHECK(c.r <= prev.r);
    CHECK(c.g <= prev.g);
    CHECK(c.b <= prev.b);
    prev = c;
  }
}

TEST_CASE("metaphor names") {
  for (auto m : {Metaphor::node_link, Metaphor::matrix, Metaphor::metrics_series, Metaphor::animation})
    CHECK(parse_metaphor(to_string(m)) == m);
  CHECK_FALSE(parse_metaphor("sankey"));
}

TEST_CASE("layout: closed-form cases") {
  for (auto alg : {LayoutAlgorithm::fruchterman_reingold, LayoutAlgorithm::kamada_kawai}) {
    LayoutParams p;
    p.algorithm = alg;
    const auto single = global_layout(StaticGraph({42}, {}), p);
    REQUIRE(single.positions.size() == 1);
    CHECK(single.position(42) == Point{0.0, 0.0});
    CHECK_FALSE(single.position(7));

    for (double len : {1.0, 2.5}) {
      p.edge_length = len;
      const auto two = global_layout(oracle::make_graph({{3, 9}}), p);
      const auto a = *two.position(3), b = *two.position(9);
      CHECK(a.x == doctest::Approx(-b.x));
      CHECK(a.y == doctest::Approx(-b.y));
      const double d = std::hypot(a.x - b.x, a.y - b.y);
      CHECK(std::abs(d - len) <= 0.1 * len);
    }
    CHECK_THROWS_AS(global_layout(StaticGraph{}, p), std::invalid_argument);
    p.edge_length = 0;
    CHECK_THROWS_AS(global_layout(oracle::make_graph({{0, 1}}), p), std::invalid_argument);
  }
}

TEST_CASE("layout: determinism and finiteness") {
  std::mt19937_64 rng(62);
  for (auto alg : {LayoutAlgorithm::fruchterman_reingold, LayoutAlgorithm::kamada_kawai}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = oracle::random_graph(rng, 40, 0.06);
      if (g.empty()) continue;
      LayoutParams p;
      p.algorithm = alg;
      p.seed = 9;
      p.iterations = 100;
      const auto a = global_layout(g, p);
      const auto b = global_layout(g, p);
      CHECK(a.nodes == g.nodes());
      CHECK(a.positions == b.positions);
      CHECK(a.algorithm == alg);
      double cx = 0, cy = 0;
      for (const auto& q : a.positions) {
        CHECK(std::isfinite(q.x));
        CHECK(std::isfinite(q.y));
        cx += q.x;
        cy += q.y;
      }
      CHECK(std::abs(cx) < 1e-6);
      CHECK(std::abs(cy) < 1e-6);
      p.seed = 10;
      if (g.node_count() > 1) CHECK(global_layout(g, p).positions != a.positions);
    }
  }
  CHECK(parse_layout_algorithm("kk") == LayoutAlgorithm::kamada_kawai);
  CHECK(parse_layout_algorithm(to_string(LayoutAlgorithm::fruchterman_reingold)) == LayoutAlgorithm::fruchterman_reingold);
  CHECK_FALSE(parse_layout_algorithm("circular"));
}
