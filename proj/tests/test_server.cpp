#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "doctest.h"
#include "mss/api.hpp"
#include "mss/artifact.hpp"
#include "mss/binary_io.hpp"
#include "mss/config.hpp"
#include "mss/errors.hpp"
#include "mss/http_server.hpp"
#include "oracles.hpp"
#include "schema_check.hpp"

// after Eigen: <resolv.h> defines a _res macro
#include "httplib.h"

using namespace mss;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::current_path() / "server_test_work";

BuildConfig fixture_config(const std::string& output) {
  auto cfg = load_build_config(std::string(MSS_FIXTURES) + "/tiny_build.json");
  cfg.output = (kWork / output).string();
  return cfg;
}

const Artifact& fixture() {
  static const std::unique_ptr<Artifact> art = [] {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    cmd_build(fixture_config("artifact"));
    return Artifact::load((kWork / "artifact").string());
  }();
  return *art;
}

ApiResponse get(Api& api, const std::string& path, std::map<std::string, std::string> query = {}) {
  return api.handle({"GET", path, std::move(query), ""});
}

ApiResponse post(Api& api, const std::string& path, const json& body) {
  return api.handle({"POST", path, {}, body.dump()});
}

schema::Checker& checker() {
  static schema::Checker c(std::string(MSS_SCHEMAS) + "/v1");
  return c;
}

void check_schema(const json& body, const std::string& schema_file) {
  const auto errors = checker().check(body, schema_file);
  for (const auto& e : errors) FAIL_CHECK(schema_file << " " << e);
}

bool near(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
  }
  if (a.type() != b.type()) return false;
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a.items())
      if (!b.contains(k) || !near(v, b[k])) return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!near(a[i], b[i])) return false;
    return true;
  }
  return a == b;
}

// Compares against tests/golden/<name>.json; MSS_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const json& body) {
  const std::string path = std::string(MSS_GOLDEN) + "/" + name + ".json";
  if (const char* up = std::getenv("MSS_UPDATE_GOLDEN"); up && std::string(up) == "1") {
    std::ofstream(path) << body.dump(2) << "\n";
    return;
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
  const json expected = json::parse(in);
  if (!near(body, expected)) FAIL_CHECK("golden mismatch for " << name << ":\n" << body.dump(2));
}

std::set<NodeId> node_ids(const json& snapshot) {
  std::set<NodeId> out;
  for (const auto& n : snapshot["nodes"]) out.insert(n["id"].get<NodeId>());
  return out;
}

}  // namespace

TEST_CASE("config: defaults, round trip and validation") {
  const BuildConfig d;
  CHECK(d.embed.doc.epochs == 80);
  CHECK(d.layout.algorithm == LayoutAlgorithm::fruchterman_reingold);
  CHECK(d.index.hnsw.M == 16);
  CHECK(d.index.hnsw.ef_construction == 200);
  CHECK(d.index.brute_force_below == 64);

  auto cfg = fixture_config("unused");
  const json j = to_json(cfg);
  CHECK(to_json(build_config_from_json(j)) == j);
  CHECK(cfg.embed.method == EmbeddingMethod::wl_doc);
  CHECK(cfg.embed.doc.dim == 16);
  CHECK(cfg.index.hnsw.M == 8);
  CHECK(fs::path(cfg.input).is_absolute());

  CHECK_THROWS_AS(build_config_from_json(json{{"inptu", "x"}}), std::invalid_argument);
  CHECK_THROWS_AS(build_config_from_json(json{{"embedding", {{"method", "deepwalk"}}}}), std::invalid_argument);
  CHECK_THROWS_AS(build_config_from_json(json{{"bucket_width", "hour"}}), std::invalid_argument);
  auto bad = cfg;
  bad.bucket_width = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.embed.doc.dim = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.input.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  apply_env_overrides(cfg, {{"MSS_SEED", "7"}, {"MSS_EPOCHS", "3"}, {"MSS_METHOD", "fgsd"}, {"MSS_OUTPUT", "elsewhere"}});
  CHECK(cfg.seed == 7);
  CHECK(cfg.embed.doc.epochs == 3);
  CHECK(cfg.embed.method == EmbeddingMethod::fgsd);
  CHECK(cfg.output == "elsewhere");
  CHECK_THROWS_AS(apply_env_overrides(cfg, {{"MSS_SEED", "-1"}}), std::invalid_argument);
  CHECK_THROWS_AS(apply_env_overrides(cfg, {{"MSS_METHOD", "x"}}), std::invalid_argument);
}

TEST_CASE("config: eval files") {
  const json j = {{"dataset", "sbm"},
                  {"sbm", {{"nodes", 60}, {"timesteps", 30}, {"seed", 3}}},
                  {"methods", {"fgsd", "ms_gl2vec", "random"}},
                  {"lengths", {1, 2}},
                  {"runs", 2},
                  {"embedding", {{"epochs", 5}}}};
  const auto c = eval_config_from_json(j);
  CHECK(c.sbm.nodes == 60);
  CHECK(c.sbm.seed == 3);
  CHECK(c.experiment.methods ==
        std::vector<BenchMethod>{BenchMethod::fgsd, BenchMethod::multiscale_gl2vec, BenchMethod::random_vectors});
  CHECK(c.experiment.doc.epochs == 5);
  CHECK(c.experiment.doc.dim == 128);
  CHECK_FALSE(c.input);
  CHECK(to_json(eval_config_from_json(to_json(c))) == to_json(c));
  CHECK_THROWS_AS(eval_config_from_json(json{{"methods", {"node2vec"}}}), std::invalid_argument);
  CHECK_THROWS_AS(eval_config_from_json(json{{"runs", 0}}).validate(), std::invalid_argument);
  auto e = c;
  apply_env_overrides(e, {{"MSS_SEED", "99"}});
  CHECK(e.experiment.seed == 99);
}

TEST_CASE("build: manifest, hashes and determinism") {
  const auto& art = fixture();
  const json& m = art.manifest();
  CHECK(m["format"] == "mss-artifact");
  CHECK(m["counts"]["buckets"] == 8);
  CHECK(m["counts"]["intervals"] == 23);
  CHECK(m["counts"]["embedded_snapshots"] == 15);
  CHECK(m["counts"]["embedding_records"] == 45);
  CHECK(m["counts"]["edges_parsed"] == 49);
  CHECK(m["counts"]["indexed_records"].get<std::size_t>() + m["counts"]["sentinel_records"].get<std::size_t>() == 45);
  for (const auto& [name, info] : m["files"].items()) {
    const auto bytes = read_file((kWork / "artifact" / name).string());
    CHECK(bytes.size() == info["bytes"].get<std::size_t>());
    CHECK(hash_hex(content_hash(bytes)) == info["fnv1a64"].get<std::string>());
  }

  cmd_build(fixture_config("again"));
  CHECK(read_file((kWork / "artifact/manifest.json").string()) == read_file((kWork / "again/manifest.json").string()));
  for (const auto& [name, _] : m["files"].items())
    CHECK(read_file((kWork / "artifact" / name).string()) == read_file((kWork / "again" / name).string()));

  // the loaded pieces agree with a direct recomputation
  CHECK(art.hierarchy().size() == 23);
  CHECK(art.graph().length() == 8);
  CHECK(art.index().size() == m["counts"]["indexed_records"].get<std::size_t>());
  CHECK(art.layout().nodes == art.store().get(5, 0).summary(SummaryType::union_graph).nodes());
  const auto direct = make_snapshot(art.graph(), art.hierarchy().at(3, 2));
  CHECK(art.store().get(3, 2).summaries.intersection == direct.summaries.intersection);
  CHECK(art.store().get(3, 2).metrics == direct.metrics);
}

TEST_CASE("build: failures leave nothing behind") {
  auto cfg = fixture_config("missing_out");
  cfg.input = (kWork / "no_such_file.tsv").string();
  CHECK_THROWS(cmd_build(cfg));
  CHECK_FALSE(fs::exists(kWork / "missing_out"));
  CHECK_FALSE(fs::exists(kWork / "missing_out.partial"));

  fs::create_directories(kWork);
  std::ofstream(kWork / "garbage.tsv") << "this is\nnot an edge list\n";
  cfg.input = (kWork / "garbage.tsv").string();
  cfg.schema = EdgeSchema{};
  CHECK_THROWS(cmd_build(cfg));
  CHECK_FALSE(fs::exists(kWork / "missing_out"));
}

TEST_CASE("artifact: corruption is detected on load") {
  fixture();
  cmd_build(fixture_config("corrupt"));
  const auto victim = kWork / "corrupt" / artifact_files::embeddings;
  auto bytes = read_file(victim.string());
  bytes[bytes.size() / 2] ^= 0x5a;
  write_file(victim.string(), bytes);
  CHECK_THROWS_AS(Artifact::load((kWork / "corrupt").string()), FormatError);
  CHECK_THROWS(Artifact::load((kWork / "nowhere").string()));
}

TEST_CASE("artifact helpers") {
  const auto h = build_hierarchy(2);
  CHECK(hierarchy_table(h) == "level\tindex\tstart\tend\tis_root\n1\t0\t0\t1\t0\n1\t1\t1\t2\t0\n2\t0\t0\t2\t0\n2\t1\t1\t2\t0\n3\t0\t0\t2\t1\n");
  const auto& art = fixture();
  const auto j = layout_to_json(art.layout(), art.graph().dictionary);
  const auto back = layout_from_json(j);
  CHECK(back.nodes == art.layout().nodes);
  CHECK(back.positions == art.layout().positions);
  CHECK_THROWS_AS(layout_from_json(json{{"algorithm", "spiral"}}), FormatError);
}

TEST_CASE("api: endpoints match schemas and golden files") {
  Api api(fixture());
  auto r = get(api, "/api/bootstrap");
  CHECK(r.status == 200);
  check_schema(r.body, "bootstrap.json");
  check_golden("bootstrap", r.body);

  r = get(api, "/api/hierarchy");
  check_schema(r.body, "hierarchy.json");
  check_golden("hierarchy", r.body);
  CHECK(r.body["interval_count"] == 23);

  r = get(api, "/api/layout");
  check_schema(r.body, "layout.json");
  check_golden("layout", r.body);

  for (auto [level, index, type, metaphor] :
       std::vector<std::tuple<int, int, const char*, const char*>>{{5, 0, "union", "node_link"},
                                                                   {2, 3, "union", "matrix"},
                                                                   {3, 1, "intersection", "animation"},
                                                                   {4, 1, "disjoint", "metrics_series"}}) {
    r = get(api, "/api/snapshot/" + std::to_string(level) + "/" + std::to_string(index),
            {{"type", type}, {"metaphor", metaphor}});
    CHECK(r.status == 200);
    check_schema(r.body, "snapshot.json");
    check_golden(std::string("snapshot_") + std::to_string(level) + "_" + std::to_string(index) + "_" + type + "_" +
                     metaphor,
                 r.body);
  }

  r = get(api, "/api/metrics/3/1", {{"type", "union"}});
  check_schema(r.body, "metrics.json");
  check_golden("metrics_3_1_union", r.body);

  r = post(api, "/api/knn", {{"ref", {{"level", 3}, {"index", 1}, {"type", "union"}}}, {"k", 5}});
  CHECK(r.status == 200);
  check_schema(r.body, "knn.json");
  check_golden("knn_ref_3_1_union", r.body);

  r = get(api, "/api/session");
  check_schema(r.body, "session.json");
  check_golden("session_new", r.body);

  r = post(api, "/api/filter", {{"session", "s1"}, {"nodes", {"a", "b", "c", "d"}}});
  check_schema(r.body, "filter.json");
  check_golden("filter_abcd", r.body);

  r = post(api, "/api/abstract",
           {{"state", {{"views", {{{"level", 5}, {"index", 0}}, {{"level", 4}, {"index", 0}}, {{"level", 4}, {"index", 1}}}}}}});
  check_schema(r.body, "abstract.json");
  check_golden("abstract_root", r.body);

  r = get(api, "/api/snapshot/9/0");
  CHECK(r.status == 404);
  check_schema(r.body, "error.json");
  check_golden("error_unknown_snapshot", r.body);
}

TEST_CASE("api: snapshot payloads equal summary oracles") {
  const auto& art = fixture();
  Api api(art);
  const auto& h = art.hierarchy();
  for (std::uint32_t k = 0; k < h.level(2).size(); ++k) {
    const auto& iv = h.at(2, k);
    std::vector<StaticGraph> window(art.graph().graphs.begin() + iv.start, art.graph().graphs.begin() + iv.end);
    const auto expect = oracle::oracle_union(window);
    const auto r = get(api, "/api/snapshot/2/" + std::to_string(k));
    REQUIRE(r.status == 200);
    CHECK(r.body["node_count"] == expect.node_count());
    CHECK(r.body["edge_count"] == expect.edge_count());
    CHECK(r.body["clustered"] == false);
    for (const auto& e : r.body["edges"]) {
      const Edge* ref = expect.find_edge(e["source"].get<NodeId>(), e["target"].get<NodeId>());
      REQUIRE(ref != nullptr);
      CHECK(e["weight"].get<double>() == ref->weight);
      CHECK(e["sign"] == std::string(to_string(ref->sign)));
    }
    for (const auto& n : r.body["nodes"]) {
      const auto p = *art.layout().position(n["id"].get<NodeId>());
      CHECK(n["x"].get<double>() == p.x);
      CHECK(n["name"] == art.graph().dictionary.name(n["id"].get<NodeId>()));
    }
    const auto m = get(api, "/api/metrics/2/" + std::to_string(k));
    const auto ref = oracle::brute_metrics(expect);
    CHECK(m.body["metrics"]["density"].get<double>() == doctest::Approx(ref.density));
    CHECK(m.body["metrics"]["transitivity"].get<double>() == doctest::Approx(ref.transitivity));
    CHECK(m.body["series"].size() == iv.length());
  }

  auto r = get(api, "/api/snapshot/2/0", {{"metaphor", "animation"}});
  REQUIRE(r.body["frames"].size() == 2);
  CHECK(r.body["frames"][1]["bucket"] == 1);
  CHECK(r.body["frames"][0]["edges"].size() == art.graph().graphs[0].edge_count());
  r = get(api, "/api/snapshot/5/0", {{"metaphor", "matrix"}});
  CHECK(r.body["order"].size() == r.body["node_count"]);
}

TEST_CASE("api: clustering returns a partition") {
  const auto& art = fixture();
  Api api(art);
  const auto r = get(api, "/api/snapshot/5/0", {{"cluster", "true"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["clustered"] == true);
  check_schema(r.body, "snapshot.json");
  std::set<NodeId> seen;
  std::size_t total = 0;
  for (const auto& c : r.body["nodes"]) {
    CHECK(c["size"] == c["members"].size());
    for (const auto& v : c["members"]) seen.insert(v.get<NodeId>());
    total += c["members"].size();
  }
  CHECK(total == r.body["node_count"].get<std::size_t>());
  CHECK(seen.size() == total);
  CHECK(r.body["nodes"].size() <= total);
  CHECK(r.body["modularity"].get<double>() >= 0.0);
}

TEST_CASE("api: session filters compose by intersection") {
  Api api(fixture());
  auto s = get(api, "/api/session").body["id"].get<std::string>();
  auto r = post(api, "/api/filter", {{"session", s}, {"nodes", {"a", "b", "c", "d", "e"}}});
  CHECK(r.body["filter"].size() == 5);
  r = post(api, "/api/filter", {{"session", s}, {"nodes", {"c", "d", "e", "f", "g"}}});
  CHECK(r.body["filter"].size() == 3);
  const auto composed = node_ids(get(api, "/api/snapshot/5/0", {{"session", s}}).body);

  auto t = post(api, "/api/filter", {{"nodes", {"c", "d", "e"}}}).body["id"].get<std::string>();
  const auto direct = node_ids(get(api, "/api/snapshot/5/0", {{"session", t}}).body);
  CHECK(composed == direct);
  for (NodeId v : composed) CHECK(std::set<std::string>{"c", "d", "e"}.count(fixture().graph().dictionary.name(v)));

  // filter(∅): empty payload, zero metrics
  r = post(api, "/api/filter", {{"session", s}, {"nodes", json::array()}});
  CHECK(r.body["filter"].empty());
  r = get(api, "/api/snapshot/5/0", {{"session", s}});
  CHECK(r.body["node_count"] == 0);
  CHECK(r.body["edges"].empty());
  CHECK(r.body["filtered"] == true);
  for (const auto& [k, v] : r.body["metrics"].items()) CHECK(v.get<double>() == 0.0);

  r = post(api, "/api/filter", {{"session", s}, {"reset", true}});
  CHECK(r.body["filter"].is_null());
  CHECK(get(api, "/api/snapshot/5/0", {{"session", s}}).body["filtered"] == false);

  r = post(api, "/api/filter", {{"session", s}, {"cluster", true}});
  CHECK(get(api, "/api/snapshot/4/0", {{"session", s}}).body["clustered"] == true);

  CHECK(post(api, "/api/filter", {{"session", s}, {"nodes", {"zz"}}}).status == 400);
  CHECK(post(api, "/api/filter", {{"session", "s999"}, {"nodes", {"a"}}}).status == 404);
}

TEST_CASE("api: knn") {
  const auto& art = fixture();
  Api api(art);
  auto r = post(api, "/api/knn", {{"ref", {{"level", 2}, {"index", 0}}}, {"k", 1}});
  REQUIRE(r.status == 200);
  REQUIRE(r.body["neighbors"].size() == 1);
  CHECK(r.body["neighbors"][0]["distance"] == 0.0);
  CHECK(r.body["neighbors"][0]["level"] == 2);
  CHECK(r.body["neighbors"][0]["index"] == 0);

  r = post(api, "/api/knn", {{"ref", {{"level", 3}, {"index", 0}}}, {"k", 5}, {"summary", "disjoint"}});
  CHECK(r.body["neighbors"].size() <= 5);
  for (const auto& n : r.body["neighbors"]) CHECK(n["type"] == "disjoint");

  // every level of the fixture is below the ANN threshold: compare with an exact scan
  const auto* probe = art.embeddings().find(3, 1, SummaryType::union_graph);
  REQUIRE(probe != nullptr);
  r = post(api, "/api/knn", {{"vector", probe->vector}, {"k", 6}, {"levels", {2, 3}}, {"time_range", {2, 6}}});
  std::vector<std::tuple<double, std::uint32_t, std::uint32_t, int>> scan;
  for (const auto& rec : art.embeddings().records) {
    if (is_sentinel(rec) || (rec.level != 2 && rec.level != 3)) continue;
    const auto& iv = art.hierarchy().at(rec.level, rec.index);
    if (!(iv.start < 6 && iv.end > 2)) continue;
    double s = 0;
    for (std::size_t i = 0; i < rec.vector.size(); ++i) s += double(rec.vector[i] - probe->vector[i]) * (rec.vector[i] - probe->vector[i]);
    scan.emplace_back(std::sqrt(s), rec.level, rec.index, static_cast<int>(rec.summary));
  }
  std::sort(scan.begin(), scan.end());
  REQUIRE(r.body["neighbors"].size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& n = r.body["neighbors"][i];
    CHECK(n["level"] == std::get<1>(scan[i]));
    CHECK(n["index"] == std::get<2>(scan[i]));
    CHECK(n["distance"].get<double>() == doctest::Approx(std::get<0>(scan[i])).epsilon(1e-5));
  }
  CHECK(r.body["levels_searched"] == json({2, 3}));

  CHECK(post(api, "/api/knn", {{"k", 3}}).status == 400);
  CHECK(post(api, "/api/knn", {{"vector", {1.0, 2.0}}}).status == 400);
  CHECK(post(api, "/api/knn", {{"ref", {{"level", 1}, {"index", 0}}}}).status == 404);
  CHECK(post(api, "/api/knn", {{"ref", {{"level", 2}, {"index", 0}}}, {"levels", json::array()}}).status == 400);
  CHECK(post(api, "/api/knn", {{"ref", {{"level", 2}, {"index", 0}}}, {"summary", "both"}}).status == 400);
  CHECK(post(api, "/api/knn", {{"ref", {{"level", 2}, {"index", 0}}}, {"time_range", {4, 4}}}).status == 400);
}

TEST_CASE("api: abstraction and view state") {
  Api api(fixture());
  auto r = post(api, "/api/abstract",
                {{"state",
                  {{"views", {{{"level", 5}, {"index", 0}}, {{"level", 4}, {"index", 0}}, {{"level", 4}, {"index", 1}}}},
                   {"color_metric", "edge_count"}}}});
  REQUIRE(r.status == 200);
  const auto& views = r.body["state"]["views"];
  CHECK(views[0]["abstracted"] == true);
  CHECK(views[1]["abstracted"] == false);
  CHECK(r.body["visible_levels"] == json({4}));
  // the colour scale spans the views' own metric values
  double lo = 1e300, hi = -1e300;
  for (const auto& v : views) {
    lo = std::min(lo, v["metric_value"].get<double>());
    hi = std::max(hi, v["metric_value"].get<double>());
  }
  for (const auto& v : views) CHECK(v["color"] == metric_color(v["metric_value"].get<double>(), lo, hi).hex());

  const auto s = get(api, "/api/session").body["id"].get<std::string>();
  r = post(api, "/api/abstract", {{"session", s}, {"state", {{"views", {{{"level", 5}, {"index", 0}}}}}}});
  CHECK(r.body["session"] == s);
  CHECK(get(api, "/api/session", {{"id", s}}).body["view_state"]["views"].size() == 1);

  CHECK(post(api, "/api/abstract", {{"state", {{"views", {{{"level", 9}, {"index", 0}}}}}}}).status == 400);
  CHECK(post(api, "/api/abstract", {{"state", {{"color_metric", "age"}}}}).status == 400);
  CHECK(post(api, "/api/abstract", json::object()).status == 400);

  const auto h = build_hierarchy(8);
  ViewState vs;
  vs.views = {{h.at(3, 1), Metaphor::matrix, true}};
  vs.per_level_budget = 2;
  CHECK(view_state_from_json(view_state_json(vs), h) == vs);
}

TEST_CASE("api: errors and routing") {
  Api api(fixture());
  CHECK(get(api, "/api/nothing").status == 404);
  CHECK(get(api, "/elsewhere").status == 404);
  CHECK(get(api, "/api/snapshot/2/x").status == 400);
  CHECK(get(api, "/api/snapshot/2/0", {{"type", "sum"}}).status == 400);
  CHECK(get(api, "/api/snapshot/2/0", {{"metaphor", "pie"}}).status == 400);
  CHECK(get(api, "/api/snapshot/2/0", {{"cluster", "maybe"}}).status == 400);
  CHECK(get(api, "/api/snapshot/2/0", {{"session", "s404"}}).status == 404);
  CHECK(get(api, "/api/metrics/2/99").status == 404);
  CHECK(api.handle({"POST", "/api/knn", {}, "{not json"}).status == 400);
  CHECK(api.handle({"POST", "/api/knn", {}, "[1,2]"}).status == 400);
  CHECK(api.handle({"DELETE", "/api/session", {}, ""}).status == 404);
  const auto r = get(api, "/api/snapshot/2/77");
  check_schema(r.body, "error.json");
}

TEST_CASE("api: sessions expire after their TTL") {
  auto now = std::chrono::steady_clock::time_point{};
  Api api(fixture(), std::chrono::seconds(60), [&] { return now; });
  const auto id = get(api, "/api/session").body["id"].get<std::string>();
  CHECK(api.session_count() == 1);
  now += std::chrono::seconds(50);
  CHECK(get(api, "/api/session", {{"id", id}}).status == 200);
  now += std::chrono::seconds(50);
  CHECK(api.session_count() == 1);
  now += std::chrono::seconds(61);
  CHECK(api.session_count() == 0);
  CHECK(get(api, "/api/session", {{"id", id}}).status == 404);
}

TEST_CASE("api: concurrent requests on independent sessions") {
  Api api(fixture());
  std::vector<std::thread> workers;
  std::atomic<int> failures{0};
  for (int w = 0; w < 8; ++w)
    workers.emplace_back([&, w] {
      const auto id = post(api, "/api/filter", {{"nodes", {w % 2 ? "a" : "b", "c", "d"}}}).body["id"].get<std::string>();
      for (int i = 0; i < 20; ++i) {
        const auto r = get(api, "/api/snapshot/3/" + std::to_string(i % 4), {{"session", id}});
        if (r.status != 200 || r.body["node_count"].get<std::size_t>() > 3) ++failures;
        if (post(api, "/api/knn", {{"ref", {{"level", 2}, {"index", i % 8}}}, {"k", 3}}).status != 200) ++failures;
      }
    });
  for (auto& t : workers) t.join();
  CHECK(failures == 0);
  CHECK(api.session_count() == 8);
}

TEST_CASE("http: serves the API with CORS headers") {
  Api api(fixture());
  HttpServer server(api, "http://localhost:5173");
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread runner([&] { server.run(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto res = client.Get("/api/bootstrap");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
  CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
  CHECK(json::parse(res->body)["api_version"] == kApiVersion);

  res = client.Get("/api/snapshot/2/1?type=intersection&metaphor=matrix");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["type"] == "intersection");

  res = client.Post("/api/knn", R"({"ref": {"level": 2, "index": 1}, "k": 2})", "application/json");
  REQUIRE(res);
  CHECK(json::parse(res->body)["neighbors"].size() == 2);

  res = client.Get("/api/snapshot/8/8");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  res = client.Options("/api/knn");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK(res->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

  server.stop();
  runner.join();
}
