#include "mss/api.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "mss/community.hpp"
#include "mss/errors.hpp"

namespace mss {
namespace {

using nlohmann::json;

struct ApiError : std::runtime_error {
  ApiError(int s, const std::string& m) : std::runtime_error(m), status(s) {}
  int status;
};

constexpr const char* kMetricFields[] = {"node_count",     "edge_count",   "density",
                                         "avg_clustering", "transitivity", "components"};

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto pos = path.find('/', start);
    const auto end = pos == std::string::npos ? path.size() : pos;
    if (end > start) out.push_back(path.substr(start, end - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint32_t parse_u32(const std::string& s, const char* what) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ApiError(400, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

bool parse_flag(const std::map<std::string, std::string>& q, const char* key) {
  auto it = q.find(key);
  if (it == q.end()) return false;
  const auto& v = it->second;
  if (v == "1" || v == "true" || v.empty()) return true;
  if (v == "0" || v == "false") return false;
  throw ApiError(400, std::string("invalid boolean for '") + key + "'");
}

SummaryType summary_param(const std::map<std::string, std::string>& q) {
  auto it = q.find("type");
  if (it == q.end()) return SummaryType::union_graph;
  const auto t = parse_summary_type(it->second);
  if (!t) throw ApiError(400, "unknown summary type '" + it->second + "'");
  return *t;
}

json interval_json(const Interval& iv) {
  return {{"level", iv.level}, {"index", iv.index}, {"start", iv.start}, {"end", iv.end}, {"is_root", iv.is_root}};
}

json edges_json(const StaticGraph& g) {
  json out = json::array();
  for (const Edge& e : g.edges())
    out.push_back({{"source", e.u}, {"target", e.v}, {"weight", e.weight}, {"sign", std::string(to_string(e.sign))}});
  return out;
}

StaticGraph apply_filter(const StaticGraph& g, const std::optional<std::vector<NodeId>>& filter) {
  if (!filter) return g;
  return g.induced([&](NodeId n) { return std::binary_search(filter->begin(), filter->end(), n); });
}

const json& require(const json& body, const char* key) {
  if (!body.contains(key)) throw ApiError(400, std::string("missing field '") + key + "'");
  return body[key];
}

}  // namespace

json metrics_json(const GraphMetrics& m) {
  return {{"node_count", m.node_count},         {"edge_count", m.edge_count},
          {"density", m.density},               {"avg_clustering", m.avg_clustering},
          {"transitivity", m.transitivity},     {"components", m.components}};
}

json view_state_json(const ViewState& s) {
  json views = json::array();
  for (const auto& v : s.views)
    views.push_back({{"level", v.interval.level},
                     {"index", v.interval.index},
                     {"start", v.interval.start},
                     {"end", v.interval.end},
                     {"metaphor", std::string(to_string(v.metaphor))},
                     {"abstracted", v.abstracted}});
  return {{"views", views},
          {"max_levels", s.max_levels},
          {"per_level_budget", s.per_level_budget},
          {"color_metric", s.color_metric}};
}

ViewState view_state_from_json(const json& j, const SnapshotHierarchy& h) {
  if (!j.is_object()) throw std::invalid_argument("view state must be an object");
  ViewState s;
  try {
    s.max_levels = j.value("max_levels", s.max_levels);
    s.per_level_budget = j.value("per_level_budget", s.per_level_budget);
    s.color_metric = j.value("color_metric", s.color_metric);
    if (!GraphMetrics{}.field(s.color_metric))
      throw std::invalid_argument("unknown color metric '" + s.color_metric + "'");
    for (const auto& v : j.value("views", json::array())) {
      const auto level = v.at("level").get<std::uint32_t>();
      const auto index = v.at("index").get<std::uint32_t>();
      if (!h.contains(level, index))
        throw std::invalid_argument("view (" + std::to_string(level) + ", " + std::to_string(index) +
                                    ") is not in the hierarchy");
      SnapshotView view;
      view.interval = h.at(level, index);
      const auto m = parse_metaphor(v.value("metaphor", "node_link"));
      if (!m) throw std::invalid_argument("unknown metaphor '" + v.value("metaphor", "") + "'");
      view.metaphor = *m;
      view.abstracted = v.value("abstracted", false);
      s.views.push_back(view);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed view state: ") + e.what());
  }
  return s;
}

json session_json(const Session& s) {
  return {{"id", s.id},
          {"filter", s.filter ? json(*s.filter) : json(nullptr)},
          {"cluster", s.cluster},
          {"view_state", view_state_json(s.view)}};
}

Api::Api(const Artifact& artifact, std::chrono::seconds session_ttl, Clock clock)
    : artifact_(artifact), ttl_(session_ttl), clock_(std::move(clock)) {}

ApiResponse Api::handle(const ApiRequest& req) {
  try {
    const auto parts = split_path(req.path);
    if (parts.size() < 2 || parts[0] != "api") throw ApiError(404, "no such endpoint '" + req.path + "'");
    json body;
    if (req.method == "POST") {
      try {
        body = req.body.empty() ? json::object() : json::parse(req.body);
      } catch (const json::parse_error&) {
        throw ApiError(400, "request body is not valid JSON");
      }
      if (!body.is_object()) throw ApiError(400, "request body must be a JSON object");
    }
    const std::string& ep = parts[1];
    const bool get = req.method == "GET", post = req.method == "POST";
    if (get && parts.size() == 2 && ep == "bootstrap") return {200, bootstrap()};
    if (get && parts.size() == 2 && ep == "hierarchy") return {200, hierarchy()};
    if (get && parts.size() == 2 && ep == "layout") return {200, layout_to_json(artifact_.layout(), artifact_.graph().dictionary)};
    if (get && parts.size() == 2 && ep == "session") return {200, session(req)};
    if (get && parts.size() == 4 && ep == "snapshot")
      return {200, snapshot(parse_u32(parts[2], "level"), parse_u32(parts[3], "index"), req)};
    if (get && parts.size() == 4 && ep == "metrics")
      return {200, metrics(parse_u32(parts[2], "level"), parse_u32(parts[3], "index"), req)};
    if (post && parts.size() == 2 && ep == "knn") return {200, knn(body)};
    if (post && parts.size() == 2 && ep == "filter") return {200, filter(body)};
    if (post && parts.size() == 2 && ep == "abstract") return {200, abstract(body)};
    if (post && parts.size() == 2 && ep == "session") return {200, session(req)};
    throw ApiError(404, "no such endpoint '" + req.method + " " + req.path + "'");
  } catch (const ApiError& e) {
    return {e.status, {{"error", {{"status", e.status}, {"message", e.what()}}}}};
  } catch (const NotFoundError& e) {
    return {404, {{"error", {{"status", 404}, {"message", e.what()}}}}};
  } catch (const std::invalid_argument& e) {
    return {400, {{"error", {{"status", 400}, {"message", e.what()}}}}};
  } catch (const json::exception& e) {
    return {400, {{"error", {{"status", 400}, {"message", e.what()}}}}};
  } catch (const std::exception& e) {
    return {500, {{"error", {{"status", 500}, {"message", e.what()}}}}};
  }
}

json Api::bootstrap() const {
  const auto& h = artifact_.hierarchy();
  json types = json::array(), metaphors = json::array(), fields = json::array();
  for (auto t : kSummaryTypes) types.push_back(std::string(to_string(t)));
  for (auto m : {Metaphor::node_link, Metaphor::matrix, Metaphor::metrics_series, Metaphor::animation})
    metaphors.push_back(std::string(to_string(m)));
  for (const char* f : kMetricFields) fields.push_back(f);
  const ViewState defaults;
  return {{"api_version", kApiVersion},
          {"length", h.length()},
          {"level_count", h.level_count()},
          {"node_count", artifact_.graph().dictionary.size()},
          {"summary_types", types},
          {"metaphors", metaphors},
          {"metrics", fields},
          {"max_levels", defaults.max_levels},
          {"per_level_budget", defaults.per_level_budget},
          {"cluster_threshold", kClusterThreshold},
          {"color_scale", {{"low", kLowColor.hex()}, {"high", kHighColor.hex()}}},
          {"embedding",
           {{"method", std::string(to_string(artifact_.embeddings().method))}, {"dim", artifact_.embeddings().dim}}},
          {"default_view",
           {{"level", h.root().level}, {"index", h.root().index}, {"type", "union"}, {"metaphor", "node_link"}}}};
}

json Api::hierarchy() const {
  const auto& h = artifact_.hierarchy();
  const auto& dg = artifact_.graph();
  json levels = json::array();
  for (std::uint32_t l = 1; l <= h.level_count(); ++l) {
    json ivs = json::array();
    for (const Interval& iv : h.level(l))
      ivs.push_back({{"index", iv.index},
                     {"start", iv.start},
                     {"end", iv.end},
                     {"is_root", iv.is_root},
                     {"embedded", iv.level >= 2}});
    const bool root_level = h.level(l).front().is_root;
    levels.push_back({{"level", l}, {"width", root_level ? h.length() : level_width(l)}, {"intervals", ivs}});
  }
  return {{"length", h.length()},
          {"origin", dg.origin},
          {"bucket_width", dg.bucket_width},
          {"level_count", h.level_count()},
          {"interval_count", h.size()},
          {"levels", levels}};
}

Session Api::session_snapshot(const ApiRequest& req) {
  auto it = req.query.find("session");
  if (it == req.query.end() || it->second.empty()) return {};
  auto slot = find_session(it->second);
  std::lock_guard lock(slot->mu);
  return slot->state;
}

json Api::snapshot(std::uint32_t level, std::uint32_t index, const ApiRequest& req) {
  const auto type = summary_param(req.query);
  Metaphor metaphor = Metaphor::node_link;
  if (auto it = req.query.find("metaphor"); it != req.query.end()) {
    const auto m = parse_metaphor(it->second);
    if (!m) throw ApiError(400, "unknown metaphor '" + it->second + "'");
    metaphor = *m;
  }
  const Session sess = session_snapshot(req);
  const bool want_cluster = parse_flag(req.query, "cluster") || sess.cluster;

  const Snapshot& snap = artifact_.store().get(level, index);
  const StaticGraph g = apply_filter(snap.summary(type), sess.filter);
  const auto& dict = artifact_.graph().dictionary;
  const auto& layout = artifact_.layout();
  auto pos = [&](NodeId n) { return layout.position(n).value_or(Point{}); };

  json out = interval_json(snap.interval);
  out["type"] = std::string(to_string(type));
  out["threshold"] = snap.threshold;
  out["metaphor"] = std::string(to_string(metaphor));
  out["filtered"] = sess.filter.has_value();
  out["node_count"] = g.node_count();
  out["edge_count"] = g.edge_count();
  out["metrics"] = metrics_json(sess.filter ? graph_metrics(g) : snap.metrics_of(type));

  const bool clustered = want_cluster || g.node_count() > kClusterThreshold;
  out["clustered"] = clustered;
  if (clustered) {
    const CommunityPartition p = cluster_communities(g);
    json nodes = json::array();
    for (std::size_t c = 0; c < p.members.size(); ++c) {
      Point centroid;
      for (NodeId n : p.members[c]) {
        const Point q = pos(n);
        centroid.x += q.x;
        centroid.y += q.y;
      }
      const double size = static_cast<double>(p.members[c].size());
      nodes.push_back({{"id", c},
                       {"size", p.members[c].size()},
                       {"members", p.members[c]},
                       {"x", centroid.x / size},
                       {"y", centroid.y / size}});
    }
    out["nodes"] = nodes;
    out["edges"] = edges_json(p.meta_graph);
    out["modularity"] = p.modularity;
  } else {
    json nodes = json::array();
    for (NodeId n : g.nodes()) {
      const Point q = pos(n);
      nodes.push_back({{"id", n}, {"name", dict.name(n)}, {"x", q.x}, {"y", q.y}});
    }
    out["nodes"] = nodes;
    out["edges"] = edges_json(g);
  }

  const auto& dg = artifact_.graph();
  if (metaphor == Metaphor::matrix && !clustered) {
    const Csr adj = make_csr(g);
    std::vector<std::size_t> order(g.node_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return adj.degree(a) > adj.degree(b); });
    json ids = json::array();
    for (auto i : order) ids.push_back(g.nodes()[i]);
    out["order"] = ids;
  } else if (metaphor == Metaphor::animation) {
    json frames = json::array();
    for (std::uint32_t t = snap.interval.start; t < snap.interval.end; ++t) {
      const StaticGraph fg = apply_filter(dg.graphs[t], sess.filter);
      frames.push_back({{"bucket", t}, {"nodes", fg.nodes()}, {"edges", edges_json(fg)}});
    }
    out["frames"] = frames;
  } else if (metaphor == Metaphor::metrics_series) {
    json series = json::array();
    for (std::uint32_t t = snap.interval.start; t < snap.interval.end; ++t)
      series.push_back({{"bucket", t}, {"metrics", metrics_json(graph_metrics(apply_filter(dg.graphs[t], sess.filter)))}});
    out["series"] = series;
  }
  return out;
}

json Api::metrics(std::uint32_t level, std::uint32_t index, const ApiRequest& req) {
  const auto type = summary_param(req.query);
  const Session sess = session_snapshot(req);
  const Snapshot& snap = artifact_.store().get(level, index);
  const auto& dg = artifact_.graph();
  json out = interval_json(snap.interval);
  out["type"] = std::string(to_string(type));
  out["metrics"] =
      metrics_json(sess.filter ? graph_metrics(apply_filter(snap.summary(type), sess.filter)) : snap.metrics_of(type));
  json series = json::array();
  for (std::uint32_t t = snap.interval.start; t < snap.interval.end; ++t)
    series.push_back({{"bucket", t}, {"metrics", metrics_json(graph_metrics(apply_filter(dg.graphs[t], sess.filter)))}});
  out["series"] = series;
  return out;
}

json Api::knn(const json& body) const {
  const auto& index = artifact_.index();
  KnnQuery q;
  q.k = body.value("k", std::size_t{5});
  if (body.contains("levels") && !body["levels"].is_null())
    q.levels = body["levels"].get<std::set<std::uint32_t>>();
  if (body.contains("summary") && !body["summary"].is_null()) {
    const auto name = body["summary"].get<std::string>();
    q.summary = parse_summary_type(name);
    if (!q.summary) throw ApiError(400, "unknown summary type '" + name + "'");
  }
  if (body.contains("time_range") && !body["time_range"].is_null()) {
    const auto r = body["time_range"].get<std::vector<std::uint32_t>>();
    if (r.size() != 2 || r[0] >= r[1]) throw ApiError(400, "time_range must be [start, end) with start < end");
    q.time_range = std::pair{r[0], r[1]};
  }

  json query;
  Embedding vec;
  if (body.contains("vector")) {
    vec = body["vector"].get<Embedding>();
    query = {{"kind", "vector"}};
  } else if (body.contains("ref")) {
    const json& ref = body["ref"];
    const auto level = require(ref, "level").get<std::uint32_t>();
    const auto idx = require(ref, "index").get<std::uint32_t>();
    const auto tname = ref.value("type", std::string("union"));
    const auto type = parse_summary_type(tname);
    if (!type) throw ApiError(400, "unknown summary type '" + tname + "'");
    const EmbeddingRecord* rec = artifact_.embeddings().find(level, idx, *type);
    if (!rec || is_sentinel(*rec))
      throw ApiError(404, "snapshot (" + std::to_string(level) + ", " + std::to_string(idx) + ", " + tname +
                              ") has no indexed embedding");
    vec = rec->vector;
    query = {{"kind", "ref"}, {"level", level}, {"index", idx}, {"type", tname}};
  } else {
    throw ApiError(400, "knn needs either 'vector' or 'ref'");
  }

  const KnnResult r = index.knn(vec, q);
  json neighbors = json::array();
  for (const auto& n : r.neighbors)
    neighbors.push_back({{"level", n.key.level},
                         {"index", n.key.index},
                         {"type", std::string(to_string(n.key.summary))},
                         {"start", n.key.start},
                         {"end", n.key.end},
                         {"distance", n.distance}});
  return {{"query", query},
          {"k", r.k},
          {"levels_searched", r.levels_searched},
          {"summary", r.summary ? json(std::string(to_string(*r.summary))) : json(nullptr)},
          {"time_range", r.time_range ? json({r.time_range->first, r.time_range->second}) : json(nullptr)},
          {"neighbors", neighbors}};
}

json Api::filter(const json& body) {
  const auto& dict = artifact_.graph().dictionary;
  std::shared_ptr<SessionSlot> slot =
      body.contains("session") ? find_session(body["session"].get<std::string>()) : create_session();
  std::lock_guard lock(slot->mu);
  if (body.value("reset", false)) {
    slot->state.filter.reset();
  }
  if (body.contains("nodes")) {
    std::vector<NodeId> ids;
    for (const auto& n : body["nodes"]) {
      if (n.is_number_unsigned()) {
        const auto id = n.get<NodeId>();
        if (id >= dict.size()) throw ApiError(400, "unknown node id " + std::to_string(id));
        ids.push_back(id);
      } else if (n.is_string()) {
        const auto id = dict.find(n.get<std::string>());
        if (!id) throw ApiError(400, "unknown node '" + n.get<std::string>() + "'");
        ids.push_back(*id);
      } else {
        throw ApiError(400, "filter nodes must be ids or names");
      }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (slot->state.filter) {
      std::vector<NodeId> both;
      std::set_intersection(slot->state.filter->begin(), slot->state.filter->end(), ids.begin(), ids.end(),
                            std::back_inserter(both));
      ids = std::move(both);
    }
    slot->state.filter = std::move(ids);
  }
  if (body.contains("cluster")) slot->state.cluster = body["cluster"].get<bool>();
  return session_json(slot->state);
}

json Api::abstract(const json& body) {
  const auto& h = artifact_.hierarchy();
  std::shared_ptr<SessionSlot> slot;
  if (body.contains("session")) slot = find_session(body["session"].get<std::string>());
  ViewState input;
  if (body.contains("state")) {
    input = view_state_from_json(body["state"], h);
  } else if (slot) {
    std::lock_guard lock(slot->mu);
    input = slot->state.view;
  } else {
    throw ApiError(400, "abstract needs a 'state' or a 'session'");
  }
  const ViewState out = auto_abstract(input, h);

  std::vector<double> values;
  for (const auto& v : out.views)
    values.push_back(*artifact_.store().get(v.interval.level, v.interval.index).metrics_of(SummaryType::union_graph)
                          .field(out.color_metric));
  double lo = 0.0, hi = 0.0;
  if (!values.empty()) {
    lo = *std::min_element(values.begin(), values.end());
    hi = *std::max_element(values.begin(), values.end());
  }
  json state = view_state_json(out);
  for (std::size_t i = 0; i < out.views.size(); ++i) {
    state["views"][i]["metric_value"] = values[i];
    state["views"][i]["color"] = metric_color(values[i], lo, hi).hex();
  }
  if (slot) {
    std::lock_guard lock(slot->mu);
    slot->state.view = out;
  }
  return {{"session", slot ? json(slot->state.id) : json(nullptr)},
          {"state", state},
          {"visible_levels", out.visible_levels()}};
}

json Api::session(const ApiRequest& req) {
  auto it = req.query.find("id");
  auto slot = it == req.query.end() || it->second.empty() ? create_session() : find_session(it->second);
  std::lock_guard lock(slot->mu);
  return session_json(slot->state);
}

std::shared_ptr<Api::SessionSlot> Api::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mu_);
  evict_expired();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(404, "unknown or expired session '" + id + "'");
  it->second->last_used = clock_();
  return it->second;
}

std::shared_ptr<Api::SessionSlot> Api::create_session() {
  std::lock_guard lock(sessions_mu_);
  evict_expired();
  auto slot = std::make_shared<SessionSlot>();
  slot->state.id = "s" + std::to_string(next_session_++);
  slot->last_used = clock_();
  sessions_.emplace(slot->state.id, slot);
  return slot;
}

void Api::evict_expired() {
  const auto now = clock_();
  std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_used > ttl_; });
}

std::size_t Api::session_count() {
  std::lock_guard lock(sessions_mu_);
  evict_expired();
  return sessions_.size();
}

}  // namespace mss
