#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mss/abstraction.hpp"
#include "mss/artifact.hpp"

namespace mss {

inline constexpr int kApiVersion = 1;
/// Snapshots with more nodes are returned as community meta-graphs.
inline constexpr std::size_t kClusterThreshold = 100;

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Per-analyst state: node filter, clustering preference, and view state.
struct Session {
  std::string id;
  /// Sorted node ids; unset means no filter.
  std::optional<std::vector<NodeId>> filter;
  bool cluster = false;
  ViewState view;
};

/// JSON API over one loaded artifact. Thread-safe: the artifact is read-only,
/// sessions are locked individually.
class Api {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit Api(const Artifact& artifact, std::chrono::seconds session_ttl = std::chrono::minutes(30),
               Clock clock = std::chrono::steady_clock::now);

  /// Routes a request. Failures become {"error": {"status", "message"}}.
  ApiResponse handle(const ApiRequest& req);

  std::size_t session_count();

 private:
  struct SessionSlot {
    std::mutex mu;
    Session state;
    std::chrono::steady_clock::time_point last_used;
  };

  nlohmann::json bootstrap() const;
  nlohmann::json hierarchy() const;
  nlohmann::json snapshot(std::uint32_t level, std::uint32_t index, const ApiRequest& req);
  nlohmann::json metrics(std::uint32_t level, std::uint32_t index, const ApiRequest& req);
  nlohmann::json knn(const nlohmann::json& body) const;
  nlohmann::json filter(const nlohmann::json& body);
  nlohmann::json abstract(const nlohmann::json& body);
  nlohmann::json session(const ApiRequest& req);

  std::shared_ptr<SessionSlot> find_session(const std::string& id);
  std::shared_ptr<SessionSlot> create_session();
  void evict_expired();
  Session session_snapshot(const ApiRequest& req);

  const Artifact& artifact_;
  std::chrono::seconds ttl_;
  Clock clock_;
  std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
  std::uint64_t next_session_ = 1;
};

nlohmann::json metrics_json(const GraphMetrics& m);
nlohmann::json session_json(const Session& s);
nlohmann::json view_state_json(const ViewState& s);
/// Throws std::invalid_argument on malformed input or views outside `h`.
ViewState view_state_from_json(const nlohmann::json& j, const SnapshotHierarchy& h);

}  // namespace mss
