#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "eflab/error.hpp"
#include "eflab/game.hpp"

namespace httplib {
class Server;
}

namespace eflab {

/// "cycle:n", "complete:n", "empty:n", "path:n", "star:leaves" or
/// "random:m:p[:seed]".
Graph parse_graph_spec(const std::string& spec);

/// Error carrying its HTTP status and a short machine-readable code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& detail)
      : Error(detail), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct ErrorResponse {
  int status;
  nlohmann::json body;  // {"error": code, "detail": text[, "reason": ...]}
};

/// Maps any exception to a status and JSON body: unknown session 404,
/// illegal move or wrong turn 409, malformed or unsatisfiable request 422.
ErrorResponse error_response(const std::exception& e);

struct StrategyInfo {
  std::string name;
  std::vector<std::string> kinds;
  std::vector<std::string> sides;
  std::string description;
};

const std::vector<StrategyInfo>& engine_strategies();
nlohmann::json strategies_json();

struct ServiceOptions {
  /// Budget for solver-optimal engines.
  SolverOptions solver;
  /// When set, every session is written here as <id>.json after each change
  /// and existing snapshots are loaded at startup.
  std::optional<std::filesystem::path> snapshot_dir;
};

class Session;

/// In-memory registry of live games. Thread-safe; operations on one session
/// are serialized, different sessions proceed independently.
class SessionManager {
 public:
  explicit SessionManager(ServiceOptions opt = {});
  ~SessionManager();

  /// Body: {"kind": "discrete" | "continuous-HS" | "continuous-OP" |
  /// "permutation", game config, "engine": {"side", "strategy", ...}}.
  /// Returns the session view.
  nlohmann::json create(const nlohmann::json& body);
  nlohmann::json get(const std::string& id) const;
  nlohmann::json submit_move(const std::string& id, const nlohmann::json& move);
  nlohmann::json engine_move(const std::string& id);
  /// Creation request plus the move log, in the form accepted by restore().
  nlohmann::json snapshot(const std::string& id) const;
  /// Game-engine transcript for discrete sessions; move list and payoff
  /// otherwise.
  nlohmann::json transcript(const std::string& id) const;
  /// Rebuilds the session by replaying its log through a fresh referee and
  /// compares the resulting view with the live one.
  bool replay_matches(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const std::string& id, const Session& s) const;
  std::string fresh_id();

  ServiceOptions opt_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

/// Registers the HTTP routes on `server`.
void mount_routes(httplib::Server& server, SessionManager& manager);

/// "host:port" from EF_LAB_ADDR, defaulting to 127.0.0.1:8080.
std::pair<std::string, int> service_address(const char* env_value);

}  // namespace eflab
