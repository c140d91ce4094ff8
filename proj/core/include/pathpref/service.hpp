#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "pathpref/scenario.hpp"
#include "pathpref/session.hpp"

namespace pathpref {

inline constexpr int kApiVersion = 1;
inline constexpr std::size_t kDefaultTopK = 10;

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

/// Session registry behind the HTTP API. Requests for different sessions
/// run concurrently; each session serialises its own mutations and rejects
/// feedback that cites an outdated version.
class SessionService {
 public:
  /// With a journal directory every session appends its creation request
  /// and accepted feedback to <dir>/<id>.jsonl.
  explicit SessionService(std::optional<std::filesystem::path> journal_dir = std::nullopt);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  ServiceResponse create(const nlohmann::json& body);
  ServiceResponse create(const std::string& raw_body);
  ServiceResponse get_query(const std::string& id) const;
  ServiceResponse post_feedback(const std::string& id, const nlohmann::json& body);
  ServiceResponse post_feedback(const std::string& id, const std::string& raw_body);
  ServiceResponse get_posterior(const std::string& id, std::size_t top_k = kDefaultTopK) const;
  ServiceResponse get_render(const std::string& id) const;

  std::size_t session_count() const;

  /// Rebuilds every journaled session by replaying its feedback. Returns the
  /// number of sessions restored.
  std::size_t restore();

 private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& id) const;
  std::shared_ptr<Entry> build(const nlohmann::json& body, const std::string& id) const;
  void journal(const std::string& id, const nlohmann::json& line) const;

  std::optional<std::filesystem::path> journal_dir_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::atomic<std::uint64_t> next_id_{1};
};

/// Blocking HTTP front end for a SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  /// Binds and serves until stop(). port 0 picks a free port.
  bool listen(const std::string& host, int port);
  /// Binds without serving; returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves on a socket bound by bind().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pathpref
