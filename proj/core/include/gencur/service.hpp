#pragma once

// Interactive curation sessions: candidate batches from DIS-GC, pairwise
// preferences folded into the posterior, and posterior-adjusted follow-up
// batches scored on Y + posterior mean. Every session is reconstructible
// from its event log.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gencur/dis_gc.hpp"
#include "gencur/preference.hpp"
#include "gencur/problem.hpp"
#include "json.hpp"

namespace gencur {

/// Error carried to clients as {code, message} with an HTTP status.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  nlohmann::json to_json() const { return {{"code", code_}, {"message", what()}}; }

 private:
  int status_;
  std::string code_;
};

/// Maps library exceptions onto service errors.
ServiceError to_service_error(const std::exception& e);

struct SessionRequest {
  std::string problem;               // gauss1d | ackley2d | knapsack
  std::optional<nlohmann::json> kernel;  // {variant, h, kappa}; amplitude is sigma^2
  std::optional<double> sigma;       // default: the problem's
  int m = 5;
  std::uint64_t seed = 0;
  std::size_t buffer_size = 50;
  std::size_t iterations = 1000;
  double sigma2_dis = 2e-2;

  static SessionRequest from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

class Session {
 public:
  Session(std::string id, const SessionRequest& request);

  const std::string& id() const { return id_; }
  bool closed() const { return closed_; }
  const PosteriorState& posterior() const { return posterior_; }
  const std::vector<std::vector<std::size_t>>& batches() const { return batches_; }
  const nlohmann::json& events() const { return events_; }
  const Problem& problem() const { return problem_; }

  /// Summary of one served candidate (global candidate number).
  nlohmann::json candidate_json(std::size_t candidate) const;
  std::size_t candidate_count() const;

  nlohmann::json describe() const;
  nlohmann::json latest_candidates() const;
  nlohmann::json submit_preference(std::size_t winner, std::size_t loser);
  nlohmann::json next_batch();
  nlohmann::json posterior_json(bool include_cov) const;
  void close();

  /// Reconstructs a session from an event log.
  static std::unique_ptr<Session> replay(std::string id, const nlohmann::json& events);

  std::mutex& mutex() const { return mutex_; }

 private:
  void serve_batch();
  nlohmann::json batch_json(std::size_t b) const;
  std::size_t space_index(std::size_t candidate) const;

  std::string id_;
  SessionRequest request_;
  Problem problem_;
  CurationObjectiveParams params_;
  PosteriorState posterior_;
  std::vector<std::vector<std::size_t>> batches_;
  nlohmann::json events_ = nlohmann::json::array();
  bool closed_ = false;
  mutable std::mutex mutex_;
};

class SessionManager {
 public:
  /// With a snapshot directory every mutation rewrites <dir>/<id>.json and
  /// existing snapshots are loaded on construction.
  explicit SessionManager(std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

  nlohmann::json create_session(const nlohmann::json& request);
  nlohmann::json get(const std::string& id) const;
  nlohmann::json candidates(const std::string& id) const;
  nlohmann::json submit_preference(const std::string& id, const nlohmann::json& body);
  nlohmann::json next_batch(const std::string& id);
  nlohmann::json posterior(const std::string& id, bool include_cov = false) const;
  nlohmann::json close(const std::string& id);
  nlohmann::json events(const std::string& id) const;

  std::vector<std::string> ids() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const Session& s) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// 32 lowercase hex digits from the system entropy source.
std::string random_session_id();

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> static_dir;
  unsigned threads = 4;
};

/// JSON API over HTTP. bind() then run() (blocking); stop() may be called
/// from any thread.
class HttpServer {
 public:
  HttpServer(SessionManager& manager, HttpOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind();
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and blocks serving the JSON API until the process is stopped.
void serve_http(SessionManager& manager, const HttpOptions& options);

}  // namespace gencur
