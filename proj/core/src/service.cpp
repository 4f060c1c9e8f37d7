#include "gencur/service.hpp"

#include <fstream>
#include <random>

#include "gencur/bench.hpp"
#include "gencur/errors.hpp"
#include "gencur/random.hpp"

namespace gencur {

ServiceError to_service_error(const std::exception& e) {
  if (const auto* s = dynamic_cast<const ServiceError*>(&e)) return *s;
  if (dynamic_cast<const DegenerateError*>(&e)) return {422, "degenerate_comparison", e.what()};
  if (dynamic_cast<const InfeasibleError*>(&e)) return {422, "infeasible", e.what()};
  if (dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return {400, "invalid_argument", e.what()};
  }
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return {400, "invalid_request", e.what()};
  return {500, "internal", e.what()};
}

SessionRequest SessionRequest::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ServiceError(400, "invalid_request", "request body must be a JSON object");
  SessionRequest r;
  try {
    r.problem = j.at("problem").get<std::string>();
    if (j.contains("kernel") && !j.at("kernel").is_null()) r.kernel = j.at("kernel");
    if (j.contains("sigma") && !j.at("sigma").is_null()) r.sigma = j.at("sigma").get<double>();
    r.m = j.value("m", r.m);
    r.seed = j.value("seed", r.seed);
    r.buffer_size = j.value("buffer_size", r.buffer_size);
    r.iterations = j.value("iterations", r.iterations);
    r.sigma2_dis = j.value("sigma2_dis", r.sigma2_dis);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(400, "invalid_request", e.what());
  }
  if (r.sigma && !(*r.sigma >= 0.0)) throw ServiceError(400, "invalid_argument", "sigma must be >= 0");
  if (r.m < 1) throw ServiceError(400, "invalid_argument", "m must be >= 1");
  return r;
}

nlohmann::json SessionRequest::to_json() const {
  nlohmann::json j{{"problem", problem},         {"m", m},
                   {"seed", seed},               {"buffer_size", buffer_size},
                   {"iterations", iterations},   {"sigma2_dis", sigma2_dis}};
  if (kernel) j["kernel"] = *kernel;
  if (sigma) j["sigma"] = *sigma;
  return j;
}

namespace {

Problem problem_for(const SessionRequest& r) {
  if (r.problem != "gauss1d" && r.problem != "ackley2d" && r.problem != "knapsack") {
    throw ServiceError(400, "unknown_problem", "unknown problem tag: " + r.problem);
  }
  Problem p = make_benchmark(r.problem, r.seed);
  if (r.sigma) p.sigma = *r.sigma;
  Kernel k = p.kernel;
  if (r.kernel) {
    nlohmann::json kj = *r.kernel;
    kj["sigma2"] = 1.0;
    k = kernel_from_json(kj);
  }
  p.kernel = k.with_amplitude(p.sigma * p.sigma);
  return p;
}

}  // namespace

Session::Session(std::string id, const SessionRequest& request)
    : id_(std::move(id)), request_(request), problem_(problem_for(request)) {
  params_.sigma = problem_.sigma;
  params_.m = request.m;
  params_.kernel = problem_.kernel;
  params_.validate();
  if (request.buffer_size < static_cast<std::size_t>(request.m) || request.iterations < request.buffer_size) {
    throw ServiceError(400, "invalid_argument", "need iterations >= buffer_size >= m");
  }
  if (!(request.sigma2_dis >= 0.0)) throw ServiceError(400, "invalid_argument", "sigma2_dis must be >= 0");
  posterior_ = make_prior(problem_.space, problem_.kernel);
  events_.push_back({{"type", "create"}, {"request", request_.to_json()}});
  serve_batch();
}

void Session::serve_batch() {
  std::vector<double> adjusted = problem_.y_values;
  for (std::size_t i = 0; i < adjusted.size(); ++i) adjusted[i] += posterior_.mean(static_cast<Eigen::Index>(i));
  DisGcConfig cfg;
  cfg.buffer_size = request_.buffer_size;
  cfg.iterations = request_.iterations;
  cfg.sigma2_dis = request_.sigma2_dis;
  cfg.seed = derive_seed(request_.seed, batches_.size());
  batches_.push_back(run_dis_gc(problem_.space, adjusted, params_, cfg).indices);
}

std::size_t Session::candidate_count() const {
  std::size_t n = 0;
  for (const auto& b : batches_) n += b.size();
  return n;
}

std::size_t Session::space_index(std::size_t candidate) const {
  std::size_t c = candidate;
  for (const auto& b : batches_) {
    if (c < b.size()) return b[c];
    c -= b.size();
  }
  throw ServiceError(400, "unknown_candidate", "candidate " + std::to_string(candidate) + " was never served");
}

nlohmann::json Session::candidate_json(std::size_t candidate) const {
  const std::size_t idx = space_index(candidate);
  const auto post = predict(posterior_, idx);
  return {{"candidate", candidate},
          {"index", idx},
          {"action", to_json(problem_.space.point(idx))},
          {"y", problem_.y_values[idx]},
          {"mean", post.mean},
          {"variance", post.variance}};
}

nlohmann::json Session::batch_json(std::size_t b) const {
  std::size_t first = 0;
  for (std::size_t k = 0; k < b; ++k) first += batches_[k].size();
  std::vector<ActionPoint> actions;
  std::vector<double> y;
  nlohmann::json cands = nlohmann::json::array();
  for (std::size_t p = 0; p < batches_[b].size(); ++p) {
    cands.push_back(candidate_json(first + p));
    actions.push_back(problem_.space.point(batches_[b][p]));
    y.push_back(problem_.y_values[batches_[b][p]]);
  }
  nlohmann::json ranking = nlohmann::json::array();
  for (auto r : rank_candidates(posterior_, actions, y)) ranking.push_back(first + r);
  return {{"batch", b}, {"candidates", std::move(cands)}, {"ranking", std::move(ranking)}};
}

nlohmann::json Session::describe() const {
  return {{"id", id_},
          {"status", closed_ ? "closed" : "active"},
          {"request", request_.to_json()},
          {"kernel", to_json(problem_.kernel)},
          {"space_size", problem_.space.size()},
          {"batches", batches_.size()},
          {"candidates", candidate_count()},
          {"preferences", posterior_.history.size()}};
}

nlohmann::json Session::latest_candidates() const {
  nlohmann::json j = batch_json(batches_.size() - 1);
  j["id"] = id_;
  return j;
}

nlohmann::json Session::submit_preference(std::size_t winner, std::size_t loser) {
  if (closed_) throw ServiceError(409, "session_closed", "session is closed");
  if (winner == loser) throw ServiceError(400, "invalid_argument", "winner and loser must differ");
  const std::size_t w = space_index(winner);
  const std::size_t l = space_index(loser);
  if (w == l) throw DegenerateError("winner and loser are the same action");
  apply(posterior_, {problem_.space.point(w), problem_.space.point(l)});
  events_.push_back({{"type", "preference"}, {"winner", winner}, {"loser", loser}});
  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t c = 0; c < candidate_count(); ++c) {
    const auto post = predict(posterior_, space_index(c));
    summary.push_back({{"candidate", c}, {"mean", post.mean}, {"variance", post.variance}});
  }
  return {{"id", id_}, {"preferences", posterior_.history.size()}, {"summary", std::move(summary)}};
}

nlohmann::json Session::next_batch() {
  if (closed_) throw ServiceError(409, "session_closed", "session is closed");
  serve_batch();
  events_.push_back({{"type", "next_batch"}});
  return latest_candidates();
}

nlohmann::json Session::posterior_json(bool include_cov) const {
  nlohmann::json j = snapshot(posterior_, include_cov);
  j["id"] = id_;
  return j;
}

void Session::close() {
  if (closed_) throw ServiceError(409, "session_closed", "session is already closed");
  closed_ = true;
  events_.push_back({{"type", "close"}});
}

std::unique_ptr<Session> Session::replay(std::string id, const nlohmann::json& events) {
  if (!events.is_array() || events.empty() || events.front().value("type", "") != "create") {
    throw ServiceError(400, "invalid_request", "event log must start with a create event");
  }
  auto s = std::make_unique<Session>(std::move(id), SessionRequest::from_json(events.front().at("request")));
  for (std::size_t k = 1; k < events.size(); ++k) {
    const auto& e = events[k];
    const auto type = e.at("type").get<std::string>();
    if (type == "preference") {
      s->submit_preference(e.at("winner").get<std::size_t>(), e.at("loser").get<std::size_t>());
    } else if (type == "next_batch") {
      s->next_batch();
    } else if (type == "close") {
      s->close();
    } else {
      throw ServiceError(400, "invalid_request", "unknown event type: " + type);
    }
  }
  return s;
}

std::string random_session_id() {
  std::random_device rd;
  std::uint64_t hi = (std::uint64_t{rd()} << 32) ^ rd();
  std::uint64_t lo = (std::uint64_t{rd()} << 32) ^ rd();
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

SessionManager::SessionManager(std::optional<std::filesystem::path> snapshot_dir) : dir_(std::move(snapshot_dir)) {
  if (!dir_) return;
  std::filesystem::create_directories(*dir_);
  for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    const auto j = nlohmann::json::parse(in);
    auto id = j.at("id").get<std::string>();
    sessions_[id] = Session::replay(id, j.at("events"));
  }
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "not_found", "unknown session: " + id);
  return it->second;
}

void SessionManager::persist(const Session& s) const {
  if (!dir_) return;
  const nlohmann::json j{{"id", s.id()}, {"events", s.events()}, {"posterior", s.posterior_json(false)}};
  const auto path = *dir_ / (s.id() + ".json");
  const auto tmp = *dir_ / (s.id() + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump() << '\n';
    if (!out) throw Error("cannot write session snapshot " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json SessionManager::create_session(const nlohmann::json& request) {
  const auto req = SessionRequest::from_json(request);
  std::string id = random_session_id();
  auto s = std::make_shared<Session>(id, req);
  persist(*s);
  nlohmann::json out = s->latest_candidates();
  out["status"] = "active";
  {
    std::unique_lock lock(mutex_);
    sessions_[id] = std::move(s);
  }
  return out;
}

nlohmann::json SessionManager::get(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  return s->describe();
}

nlohmann::json SessionManager::candidates(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  return s->latest_candidates();
}

nlohmann::json SessionManager::submit_preference(const std::string& id, const nlohmann::json& body) {
  auto s = find(id);
  std::size_t winner = 0;
  std::size_t loser = 0;
  try {
    winner = body.at("winner").get<std::size_t>();
    loser = body.at("loser").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(400, "invalid_request", e.what());
  }
  std::lock_guard lock(s->mutex());
  auto out = s->submit_preference(winner, loser);
  persist(*s);
  return out;
}

nlohmann::json SessionManager::next_batch(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  auto out = s->next_batch();
  persist(*s);
  return out;
}

nlohmann::json SessionManager::posterior(const std::string& id, bool include_cov) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  return s->posterior_json(include_cov);
}

nlohmann::json SessionManager::close(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  s->close();
  persist(*s);
  return s->describe();
}

nlohmann::json SessionManager::events(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex());
  return {{"id", id}, {"events", s->events()}};
}

std::vector<std::string> SessionManager::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

}  // namespace gencur
