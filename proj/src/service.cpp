#include "fspace/service.hpp"

#include <httplib.h>

#include <fstream>
#include <random>

#include "fspace/error.hpp"
#include "fspace/ops.hpp"

namespace fspace::service {

namespace {

std::string random_prefix() {
  std::random_device rd;
  std::uniform_int_distribution<unsigned> hex(0, 15);
  std::string out;
  for (int i = 0; i < 8; ++i) out += "0123456789abcdef"[hex(rd)];
  return out;
}

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& detail) {
  send(res, http_status(code), Json{{"error", errc_name(code)}, {"detail", detail}});
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(Errc::invalid_argument, "request body is not JSON");
  }
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, Errc::invalid_argument, e.what());
    } catch (const std::exception& e) {
      send(res, 500, Json{{"error", "internal"}, {"detail", e.what()}});
    }
  };
}

}  // namespace

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::not_found: return 404;
    case Errc::wrong_turn: return 409;
    case Errc::illegal_move: return 422;
    default: return 400;
  }
}

SessionStore::SessionStore(std::optional<std::filesystem::path> log_dir)
    : log_dir_(std::move(log_dir)), prefix_(random_prefix()) {
  if (log_dir_) std::filesystem::create_directories(*log_dir_);
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(Errc::not_found, "no session '" + id + "'");
  return it->second;
}

std::shared_ptr<const GameState> SessionStore::snapshot(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->snap);
  return s->state;
}

void SessionStore::persist(const std::string& id, const Json& entry) const {
  if (!log_dir_) return;
  std::ofstream out(*log_dir_ / (id + ".jsonl"), std::ios::app);
  out << entry.dump() << '\n';
}

std::string SessionStore::create(GameMode mode) {
  auto session = std::make_shared<Session>();
  session->state = std::make_shared<const GameState>(new_game(mode));
  const Json entry{{"op", "new"}, {"mode", to_string(mode)}};
  session->log.push_back(entry);
  std::string id;
  {
    std::unique_lock lock(mutex_);
    id = prefix_ + "-" + std::to_string(next_++);
    sessions_.emplace(id, session);
  }
  persist(id, entry);
  return id;
}

Json SessionStore::move(const std::string& id, const Json& body) {
  const auto s = find(id);
  std::lock_guard order(s->write);
  auto entries = ops::move_entries(body);
  GameState next = *s->state;
  for (const auto& e : entries) next = ops::apply_entry(next, e);
  for (auto& e : entries) {
    s->log.push_back(e);
    persist(id, e);
  }
  auto fresh = std::make_shared<const GameState>(std::move(next));
  {
    std::lock_guard lock(s->snap);
    s->state = fresh;
  }
  return to_json(*fresh);
}

Json SessionStore::state(const std::string& id) const { return to_json(*snapshot(id)); }

Json SessionStore::witness(const std::string& id, Nat k) const {
  const auto snap = snapshot(id);
  return Json{{"k", k}, {"prefix", witness_prefix(*snap, k)}};
}

Json SessionStore::suggestions(const std::string& id) const {
  Json out = Json::array();
  for (const auto& s : fspace::suggestions(*snapshot(id))) out.push_back(to_json(s));
  return out;
}

void SessionStore::remove(const std::string& id) {
  std::unique_lock lock(mutex_);
  if (sessions_.erase(id) == 0) throw Error(Errc::not_found, "no session '" + id + "'");
}

std::vector<Json> SessionStore::log(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard order(s->write);
  return s->log;
}

Server::Server(std::optional<std::filesystem::path> log_dir)
    : store_(std::move(log_dir)), http_(std::make_unique<httplib::Server>()) {
  auto& http = *http_;
  http.Post("/session", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const Json body = parse_body(req);
              const auto mode = parse_mode(body.value("mode", std::string("plain")));
              const auto id = store_.create(mode);
              send(res, 201, Json{{"id", id}, {"state", store_.state(id)}});
            }));
  http.Post(R"(/session/([^/]+)/move)", guarded([this](const httplib::Request& req, httplib::Response& res) {
              send(res, 200, store_.move(req.matches[1], parse_body(req)));
            }));
  http.Get(R"(/session/([^/]+)/state)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             send(res, 200, store_.state(req.matches[1]));
           }));
  http.Get(R"(/session/([^/]+)/witness)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             if (!req.has_param("k")) throw Error(Errc::invalid_argument, "missing query parameter k");
             const std::string k = req.get_param_value("k");
             if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || k.size() > 18) {
               throw Error(Errc::invalid_argument, "k must be a natural number");
             }
             send(res, 200, store_.witness(req.matches[1], std::stoull(k)));
           }));
  http.Get(R"(/session/([^/]+)/suggestions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
             send(res, 200, store_.suggestions(req.matches[1]));
           }));
  http.Delete(R"(/session/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                store_.remove(req.matches[1]);
                send(res, 200, Json{{"deleted", std::string(req.matches[1])}});
              }));
  http.Post("/op", guarded([](const httplib::Request& req, httplib::Response& res) {
              const Json body = parse_body(req);
              if (!body.contains("op") || !body["op"].is_string()) {
                throw Error(Errc::invalid_argument, "missing field 'op'");
              }
              send(res, 200, ops::run(body["op"].get<std::string>(), body.value("args", Json::object())));
            }));
  http.Get("/health", [](const httplib::Request&, httplib::Response& res) { send(res, 200, Json{{"ok", true}}); });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return http_->listen_after_bind(); }

void Server::wait_until_ready() const { http_->wait_until_ready(); }

void Server::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

}  // namespace fspace::service
