#pragma once
// JSON-over-HTTP session service for the Choquet game.
//
//   POST   /session                {mode}              -> {id, state}
//   POST   /session/{id}/move      {extra, point?, reply?} -> state
//   GET    /session/{id}/state                          -> state
//   GET    /session/{id}/witness?k=K                    -> {k, prefix}
//   GET    /session/{id}/suggestions                    -> [suggestion]
//   DELETE /session/{id}                                -> {deleted}
//   POST   /op                     {op, args}           -> result of ops::run
//
// A move is E's refinement followed by NE's reply unless `reply` is false.
// A body {"player":"NE"} plays NE's reply alone, {"abandon":true} ends play.
// Errors carry {"error": code, "detail": text}: 404 unknown session or op,
// 409 wrong turn, 422 illegal move, 400 anything else.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "fspace/choquet.hpp"
#include "fspace/error.hpp"
#include "fspace/json.hpp"

namespace httplib {
class Server;
}

namespace fspace::service {

int http_status(Errc code) noexcept;

class SessionStore {
 public:
  /// With a directory, each session appends its log to `<dir>/<id>.jsonl`.
  explicit SessionStore(std::optional<std::filesystem::path> log_dir = std::nullopt);

  std::string create(GameMode mode);
  Json move(const std::string& id, const Json& body);
  Json state(const std::string& id) const;
  Json witness(const std::string& id, Nat k) const;
  Json suggestions(const std::string& id) const;
  void remove(const std::string& id);
  std::vector<Json> log(const std::string& id) const;

 private:
  struct Session {
    std::mutex write;  // serializes moves
    mutable std::mutex snap;
    std::shared_ptr<const GameState> state;
    std::vector<Json> log;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<const GameState> snapshot(const std::string& id) const;
  void persist(const std::string& id, const Json& entry) const;

  std::optional<std::filesystem::path> log_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_ = 1;
  std::string prefix_;
};

class Server {
 public:
  explicit Server(std::optional<std::filesystem::path> log_dir = std::nullopt);
  ~Server();

  /// Binds to host:port; port 0 picks a free one. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind.
  bool listen();
  void wait_until_ready() const;
  void stop();
  SessionStore& store() { return store_; }

 private:
  SessionStore store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace fspace::service
