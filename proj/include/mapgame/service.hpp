#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mapgame/io.hpp"
#include "mapgame/solver.hpp"

namespace mapgame::service {

struct Response {
  int status = 200;
  io::json body;
};

struct ServiceOptions {
  // Pre-solve budget for optimal engine opponents.
  long long presolve_states = 2'000'000;
  double presolve_seconds = 20;
};

// Live game sessions. Thread-safe; steps on one session are serialized.
class SessionStore {
 public:
  explicit SessionStore(ServiceOptions options = {});
  ~SessionStore();

  Response create(const io::json& request);
  Response get(const std::string& id);
  Response step(const std::string& id, const io::json& request);
  Response remove(const std::string& id);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);

  ServiceOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  unsigned long long next_id_ = 1;
};

// HTTP front end over a SessionStore.
class HttpServer {
 public:
  explicit HttpServer(ServiceOptions options = {});
  ~HttpServer();
  // Binds to port, or to a free port when port is 0. Returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mapgame::service
