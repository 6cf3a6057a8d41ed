#pragma once

#include <memory>
#include <string>

#include "hmiv/session.hpp"

namespace hmiv::service {

class BindError : public Error {
 public:
  using Error::Error;
};

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::string root = ".";      // static files and relative model paths
  int threads = 1;
  bool handle_signals = false;  // stop on SIGINT/SIGTERM
  SessionOptions session;
};

// HTTP + WebSocket front end of SessionService:
//   POST   /sessions                 {model: path} | {inline: source}
//   GET    /sessions/{id}/state
//   GET    /sessions/{id}/enabled
//   POST   /sessions/{id}/events     {event}
//   DELETE /sessions/{id}
//   WS     /sessions/{id}/stream     state JSON after every change
// Any other GET serves a file below the root.
class Server {
 public:
  // Binds immediately; throws BindError.
  explicit Server(ServerOptions opts);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  SessionService& sessions();

  // Serves until stop().
  void run();
  void stop();

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace hmiv::service
