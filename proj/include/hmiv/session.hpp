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

#include "hmiv/document.hpp"
#include "hmiv/export.hpp"

// Live simulation sessions behind the HTTP/WebSocket service.
namespace hmiv::service {

// Failure carrying an HTTP status and a JSON body.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message, json::Json extra = {})
      : Error(message), status_(status), code_(std::move(code)), extra_(std::move(extra)) {}

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  json::Json body() const;

 private:
  int status_;
  std::string code_;
  json::Json extra_;
};

struct LogEntry {
  std::int64_t time_ms = 0;  // since session creation
  std::string event;
  std::string mode;
  bool accepted = false;
};

struct SessionOptions {
  std::chrono::milliseconds idle_timeout = std::chrono::minutes(30);
  std::int64_t tick_ms = 100;
  bool frozen_time = false;
  std::string model_root = ".";  // relative model paths resolve here
};

using Clock = std::function<std::int64_t()>;  // milliseconds, monotonic

Clock steady_clock_ms();

using Listener = std::function<void(const json::Json&)>;

class SessionService {
 public:
  explicit SessionService(SessionOptions opts = {}, Clock clock = steady_clock_ms());

  // request: {"model": "<path>"} or {"inline": "<source>"}, optional
  // "statechart": "<name>" (default: the first statechart).
  json::Json create(const json::Json& request);
  std::string create_from_source(const std::string& source, const std::string& statechart = {});

  json::Json state(const std::string& id);
  json::Json enabled(const std::string& id);
  // {"accepted": bool, "state": {...}}; unknown events are 400 errors.
  json::Json post_event(const std::string& id, const std::string& event);
  bool remove(const std::string& id);

  std::vector<LogEntry> log(const std::string& id);

  // Advances every session's timers by the whole ticks elapsed since its
  // last advance. Returns the number of sessions whose state changed.
  std::size_t advance();
  // Drops sessions idle longer than the timeout. Sessions with a stream
  // subscriber are kept.
  std::size_t expire();

  std::uint64_t subscribe(const std::string& id, Listener l);
  void unsubscribe(const std::string& id, std::uint64_t token);

  std::size_t size() const;
  const SessionOptions& options() const { return opts_; }

 private:
  struct Session {
    std::string id;
    std::shared_ptr<const Document> document;
    const StatechartModel* model = nullptr;
    SystemState current;
    std::vector<LogEntry> log;
    std::int64_t created_ms = 0;
    std::int64_t last_active_ms = 0;
    std::int64_t last_tick_ms = 0;
    std::map<std::uint64_t, Listener> listeners;
    std::mutex mu;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string make(std::shared_ptr<const Document> doc, const std::string& statechart);
  void notify(Session& s, const json::Json& msg);
  std::string new_id();

  SessionOptions opts_;
  Clock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_token_ = 1;
  std::uint64_t id_state_;
};

}  // namespace hmiv::service
