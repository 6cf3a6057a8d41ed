#include "hmiv/session.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hmiv/dsl.hpp"

namespace hmiv::service {

json::Json ServiceError::body() const {
  json::Json j;
  j["error"] = what();
  j["code"] = code_;
  if (!extra_.is_null())
    for (auto it = extra_.begin(); it != extra_.end(); ++it) j[it.key()] = it.value();
  return j;
}

Clock steady_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

SessionService::SessionService(SessionOptions opts, Clock clock)
    : opts_(std::move(opts)), clock_(std::move(clock)), id_state_(std::random_device{}()) {
  id_state_ = (id_state_ << 32) ^ std::random_device{}();
}

std::string SessionService::new_id() {
  std::mt19937_64 rng(id_state_++ * 0x9e3779b97f4a7c15ULL);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

namespace {

std::shared_ptr<const Document> load(const std::string& source) {
  auto r = dsl::parse_document(source);
  if (!r.ok()) {
    json::Json diags = json::Json::array();
    for (const auto& d : r.diagnostics) diags.push_back(json::diagnostic(d));
    throw ServiceError(400, "invalid-model", "model has errors", json::Json{{"diagnostics", diags}});
  }
  return std::make_shared<const Document>(std::move(r.document));
}

}  // namespace

std::string SessionService::make(std::shared_ptr<const Document> doc, const std::string& statechart) {
  const StatechartModel* m = nullptr;
  if (statechart.empty()) {
    if (!doc->statecharts.empty()) m = &doc->statecharts.front();
  } else {
    m = doc->statechart(statechart);
  }
  if (!m) throw ServiceError(400, "no-statechart", statechart.empty() ? "model has no statechart" : "unknown statechart '" + statechart + "'");

  auto s = std::make_shared<Session>();
  s->document = std::move(doc);
  s->model = m;
  s->current = initial_state(*m);
  s->created_ms = s->last_active_ms = s->last_tick_ms = clock_();
  std::lock_guard lk(mu_);
  do {
    s->id = new_id();
  } while (sessions_.count(s->id));
  sessions_.emplace(s->id, s);
  return s->id;
}

std::string SessionService::create_from_source(const std::string& source, const std::string& statechart) {
  return make(load(source), statechart);
}

json::Json SessionService::create(const json::Json& req) {
  if (!req.is_object()) throw ServiceError(400, "bad-request", "request body must be a JSON object");
  std::string statechart;
  if (req.contains("statechart")) {
    if (!req["statechart"].is_string()) throw ServiceError(400, "bad-request", "'statechart' must be a string");
    statechart = req["statechart"].get<std::string>();
  }
  std::string source;
  if (req.contains("inline") && req["inline"].is_string()) {
    source = req["inline"].get<std::string>();
  } else if (req.contains("model") && req["model"].is_string()) {
    namespace fs = std::filesystem;
    const fs::path rel = fs::path(req["model"].get<std::string>()).lexically_normal();
    if (rel.empty() || rel.is_absolute() || *rel.begin() == "..")
      throw ServiceError(400, "bad-path", "model path must stay inside the model root");
    std::ifstream in(fs::path(opts_.model_root) / rel, std::ios::binary);
    if (!in) throw ServiceError(404, "not-found", "cannot read model '" + rel.generic_string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    source = ss.str();
  } else {
    throw ServiceError(400, "bad-request", "expected {\"model\": path} or {\"inline\": source}");
  }
  const std::string id = make(load(source), statechart);
  return json::Json{{"id", id}, {"state", state(id)}};
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::lock_guard lk(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown-session", "unknown session '" + id + "'");
  return it->second;
}

json::Json SessionService::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lk(s->mu);
  s->last_active_ms = clock_();
  return json::state(*s->model, s->current);
}

json::Json SessionService::enabled(const std::string& id) {
  auto s = find(id);
  std::lock_guard lk(s->mu);
  s->last_active_ms = clock_();
  return json::Json{{"enabled", enabled_events(*s->model, s->current)}};
}

void SessionService::notify(Session& s, const json::Json& msg) {
  for (auto& [tok, l] : s.listeners) l(msg);
}

json::Json SessionService::post_event(const std::string& id, const std::string& event) {
  auto s = find(id);
  std::lock_guard lk(s->mu);
  const auto ev = s->model->event_index(event);
  if (!ev)
    throw ServiceError(400, "unknown-event", "unknown event '" + event + "' in statechart '" + s->model->name + "'");
  const std::int64_t now = clock_();
  StepResult r;
  try {
    r = step(*s->model, s->current, *ev);
  } catch (const Error& e) {
    throw ServiceError(409, "step-failed", e.what());
  }
  s->last_active_ms = now;
  s->log.push_back(LogEntry{now - s->created_ms, event, s->model->modes[r.state.mode], r.accepted});
  json::Json st = json::state(*s->model, r.state);
  if (r.accepted) {
    s->current = std::move(r.state);
    s->last_tick_ms = now;
    notify(*s, st);
  }
  return json::Json{{"accepted", r.accepted}, {"state", std::move(st)}};
}

bool SessionService::remove(const std::string& id) {
  std::lock_guard lk(mu_);
  return sessions_.erase(id) > 0;
}

std::vector<LogEntry> SessionService::log(const std::string& id) {
  auto s = find(id);
  std::lock_guard lk(s->mu);
  return s->log;
}

std::size_t SessionService::advance() {
  if (opts_.frozen_time || opts_.tick_ms <= 0) return 0;
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lk(mu_);
    for (auto& [id, s] : sessions_) all.push_back(s);
  }
  std::size_t changed = 0;
  const std::int64_t now = clock_();
  for (auto& s : all) {
    std::lock_guard lk(s->mu);
    const std::int64_t ticks = (now - s->last_tick_ms) / opts_.tick_ms;
    if (ticks <= 0) continue;
    s->last_tick_ms += ticks * opts_.tick_ms;
    auto r = tick(*s->model, s->current, ticks * opts_.tick_ms);
    bool any = false;
    for (std::size_t i = 0; i < r.fired.size(); ++i) {
      s->log.push_back(LogEntry{s->last_tick_ms - s->created_ms, r.fired[i], s->model->modes[r.state.mode], r.accepted[i]});
      any = any || r.accepted[i];
    }
    s->current = std::move(r.state);
    if (any) {
      ++changed;
      notify(*s, json::state(*s->model, s->current));
    }
  }
  return changed;
}

std::size_t SessionService::expire() {
  const std::int64_t now = clock_();
  std::vector<std::shared_ptr<Session>> dropped;
  std::lock_guard lk(mu_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle;
    {
      std::lock_guard sl(it->second->mu);
      idle = it->second->listeners.empty() && now - it->second->last_active_ms > opts_.idle_timeout.count();
    }
    if (idle) {
      dropped.push_back(it->second);
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
  return dropped.size();
}

std::uint64_t SessionService::subscribe(const std::string& id, Listener l) {
  auto s = find(id);
  std::uint64_t tok;
  {
    std::lock_guard lk(mu_);
    tok = next_token_++;
  }
  std::lock_guard lk(s->mu);
  s->listeners.emplace(tok, std::move(l));
  s->last_active_ms = clock_();
  return tok;
}

void SessionService::unsubscribe(const std::string& id, std::uint64_t token) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lk(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    s = it->second;
  }
  std::lock_guard lk(s->mu);
  s->listeners.erase(token);
}

std::size_t SessionService::size() const {
  std::lock_guard lk(mu_);
  return sessions_.size();
}

}  // namespace hmiv::service
