#include "hmiv/server.hpp"

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace hmiv::service {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

std::vector<std::string> split_path(std::string_view target) {
  if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    while (i < target.size() && target[i] == '/') ++i;
    std::size_t j = i;
    while (j < target.size() && target[j] != '/') ++j;
    if (j > i) parts.emplace_back(target.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::string mime_type(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".hmi" || ext == ".txt" || ext == ".md") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

void common_headers(Response& res, bool keep_alive) {
  res.set(http::field::server, "hmiv");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(keep_alive);
}

Response json_response(const Request& req, http::status st, const json::Json& body) {
  Response res{st, req.version()};
  common_headers(res, req.keep_alive());
  res.set(http::field::content_type, "application/json");
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

}  // namespace

struct Server::Impl {
  ServerOptions opts;
  SessionService service;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::steady_timer ticker;
  std::int64_t since_expire_ms = 0;
  std::atomic<bool> stopped{false};

  explicit Impl(ServerOptions o)
      : opts(std::move(o)), service(with_root(opts)), ioc(std::max(1, opts.threads)), acceptor(ioc), ticker(ioc) {
    beast::error_code ec;
    const auto addr = net::ip::make_address(opts.address, ec);
    if (ec) throw BindError("invalid address '" + opts.address + "': " + ec.message());
    const tcp::endpoint ep{addr, opts.port};
    acceptor.open(ep.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(ep, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec)
      throw BindError("cannot listen on " + opts.address + ":" + std::to_string(opts.port) + ": " + ec.message());
  }

  static SessionOptions with_root(const ServerOptions& o) {
    SessionOptions s = o.session;
    s.model_root = o.root;
    return s;
  }

  void accept();
  void schedule_tick();
  Response handle(const Request& req);
  Response serve_file(const Request& req);
};

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& sock, SessionService& svc, std::string id)
      : ws_(std::move(sock)), svc_(svc), id_(std::move(id)) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<WsSession> weak = shared_from_this();
    auto exec = ws_.get_executor();
    try {
      token_ = svc_.subscribe(id_, [weak, exec](const json::Json& msg) {
        net::post(exec, [weak, text = msg.dump()] {
          if (auto self = weak.lock()) self->send(text);
        });
      });
      subscribed_ = true;
      send(svc_.state(id_).dump());
    } catch (const ServiceError& e) {
      ws_.async_close(websocket::close_reason(websocket::close_code::policy_error, e.what()),
                      [self = shared_from_this()](beast::error_code) {});
      return;
    }
    read();
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->buffer_.consume(self->buffer_.size());
      self->read();
    });
  }

  void send(std::string text) {
    if (closed_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write();
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  void close() {
    closed_ = true;
    if (subscribed_) svc_.unsubscribe(id_, token_);
    subscribed_ = false;
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionService& svc_;
  std::string id_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::uint64_t token_ = 0;
  bool subscribed_ = false;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& sock, Server::Impl& server) : stream_(std::move(sock)), server_(server) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

 private:
  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t);

  void on_write(bool keep_alive, beast::error_code ec, std::size_t) {
    res_.reset();
    if (ec) return;
    if (!keep_alive) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    read();
  }

  beast::tcp_stream stream_;
  Server::Impl& server_;
  beast::flat_buffer buffer_;
  bool known(const std::string& id) {
    try {
      server_.service.state(id);
      return true;
    } catch (const ServiceError&) {
      return false;
    }
  }

  Request req_;
  std::shared_ptr<Response> res_;
};

}  // namespace

void HttpSession::on_read(beast::error_code ec, std::size_t) {
  if (ec) {
    if (ec == http::error::end_of_stream) stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    return;
  }
  if (websocket::is_upgrade(req_)) {
    const auto parts = split_path(std::string_view(req_.target().data(), req_.target().size()));
    if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "stream" && known(parts[1])) {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_.service, parts[1])->run(std::move(req_));
      return;
    }
  }
  res_ = std::make_shared<Response>(server_.handle(req_));
  const bool keep_alive = res_->keep_alive();
  http::async_write(stream_, *res_, beast::bind_front_handler(&HttpSession::on_write, shared_from_this(), keep_alive));
}

Response Server::Impl::serve_file(const Request& req) {
  namespace fs = std::filesystem;
  auto parts = split_path(std::string_view(req.target().data(), req.target().size()));
  fs::path rel;
  for (const auto& p : parts) {
    if (p == ".." || p == ".") return json_response(req, http::status::bad_request, {{"error", "bad path"}, {"code", "bad-path"}});
    rel /= p;
  }
  if (parts.empty()) rel = "index.html";
  const fs::path full = fs::path(opts.root) / rel;
  std::error_code fec;
  if (!fs::is_regular_file(full, fec))
    return json_response(req, http::status::not_found, {{"error", "not found"}, {"code", "not-found"}});
  std::ifstream in(full, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  Response res{http::status::ok, req.version()};
  common_headers(res, req.keep_alive());
  res.set(http::field::content_type, mime_type(full));
  if (req.method() != http::verb::head) res.body() = ss.str();
  res.prepare_payload();
  return res;
}

Response Server::Impl::handle(const Request& req) {
  const auto parts = split_path(std::string_view(req.target().data(), req.target().size()));
  const auto verb = req.method();
  if (verb == http::verb::options) {
    Response res{http::status::no_content, req.version()};
    common_headers(res, req.keep_alive());
    res.set(http::field::access_control_allow_methods, "GET, POST, DELETE, OPTIONS");
    res.set(http::field::access_control_allow_headers, "Content-Type");
    res.prepare_payload();
    return res;
  }
  if (parts.empty() || parts[0] != "sessions") {
    if (verb == http::verb::get || verb == http::verb::head) return serve_file(req);
    return json_response(req, http::status::method_not_allowed, {{"error", "method not allowed"}, {"code", "method"}});
  }
  try {
    auto body = [&] {
      auto j = json::Json::parse(req.body(), nullptr, false);
      if (j.is_discarded()) throw ServiceError(400, "bad-json", "request body is not valid JSON");
      return j;
    };
    if (parts.size() == 1 && verb == http::verb::post)
      return json_response(req, http::status::created, service.create(body()));
    if (parts.size() == 2 && verb == http::verb::delete_) {
      if (!service.remove(parts[1])) throw ServiceError(404, "unknown-session", "unknown session '" + parts[1] + "'");
      Response res{http::status::no_content, req.version()};
      common_headers(res, req.keep_alive());
      res.prepare_payload();
      return res;
    }
    if (parts.size() == 3 && verb == http::verb::get && parts[2] == "state")
      return json_response(req, http::status::ok, service.state(parts[1]));
    if (parts.size() == 3 && verb == http::verb::get && parts[2] == "enabled")
      return json_response(req, http::status::ok, service.enabled(parts[1]));
    if (parts.size() == 3 && verb == http::verb::post && parts[2] == "events") {
      auto j = body();
      if (!j.is_object() || !j.contains("event") || !j["event"].is_string())
        throw ServiceError(400, "bad-request", "expected {\"event\": name}");
      return json_response(req, http::status::ok, service.post_event(parts[1], j["event"].get<std::string>()));
    }
    if (parts.size() == 3 && verb == http::verb::get && parts[2] == "stream") {
      service.state(parts[1]);
      throw ServiceError(426, "upgrade-required", "the stream endpoint needs a WebSocket upgrade");
    }
    return json_response(req, http::status::not_found, {{"error", "no such endpoint"}, {"code", "not-found"}});
  } catch (const ServiceError& e) {
    return json_response(req, static_cast<http::status>(e.status()), e.body());
  } catch (const std::exception& e) {
    return json_response(req, http::status::internal_server_error, {{"error", e.what()}, {"code", "internal"}});
  }
}

void Server::Impl::accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket sock) {
    if (stopped) return;
    if (!ec) std::make_shared<HttpSession>(std::move(sock), *this)->run();
    accept();
  });
}

void Server::Impl::schedule_tick() {
  const std::int64_t step = std::max<std::int64_t>(1, opts.session.tick_ms);
  ticker.expires_after(std::chrono::milliseconds(step));
  ticker.async_wait([this, step](beast::error_code ec) {
    if (ec || stopped) return;
    service.advance();
    since_expire_ms += step;
    if (since_expire_ms >= 1000) {
      since_expire_ms = 0;
      service.expire();
    }
    schedule_tick();
  });
}

Server::Server(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

SessionService& Server::sessions() { return impl_->service; }

void Server::run() {
  auto& im = *impl_;
  std::optional<net::signal_set> signals;
  if (im.opts.handle_signals) {
    signals.emplace(im.ioc, SIGINT, SIGTERM);
    signals->async_wait([this](beast::error_code, int) { stop(); });
  }
  im.accept();
  im.schedule_tick();
  std::vector<std::thread> extra;
  for (int i = 1; i < im.opts.threads; ++i) extra.emplace_back([&im] { im.ioc.run(); });
  im.ioc.run();
  for (auto& t : extra) t.join();
}

void Server::stop() {
  if (!impl_ || impl_->stopped.exchange(true)) return;
  net::post(impl_->ioc, [im = impl_.get()] {
    beast::error_code ec;
    im->acceptor.close(ec);
    im->ticker.cancel();
    im->ioc.stop();
  });
  impl_->ioc.stop();
}

}  // namespace hmiv::service
