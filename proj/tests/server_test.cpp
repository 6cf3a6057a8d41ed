#include <gtest/gtest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <httplib.h>
#include <thread>

#include "hmiv/server.hpp"
#include "test_support.hpp"

using namespace hmiv;
using namespace hmiv::service;
using json::Json;

namespace {

class Running {
 public:
  explicit Running(ServerOptions o) : server(std::move(o)), thread([this] { server.run(); }) {}
  ~Running() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", server.port()); }

  Server server;
  std::thread thread;
};

ServerOptions fixture_options() {
  ServerOptions o;
  o.port = 0;
  o.root = HMIV_FIXTURES;
  o.session.frozen_time = true;
  return o;
}

std::string create(httplib::Client& c) {
  auto r = c.Post("/sessions", R"({"model":"fcu.hmi"})", "application/json");
  EXPECT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  return Json::parse(r->body)["id"].get<std::string>();
}

}  // namespace

TEST(Server, SessionLifecycleOverHttp) {
  Running s(fixture_options());
  auto c = s.client();
  const auto id = create(c);

  auto st = c.Get("/sessions/" + id + "/state");
  ASSERT_TRUE(st);
  EXPECT_EQ(st->status, 200);
  EXPECT_EQ(st->get_header_value("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(Json::parse(st->body)["mode"], "STD");

  auto en = c.Get("/sessions/" + id + "/enabled");
  ASSERT_TRUE(en);
  const auto enabled = Json::parse(en->body)["enabled"];
  EXPECT_NE(std::find(enabled.begin(), enabled.end(), "qnhClick"), enabled.end());

  Json last;
  for (const char* e : {"qnhClick", "digit_9", "digit_9", "digit_0", "ENT"}) {
    auto r = c.Post("/sessions/" + id + "/events", Json{{"event", e}}.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200) << r->body;
    last = Json::parse(r->body);
  }
  EXPECT_EQ(last["state"]["display"], "990 hPa");

  auto bad = c.Post("/sessions/" + id + "/events", R"({"event":"nope"})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(Json::parse(bad->body)["code"], "unknown-event");
  bad = c.Post("/sessions/" + id + "/events", "not json", "application/json");
  EXPECT_EQ(bad->status, 400);

  auto del = c.Delete("/sessions/" + id);
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 204);
  EXPECT_EQ(c.Get("/sessions/" + id + "/state")->status, 404);
  EXPECT_EQ(c.Delete("/sessions/" + id)->status, 404);
  EXPECT_EQ(c.Get("/sessions/" + create(c) + "/stream")->status, 426);
}

TEST(Server, ServesPrototypeFiles) {
  Running s(fixture_options());
  auto c = s.client();
  auto cfg = c.Get("/fcu.widgets.json");
  ASSERT_TRUE(cfg);
  EXPECT_EQ(cfg->status, 200);
  EXPECT_EQ(Json::parse(cfg->body)["image"], "kccu.svg");
  auto svg = c.Get("/kccu.svg");
  ASSERT_TRUE(svg);
  EXPECT_EQ(svg->status, 200);
  EXPECT_EQ(svg->get_header_value("Content-Type"), "image/svg+xml");
  EXPECT_EQ(c.Get("/missing.txt")->status, 404);
  EXPECT_EQ(c.Get("/../CMakeLists.txt")->status, 400);
  auto opt = c.Options("/sessions");
  ASSERT_TRUE(opt);
  EXPECT_EQ(opt->status, 204);
}

TEST(Server, StreamPushesStateChanges) {
  namespace beast = boost::beast;
  namespace net = boost::asio;
  Running s(fixture_options());
  auto c = s.client();
  const auto id = create(c);

  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  beast::websocket::stream<net::ip::tcp::socket> ws(ioc);
  net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(s.server.port())));
  ws.handshake("127.0.0.1", "/sessions/" + id + "/stream");

  beast::flat_buffer buf;
  ws.read(buf);
  EXPECT_EQ(Json::parse(beast::buffers_to_string(buf.data()))["mode"], "STD");
  buf.consume(buf.size());

  auto r = c.Post("/sessions/" + id + "/events", R"({"event":"qnhClick"})", "application/json");
  ASSERT_EQ(r->status, 200);
  ws.read(buf);
  const auto pushed = Json::parse(beast::buffers_to_string(buf.data()));
  EXPECT_EQ(pushed["mode"], "QNH");
  EXPECT_EQ(pushed["display"], "1013 hPa");
  ws.close(beast::websocket::close_code::normal);
}

TEST(Server, StreamForUnknownSessionIsRefused) {
  namespace net = boost::asio;
  Running s(fixture_options());
  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  boost::beast::websocket::stream<net::ip::tcp::socket> ws(ioc);
  net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(s.server.port())));
  EXPECT_THROW(ws.handshake("127.0.0.1", "/sessions/none/stream"), boost::system::system_error);
}

TEST(Server, OccupiedPortIsABindError) {
  Running s(fixture_options());
  auto o = fixture_options();
  o.port = s.server.port();
  EXPECT_THROW(Server{o}, BindError);
}
