#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <thread>

#include "netres/service.hpp"

using namespace netres;

namespace {

const char* kStar = "directed\n0 1\n0 2\n0 3\n";

Service::Response call(Service& s, const std::string& method, const std::string& path, const Json& body = {},
                       std::map<std::string, std::string> q = {}) {
  return s.handle(method, path, q, body.is_null() ? "" : body.dump());
}

std::string add_star(Service& s) {
  auto r = s.handle("POST", "/graphs", {}, kStar);
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

}  // namespace

TEST_CASE("graphs can be posted and listed") {
  Service s;
  std::string id = add_star(s);
  CHECK(id == "g1");
  auto j = call(s, "POST", "/graphs", Json{{"graph", {{"directed", true}, {"nodes", {0, 1}}, {"edges", {{0, 1}}}}}});
  CHECK(j.status == 201);
  CHECK(j.body["id"] == "g2");
  auto list = call(s, "GET", "/graphs");
  CHECK(list.status == 200);
  CHECK(list.body["graphs"].size() == 2);
  auto one = call(s, "GET", "/graphs/g1");
  CHECK(one.body["serialization"] == kStar);
  auto dup = s.handle("POST", "/graphs", {}, "directed\n0 1\n0 1\n");
  CHECK(dup.body["warnings"].size() == 1);
}

TEST_CASE("apply and undo restore the graph") {
  Service s;
  std::string id = add_star(s);
  std::string before = call(s, "GET", "/graphs/" + id).body["hash"];
  auto a = call(s, "POST", "/graphs/" + id + "/apply", Json{{"intervention", "edge_del 0 1"}});
  REQUIRE(a.status == 200);
  CHECK(a.body["effective"] == true);
  CHECK(a.body["hash"] != before);
  CHECK(a.body["history"].size() == 1);
  auto u = call(s, "POST", "/graphs/" + id + "/undo");
  REQUIRE(u.status == 200);
  CHECK(u.body["hash"] == before);
  CHECK(u.body["serialization"] == kStar);
  CHECK(call(s, "POST", "/graphs/" + id + "/undo").status == 409);
  auto st = call(s, "POST", "/graphs/" + id + "/apply", Json{{"strategy", "edge_del 0 1; edge_del 0 2"}});
  CHECK(st.body["history"].size() == 2);
}

TEST_CASE("evaluate the star") {
  Service s;
  std::string id = add_star(s);
  auto r = call(s, "POST", "/graphs/" + id + "/evaluate", Json{{"acceptance", "prop-6.1-out2"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["q"] == 2.25);
  CHECK(r.body["accepted"] == false);
  auto m = call(s, "GET", "/graphs/" + id + "/metrics", {}, {{"kinds", "moment2out"}});
  CHECK(m.body["metrics"]["moment2out"]["exact"] == "9/4");
}

TEST_CASE("error statuses") {
  Service s;
  add_star(s);
  CHECK(call(s, "GET", "/graphs/g9").status == 404);
  CHECK(call(s, "GET", "/nowhere").status == 404);
  CHECK(call(s, "GET", "/jobs/j42").status == 404);
  CHECK(s.handle("POST", "/graphs", {}, "directed\n1 1\n").status == 400);
  CHECK(s.handle("POST", "/graphs", {}, "{not json").status == 400);
  auto e = call(s, "POST", "/graphs/g1/evaluate", Json{{"acceptance", "prop-B-epi"}});
  CHECK(e.status == 422);
  CHECK(e.body["error"] == "DirectedUnsupported");
  auto seedless = call(s, "POST", "/graphs/g1/stress", Json{{"samples", 100}});
  CHECK(seedless.status == 400);
  CHECK(seedless.body["error"] == "MissingSeed");
}

TEST_CASE("stress is deterministic across services and worker counts") {
  Service a(1), b(4);
  add_star(a);
  add_star(b);
  Json body = {{"samples", 2000}, {"seed", 11}, {"alpha", 0.5}, {"lambda", 0.2}};
  auto x = call(a, "POST", "/graphs/g1/stress", body);
  auto y = call(b, "POST", "/graphs/g1/stress", body);
  REQUIRE(x.status == 200);
  CHECK(x.body.dump() == y.body.dump());
  CHECK(call(a, "POST", "/graphs/g1/stress", body).body.dump() == x.body.dump());
}

TEST_CASE("rho and suggest") {
  Service s;
  add_star(s);
  Json preset = {{"acceptance", "prop-6.1-out2"}, {"iset", "edge_del"}, {"cost", "unit"}};
  auto r = call(s, "POST", "/graphs/g1/rho", Json{{"preset", preset}});
  REQUIRE(r.status == 200);
  CHECK(r.body["value"] == 1.0);
  auto put = call(s, "PUT", "/presets/safe", preset);
  REQUIRE(put.status == 200);
  CHECK(put.body["risk_reducing"]["counterexample"] == false);
  CHECK(call(s, "GET", "/presets/safe").status == 200);
  auto viaid = call(s, "POST", "/graphs/g1/suggest", Json{{"preset_id", "safe"}, {"beam", 2}, {"steps", 2}});
  REQUIRE(viaid.status == 200);
  CHECK(viaid.body["ranked"][0]["cost"] == 1.0);
  auto risky = call(s, "PUT", "/presets/risky", Json{{"acceptance", "prop-6.1-out2"}, {"iset", "edge_add"}});
  CHECK(risky.body["risk_reducing"]["counterexample"] == true);
  CHECK(call(s, "POST", "/graphs/g1/rho", Json{{"preset_id", "missing"}}).status == 404);
}

TEST_CASE("async jobs") {
  Service s;
  add_star(s);
  Json body = {{"samples", 500}, {"seed", 2}, {"async", true}};
  auto r = call(s, "POST", "/graphs/g1/stress", body);
  REQUIRE(r.status == 202);
  std::string jid = r.body["job"];
  s.drain();
  auto j = call(s, "GET", "/jobs/" + jid);
  CHECK(j.body["status"] == "done");
  body.erase("async");
  CHECK(call(s, "POST", "/graphs/g1/stress", body).body.dump() == j.body["result"].dump());
}

TEST_CASE("workspace save and load") {
  Service a;
  add_star(a);
  call(a, "POST", "/graphs/g1/apply", Json{{"intervention", "edge_del 0 2"}});
  call(a, "PUT", "/presets/p", Json{{"acceptance", "prop-6.1-out2"}, {"iset", "edge_del"}});
  auto saved = call(a, "GET", "/workspace");
  REQUIRE(saved.status == 200);
  Service b;
  CHECK(call(b, "PUT", "/workspace", saved.body).status == 200);
  CHECK(call(b, "GET", "/graphs/g1").body["hash"] == call(a, "GET", "/graphs/g1").body["hash"]);
  CHECK(call(b, "POST", "/graphs/g1/undo").body["serialization"] == kStar);
  CHECK(call(b, "GET", "/presets/p").status == 200);
  Json broken = saved.body;
  broken["graphs"]["g1"]["head_hash"] = "12345";
  CHECK(call(b, "PUT", "/workspace", broken).status >= 400);
}

TEST_CASE("the API description lists the routes") {
  auto spec = Service::openapi();
  CHECK(spec.contains("paths"));
  CHECK(spec["paths"].contains("/graphs/{id}/rho"));
}

TEST_CASE("HTTP round trip") {
  Service s;
  int port = s.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { s.listen(); });
  httplib::Client c("127.0.0.1", port);
  httplib::Result r;
  for (int i = 0; i < 50 && !(r = c.Post("/graphs", kStar, "text/plain")); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  REQUIRE(r);
  CHECK(r->status == 201);
  auto e = c.Post("/graphs/g1/evaluate", R"({"acceptance": "prop-6.1-out2"})", "application/json");
  REQUIRE(e);
  CHECK(Json::parse(e->body)["accepted"] == false);
  CHECK(c.Get("/graphs/g7")->status == 404);
  s.stop();
  t.join();
}
