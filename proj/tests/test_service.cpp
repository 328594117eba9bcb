#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <httplib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fspace/error.hpp"
#include "fspace/ops.hpp"
#include "fspace/service.hpp"
#include "support.hpp"

using namespace fspace;
using namespace testing;

namespace {

struct Live {
  service::Server server;
  std::thread thread;
  int port = -1;

  explicit Live(std::optional<std::filesystem::path> dir = std::nullopt) : server(std::move(dir)) {
    port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen(); });
    server.wait_until_ready();
  }
  ~Live() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

Json post(httplib::Client& c, const std::string& path, const Json& body, int expect) {
  const auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expect);
  return Json::parse(res->body);
}

Json get(httplib::Client& c, const std::string& path, int expect) {
  const auto res = c.Get(path);
  REQUIRE(res);
  CHECK(res->status == expect);
  return Json::parse(res->body);
}

struct Run {
  int code = 0;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(FSPACE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  Run r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WEXITSTATUS(status);
  return r;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string random_box_text(Rng& rng) {
  std::string out;
  for (Nat k = uniform(rng, 1, 3); k > 0; --k) {
    if (!out.empty()) out += " & ";
    out += "[" + to_string(random_spec(rng, 8, 12).build()) + " -> " + to_string(random_spec(rng, 8, 12).build()) + "]";
  }
  return out;
}

std::string random_map_text(Rng& rng) { return to_string(random_map_spec(rng).build()); }

}  // namespace

TEST_CASE("session endpoints") {
  Live live;
  auto c = live.client();
  const auto created = post(c, "/session", Json{{"mode", "plain"}}, 201);
  const std::string id = created["id"];
  CHECK(created["state"]["rounds"] == 0);

  const auto after = post(c, "/session/" + id + "/move", Json{{"extra", Json::array()}}, 200);
  CHECK(after["rounds"] == 1);
  const auto w = get(c, "/session/" + id + "/witness?k=0", 200);
  CHECK(w["prefix"].size() == 1);

  const auto state = get(c, "/session/" + id + "/state", 200);
  CHECK(state == after);
  const auto menu = get(c, "/session/" + id + "/suggestions", 200);
  CHECK(menu.size() >= 2);

  const auto split = post(c, "/session/" + id + "/move", Json{{"extra", "[0%2 -> 0%4] & [1%2 -> 1%4]"}}, 200);
  CHECK(split["rounds"] == 2);
  CHECK(get(c, "/session/" + id + "/witness?k=2", 200)["prefix"] == Json{0, 1, 4});
  CHECK(get(c, "/session/" + id + "/witness?k=3", 400)["error"] == "not_deep_enough");
  CHECK(get(c, "/session/" + id + "/witness?k=x", 400)["error"] == "invalid_argument");

  const auto del = c.Delete("/session/" + id);
  REQUIRE(del);
  CHECK(del->status == 200);
  CHECK(get(c, "/session/" + id + "/state", 404)["error"] == "not_found");
}

TEST_CASE("error statuses") {
  Live live;
  auto c = live.client();
  CHECK(get(c, "/session/nope/state", 404)["error"] == "not_found");
  CHECK(post(c, "/session/nope/move", Json::object(), 404)["error"] == "not_found");
  const auto d = c.Delete("/session/nope");
  REQUIRE(d);
  CHECK(d->status == 404);

  const std::string id = post(c, "/session", Json::object(), 201)["id"];
  CHECK(post(c, "/session/" + id + "/move", Json{{"player", "NE"}}, 409)["error"] == "wrong_turn");
  post(c, "/session/" + id + "/move", Json{{"extra", "[0%2 -> 1%2]"}, {"reply", false}}, 200);
  CHECK(post(c, "/session/" + id + "/move", Json{{"extra", Json::array()}}, 409)["error"] == "wrong_turn");
  CHECK(post(c, "/session/" + id + "/move", Json{{"player", "NE"}}, 200)["rounds"] == 1);

  const auto empty = post(c, "/session/" + id + "/move", Json{{"extra", "[1%2 -> {3}]"}}, 422);
  CHECK(empty["error"] == "illegal_move");

  const std::string strong = post(c, "/session", Json{{"mode", "strong"}}, 201)["id"];
  const auto bad = post(c, "/session/" + strong + "/move", Json{{"extra", "[0%2 -> 1%2]"}, {"point", "id"}}, 422);
  CHECK(bad["error"] == "illegal_move");
  CHECK(bad["detail"].get<std::string>().find("not a member") != std::string::npos);
  CHECK(post(c, "/session/" + strong + "/move", Json{{"extra", "[0%2 -> 1%2]"}, {"point", "shift(1)"}}, 200)["rounds"] ==
        1);

  CHECK(post(c, "/session/" + id + "/move", Json{{"extra", "[0%2 -> "}}, 400)["error"] == "syntax");
  const auto raw = c.Post("/session", "{not json", "application/json");
  REQUIRE(raw);
  CHECK(raw->status == 400);
  CHECK(post(c, "/session", Json{{"mode", "weird"}}, 400)["error"] == "invalid_argument");
  CHECK(post(c, "/op", Json{{"op", "nope"}}, 404)["error"] == "not_found");

  post(c, "/session/" + id + "/move", Json{{"abandon", true}}, 200);
  CHECK(post(c, "/session/" + id + "/move", Json{{"extra", Json::array()}}, 422)["error"] == "illegal_move");
}

TEST_CASE("parallel sessions advance independently") {
  Live live;
  std::vector<std::string> ids;
  {
    auto c = live.client();
    for (int i = 0; i < 4; ++i) ids.push_back(post(c, "/session", Json::object(), 201)["id"]);
  }
  std::vector<std::thread> players;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    players.emplace_back([&, i] {
      auto c = live.client();
      for (std::size_t r = 0; r <= i * 2; ++r) {
        c.Post("/session/" + ids[i] + "/move", Json{{"extra", Json::array()}}.dump(), "application/json");
      }
    });
  }
  for (auto& t : players) t.join();
  auto c = live.client();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    CHECK(get(c, "/session/" + ids[i] + "/state", 200)["rounds"] == i * 2 + 1);
  }
}

TEST_CASE("one session, concurrent moves, arrival order kept") {
  Live live;
  auto c0 = live.client();
  const std::string id = post(c0, "/session", Json::object(), 201)["id"];
  std::vector<std::thread> players;
  for (int t = 0; t < 4; ++t) {
    players.emplace_back([&] {
      auto c = live.client();
      for (int r = 0; r < 5; ++r) {
        c.Post("/session/" + id + "/move", Json{{"extra", Json::array()}}.dump(), "application/json");
        c.Get("/session/" + id + "/state");
      }
    });
  }
  for (auto& t : players) t.join();
  const auto state = get(c0, "/session/" + id + "/state", 200);
  CHECK(state["rounds"] == 20);
  CHECK(to_json(ops::replay(live.server.store().log(id))) == state);
}

TEST_CASE("logs replay to byte-identical state through the CLI") {
  const auto dir = std::filesystem::temp_directory_path() / ("fspace_logs_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  Rng rng(70);
  {
    Live live(dir);
    auto c = live.client();
    for (int s = 0; s < 3; ++s) {
      const bool strong = s == 1;
      const std::string id = post(c, "/session", Json{{"mode", strong ? "strong" : "plain"}}, 201)["id"];
      for (int r = 0; r < 6; ++r) {
        const auto menu = get(c, "/session/" + id + "/suggestions", 200);
        const auto& pick = menu[uniform(rng, 0, menu.size() - 1)];
        post(c, "/session/" + id + "/move", Json{{"extra", pick["extra"]}, {"point", pick["point"]}}, 200);
      }
      const auto state = get(c, "/session/" + id + "/state", 200);
      const auto path = dir / (id + ".jsonl");
      REQUIRE(std::filesystem::exists(path));
      const auto r = cli("--json game play --script " + quote(path.string()));
      REQUIRE(r.code == 0);
      CHECK(Json::parse(r.out)["state"].dump() == state.dump());
      CHECK(Json::parse(r.out)["witness"] == state["witness"]);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("CLI examples and exit codes") {
  auto r = cli("--json pofin eval '0%2 & 0%4'");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out) == Json::parse(R"({"m":4,"r":[0],"add":[],"del":[]})"));
  r = cli("box empty '[0%2 -> {5}]'");
  CHECK(r.code == 0);
  CHECK(r.out == "empty\n");
  CHECK(cli("pofin eval '0%0'").code == 1);
  CHECK(cli("pofin").code == 2);
  CHECK(cli("nonsense").code == 2);
  CHECK(cli("map apply id").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("differential: CLI and service agree on 100 random operations") {
  Live live;
  auto c = live.client();
  Rng rng(71);
  int errors = 0;
  for (int i = 0; i < 100; ++i) {
    std::string op, argv;
    Json args;
    switch (uniform(rng, 0, 9)) {
      case 0: {
        const auto a = to_string(random_spec(rng).build()), b = to_string(random_spec(rng).build());
        const auto expr = a + (uniform(rng, 0, 1) ? " & " : " - ") + b;
        op = "pofin.eval", args = {{"expr", expr}}, argv = "pofin eval " + quote(expr);
        break;
      }
      case 1: {
        const auto a = to_string(random_spec(rng).build()), b = to_string(random_spec(rng).build());
        op = "pofin.rel", args = {{"a", a}, {"b", b}}, argv = "pofin rel " + quote(a) + " " + quote(b);
        break;
      }
      case 2: {
        const auto f = random_map_text(rng);
        const Nat n = uniform(rng, 0, 200);
        op = "map.apply", args = {{"map", f}, {"n", n}}, argv = "map apply " + quote(f) + " " + std::to_string(n);
        break;
      }
      case 3: {
        const auto f = random_map_text(rng), s = to_string(random_spec(rng).build());
        op = "map.image", args = {{"map", f}, {"set", s}}, argv = "map image " + quote(f) + " " + quote(s);
        break;
      }
      case 4: {
        const auto f = random_map_text(rng), g = random_map_text(rng);
        op = "map.compose", args = {{"f", f}, {"g", g}}, argv = "map compose " + quote(f) + " " + quote(g);
        break;
      }
      case 5: {
        const auto f = random_map_text(rng);
        op = "map.classify", args = {{"map", f}}, argv = "map classify " + quote(f);
        break;
      }
      case 6: {
        const auto b = random_box_text(rng);
        op = "box.normal", args = {{"box", b}}, argv = "box normal " + quote(b);
        break;
      }
      case 7: {
        const auto b = random_box_text(rng);
        op = "box.empty", args = {{"box", b}}, argv = "box empty " + quote(b);
        break;
      }
      case 8: {
        const auto f = random_map_text(rng), b = random_box_text(rng);
        op = "box.member", args = {{"map", f}, {"box", b}}, argv = "box member " + quote(f) + " " + quote(b);
        break;
      }
      default: {
        const auto b = random_box_text(rng), e = random_box_text(rng);
        op = "box.refine", args = {{"box", b}, {"extra", e}}, argv = "box refine " + quote(b) + " " + quote(e);
        break;
      }
    }
    const auto res = c.Post("/op", Json{{"op", op}, {"args", args}}.dump(), "application/json");
    REQUIRE(res);
    const auto r = cli("--json " + argv);
    INFO(op << " " << argv);
    CHECK(Json::parse(r.out) == Json::parse(res->body));
    CHECK((r.code == 0) == (res->status == 200));
    if (res->status == 200) {
      CHECK(Json::parse(res->body) == ops::run(op, args));
    } else {
      ++errors;
    }
  }
  MESSAGE("operations ending in a domain error: " << errors);
}
