// fspace: command-line front end. Exit codes: 0 success, 1 domain error,
// 2 usage error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fspace/error.hpp"
#include "fspace/ops.hpp"
#include "fspace/service.hpp"

using namespace fspace;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_argument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json json_file(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error&) {
    throw Error(Errc::invalid_argument, "'" + path + "' is not JSON");
  }
}

// Text for anything that looks like a JSON value, the raw string otherwise.
Json loose(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[' || text[first] == '"')) {
    // Box text also starts with '['; only treat it as JSON if it parses.
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
    }
  }
  return Json(text);
}

void write_log(const std::string& path, const std::vector<Json>& entries, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw Error(Errc::invalid_argument, "cannot write '" + path + "'");
  for (const auto& e : entries) out << e.dump() << '\n';
}

Json game_result(const GameState& state) {
  return Json{{"state", to_json(state)}, {"witness", witness_prefix(state, state.rounds())}};
}

service::Server* running = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic workbench for self-maps of the remainder of omega"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print canonical JSON");

  // Each leaf fills `op` and `args`; game and serve commands run directly.
  std::string op;
  Json args = Json::object();
  std::function<Json()> direct;

  std::string s1, s2, s3;
  Nat number = 0;
  Nat horizon = 0;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::string opname) {
    auto* cmd = parent->add_subcommand(name, help);
    cmd->callback([&op, opname] { op = opname; });
    return cmd;
  };

  auto* pofin = app.add_subcommand("pofin", "Periodic sets modulo finite")->require_subcommand(1);
  leaf(pofin, "eval", "Evaluate a set expression", "pofin.eval")->add_option("expr", s1)->required();
  leaf(pofin, "canon", "Canonical text of a set", "pofin.canon")->add_option("set", s1)->required();
  {
    auto* c = leaf(pofin, "rel", "Relations modulo finite between two sets", "pofin.rel");
    c->add_option("a", s1)->required();
    c->add_option("b", s2)->required();
  }

  auto* map = app.add_subcommand("map", "Progression maps")->require_subcommand(1);
  {
    auto* c = leaf(map, "apply", "Apply a map to a natural", "map.apply");
    c->add_option("map", s1)->required();
    c->add_option("n", number)->required();
    auto* i = leaf(map, "image", "Image of a set", "map.image");
    i->add_option("map", s1)->required();
    i->add_option("set", s2)->required();
    auto* k = leaf(map, "compose", "f after g", "map.compose");
    k->add_option("f", s1)->required();
    k->add_option("g", s2)->required();
    leaf(map, "classify", "Injective / finite-to-one flags", "map.classify")->add_option("map", s1)->required();
  }

  auto* box = app.add_subcommand("box", "Basic boxes")->require_subcommand(1);
  {
    leaf(box, "normal", "Normal form", "box.normal")->add_option("box", s1)->required();
    leaf(box, "empty", "Emptiness with a witness", "box.empty")->add_option("box", s1)->required();
    auto* m = leaf(box, "member", "Membership of a map", "box.member");
    m->add_option("map", s1)->required();
    m->add_option("box", s2)->required();
    auto* r = leaf(box, "refine", "Refine by extra constraints", "box.refine");
    r->add_option("box", s1)->required();
    r->add_option("extra", s2)->required();
  }

  auto* scheme = app.add_subcommand("scheme", "Scheme trees (JSON file, - for stdin)")->require_subcommand(1);
  std::string prefix_file;
  for (auto [name, help] : {std::pair{"validate", "List violated clauses"}, {"repair", "Repair modulo finite"},
                            {"build", "Prefix of the scheme injection"}, {"verify", "Check the scheme promise"}}) {
    auto* c = leaf(scheme, name, help, std::string("scheme.") + name);
    c->add_option("tree", s1, "Tree JSON file")->required();
    if (std::string(name) == "build" || std::string(name) == "verify") {
      c->add_option("--horizon", horizon, "Prefix length (default FSPACE_HORIZON or 512)");
    }
    if (std::string(name) == "verify") c->add_option("--prefix", prefix_file, "JSON list to check instead");
  }

  auto* game = app.add_subcommand("game", "Choquet game sessions kept as JSON-lines logs")->require_subcommand(1);
  std::string log_path, mode = "plain", extra, point;
  bool no_reply = false, ne_only = false, give_up = false;
  {
    auto* n = game->add_subcommand("new", "Start a session");
    n->add_option("--mode", mode)->check(CLI::IsMember({"plain", "strong"}));
    n->add_option("--log", log_path, "Log file to create");
    n->callback([&] {
      direct = [&] {
        const Json entry{{"op", "new"}, {"mode", mode}};
        const auto state = ops::replay({entry});
        if (!log_path.empty()) write_log(log_path, {entry}, false);
        return game_result(state);
      };
    });

    auto* m = game->add_subcommand("move", "Play E's move (and NE's reply)");
    m->add_option("--log", log_path)->required();
    m->add_option("--extra", extra, "Box of extra constraints; omit to stall");
    m->add_option("--point", point, "Point map for strong mode");
    m->add_flag("--no-reply", no_reply, "Leave NE's reply for later");
    m->add_flag("--ne", ne_only, "Play only NE's reply");
    m->add_flag("--abandon", give_up, "Abandon the session");
    m->callback([&] {
      direct = [&] {
        auto log = ops::read_log(slurp(log_path));
        GameState state = ops::replay(log);
        Json body{{"reply", !no_reply}};
        if (give_up) body["abandon"] = true;
        if (ne_only) body["player"] = "NE";
        if (!extra.empty()) body["extra"] = loose(extra);
        if (!point.empty()) body["point"] = loose(point);
        const auto entries = ops::move_entries(body);
        for (const auto& e : entries) state = ops::apply_entry(state, e);
        write_log(log_path, entries, true);
        return game_result(state);
      };
    });

    auto* p = game->add_subcommand("play", "Replay a move script");
    p->add_option("--script", log_path, "JSON-lines log")->required();
    p->callback([&] {
      op = "game.replay";
      direct = [&] { return ops::run(op, Json{{"log", ops::read_log(slurp(log_path))}}); };
    });

    auto* w = game->add_subcommand("witness", "Witness prefix phi(0..k)");
    w->add_option("--log", log_path)->required();
    w->add_option("-k", number, "Last index")->required();
    w->callback([&] {
      direct = [&] {
        const auto state = ops::replay(ops::read_log(slurp(log_path)));
        return Json{{"k", number}, {"prefix", witness_prefix(state, number)}};
      };
    });
  }

  leaf(&app, "demo", "Report on the non-F-space apparatus", "demo");

  int port = 8080;
  std::string host = "127.0.0.1", log_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);
  serve->add_option("--log-dir", log_dir, "Append session logs here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (serve->parsed()) {
    service::Server server(log_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(log_dir));
    const int bound = server.bind(host, port);
    if (bound < 0) {
      std::cerr << "error: cannot bind " << host << ":" << port << "\n";
      return 1;
    }
    running = &server;
    std::signal(SIGINT, [](int) { if (running) running->stop(); });
    std::signal(SIGTERM, [](int) { if (running) running->stop(); });
    std::cout << "listening on " << host << ":" << bound << std::endl;
    server.listen();
    return 0;
  }

  try {
    Json result;
    if (direct) {
      result = direct();
    } else {
      if (op == "pofin.eval") args = {{"expr", s1}};
      if (op == "pofin.canon") args = {{"set", loose(s1)}};
      if (op == "pofin.rel") args = {{"a", loose(s1)}, {"b", loose(s2)}};
      if (op == "map.apply") args = {{"map", loose(s1)}, {"n", number}};
      if (op == "map.image") args = {{"map", loose(s1)}, {"set", loose(s2)}};
      if (op == "map.compose") args = {{"f", loose(s1)}, {"g", loose(s2)}};
      if (op == "map.classify") args = {{"map", loose(s1)}};
      if (op == "box.normal" || op == "box.empty") args = {{"box", loose(s1)}};
      if (op == "box.member") args = {{"map", loose(s1)}, {"box", loose(s2)}};
      if (op == "box.refine") args = {{"box", loose(s1)}, {"extra", loose(s2)}};
      if (op.starts_with("scheme.")) {
        args = {{"tree", json_file(s1)}};
        if (horizon > 0) args["horizon"] = horizon;
        if (!prefix_file.empty()) args["prefix"] = json_file(prefix_file);
      }
      result = ops::run(op, args);
    }
    if (as_json) {
      std::cout << result.dump() << "\n";
    } else if (op.empty()) {
      if (result.contains("state")) {
        std::cout << ops::render_text("game.replay", result) << "\n";
      } else {
        std::cout << "witness";
        for (const auto& v : result["prefix"]) std::cout << " " << v.dump();
        std::cout << "\n";
      }
    } else if (op == "demo") {
      std::cout << result.dump(2) << "\n";
    } else {
      std::cout << ops::render_text(op, result) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    if (as_json) std::cout << Json{{"error", errc_name(e.code())}, {"detail", e.what()}}.dump() << "\n";
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
}
