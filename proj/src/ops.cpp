#include "fspace/ops.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "fspace/error.hpp"
#include "fspace/parse.hpp"
#include "fspace/witnesses.hpp"

namespace fspace::ops {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_argument, what); }

const Json& arg(const Json& args, const char* key) {
  if (!args.is_object() || !args.contains(key)) bad(std::string("missing argument '") + key + "'");
  return args.at(key);
}

Nat nat_arg(const Json& args, const char* key) {
  const Json& v = arg(args, key);
  if (v.is_number_unsigned()) return v.get<Nat>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<Nat>();
  bad(std::string("argument '") + key + "' must be a natural number");
}

Nat horizon_arg(const Json& args) {
  return args.is_object() && args.contains("horizon") ? nat_arg(args, "horizon") : default_horizon();
}

PeriodicSet set_arg(const Json& args, const char* key) { return set_from_json(arg(args, key)); }
ProgressionMap map_arg(const Json& args, const char* key) { return map_from_json(arg(args, key)); }
std::vector<SubbasicBox> box_arg(const Json& args, const char* key) { return box_from_json(arg(args, key)); }

Json violations_json(const std::vector<SchemeViolation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    out.push_back(Json{{"clause", v.clause}, {"node", v.node}, {"other", v.other}, {"detail", v.detail}});
  }
  return out;
}

using Handler = std::function<Json(const Json&)>;

const std::map<std::string, Handler>& table() {
  static const std::map<std::string, Handler> ops{
      {"pofin.eval", [](const Json& a) { return to_json(set_arg(a, "expr")); }},
      {"pofin.canon", [](const Json& a) { return Json{{"text", to_string(set_arg(a, "set"))}}; }},
      {"pofin.rel",
       [](const Json& a) {
         const auto x = set_arg(a, "a"), y = set_arg(a, "b");
         return Json{{"subset", almost_subset(x, y)},
                     {"superset", almost_subset(y, x)},
                     {"equal", almost_equal(x, y)},
                     {"disjoint", almost_disjoint(x, y)}};
       }},
      {"map.apply", [](const Json& a) { return Json{{"value", map_arg(a, "map")(nat_arg(a, "n"))}}; }},
      {"map.image", [](const Json& a) { return to_json(image(map_arg(a, "map"), set_arg(a, "set"))); }},
      {"map.compose", [](const Json& a) { return to_json(compose(map_arg(a, "f"), map_arg(a, "g"))); }},
      {"map.classify",
       [](const Json& a) {
         const auto flags = classify(map_arg(a, "map"));
         return Json{{"injective", flags.injective}, {"finite_to_one", flags.finite_to_one}};
       }},
      {"box.normal", [](const Json& a) { return to_json(normalize(box_arg(a, "box"))); }},
      {"box.empty",
       [](const Json& a) {
         const auto e = is_empty(normalize(box_arg(a, "box")));
         Json out{{"empty", e.empty}};
         if (e.offending) out["offending"] = *e.offending;
         if (e.witness) out["witness"] = to_json(*e.witness);
         return out;
       }},
      {"box.member",
       [](const Json& a) { return Json{{"member", member(map_arg(a, "map"), box_arg(a, "box"))}}; }},
      {"box.refine",
       [](const Json& a) {
         const auto r = refine(normalize(box_arg(a, "box")), box_arg(a, "extra"));
         return Json{{"box", to_json(r.box)}, {"cert", to_json(r.cert)}};
       }},
      {"scheme.validate",
       [](const Json& a) { return Json{{"violations", violations_json(validate(tree_from_json(arg(a, "tree"))))}}; }},
      {"scheme.repair", [](const Json& a) { return to_json(repair(tree_from_json(arg(a, "tree")))); }},
      {"scheme.build",
       [](const Json& a) {
         const auto tree = tree_from_json(arg(a, "tree"));
         auto phi = build_injection(tree);
         const auto p = phi.extend(tree, horizon_arg(a));
         return Json{{"prefix", std::vector<Nat>(p.begin(), p.end())}};
       }},
      {"scheme.verify",
       [](const Json& a) {
         const auto tree = tree_from_json(arg(a, "tree"));
         const Nat horizon = horizon_arg(a);
         if (a.contains("prefix") && !a["prefix"].is_null()) {
           std::vector<Nat> prefix;
           for (const auto& v : a["prefix"]) {
             if (!v.is_number_unsigned()) bad("prefix entries must be natural numbers");
             prefix.push_back(v.get<Nat>());
           }
           return Json{{"ok", verify_star(tree, prefix, horizon)}};
         }
         auto phi = build_injection(tree);
         return Json{{"ok", verify_star(tree, phi, horizon)}};
       }},
      {"game.replay",
       [](const Json& a) {
         const Json& log = arg(a, "log");
         if (!log.is_array()) bad("log must be a list of entries");
         const auto state = replay(std::vector<Json>(log.begin(), log.end()));
         return Json{{"state", to_json(state)}, {"witness", witness_prefix(state, state.rounds())}};
       }},
      {"demo", [](const Json&) { return demo_report(); }},
  };
  return ops;
}

std::string join_nats(const Json& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : " ") + x.dump();
  return out;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : table()) out.push_back(name);
    return out;
  }();
  return all;
}

Json run(const std::string& op, const Json& args) {
  const auto it = table().find(op);
  if (it == table().end()) throw Error(Errc::not_found, "unknown operation '" + op + "'");
  try {
    return it->second(args);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed arguments: ") + e.what());
  }
}

std::string render_text(const std::string& op, const Json& r) {
  if (op == "pofin.eval" || op == "map.image") return to_string(set_from_json(r));
  if (op == "pofin.canon") return r["text"].get<std::string>();
  if (op == "map.compose") return to_string(map_from_json(r));
  if (op == "map.apply") return r["value"].dump();
  if (op == "box.normal") return to_string(box_from_json(r));
  if (op == "box.empty") {
    if (r["empty"].get<bool>()) return "empty";
    return "nonempty, witness " + to_string(map_from_json(r["witness"]));
  }
  if (op == "box.member") return r["member"].get<bool>() ? "member" : "not a member";
  if (op == "box.refine") return to_string(box_from_json(r["box"])) + "\ncert " + r["cert"].dump();
  if (op == "scheme.validate") {
    if (r["violations"].empty()) return "valid";
    std::string out;
    for (const auto& v : r["violations"]) {
      out += v["clause"].get<std::string>() + ": " + v["detail"].get<std::string>() + "\n";
    }
    out.pop_back();
    return out;
  }
  if (op == "scheme.build") return join_nats(r["prefix"]);
  if (op == "scheme.verify") return r["ok"].get<bool>() ? "ok" : "violated";
  if (op == "game.replay") {
    return "rounds " + r["state"]["rounds"].dump() + ", turn " + r["state"]["turn"].get<std::string>() +
           "\nwitness " + join_nats(r["witness"]);
  }
  if (r.is_object()) {
    std::string out;
    for (const auto& [k, v] : r.items()) out += k + " " + v.dump() + "\n";
    if (!out.empty()) out.pop_back();
    return out;
  }
  return r.dump();
}

GameState apply_entry(const GameState& state, const Json& entry) {
  const std::string op = arg(entry, "op").get<std::string>();
  if (op == "E") {
    std::optional<ProgressionMap> point;
    if (entry.contains("point") && !entry["point"].is_null()) point = map_from_json(entry["point"]);
    const auto extra = entry.contains("extra") ? box_from_json(entry["extra"]) : std::vector<SubbasicBox>{};
    return move_E(state, extra, point);
  }
  if (op == "NE") return move_NE(state);
  if (op == "abandon") return abandon(state);
  if (op == "new") return state;
  bad("unknown log entry '" + op + "'");
}

GameState replay(const std::vector<Json>& log) {
  try {
    if (log.empty() || arg(log.front(), "op") != "new") bad("a log starts with a 'new' entry");
    const Json& mode = log.front().contains("mode") ? log.front()["mode"] : Json("plain");
    GameState state = new_game(parse_mode(mode.get<std::string>()));
    for (std::size_t i = 1; i < log.size(); ++i) {
      if (log[i].value("op", "") == "new") bad("'new' may only start a log");
      state = apply_entry(state, log[i]);
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed log entry: ") + e.what());
  }
}

std::vector<Json> read_log(const std::string& jsonl) {
  std::vector<Json> out;
  std::istringstream in(jsonl);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const nlohmann::json::parse_error&) {
      bad("log line " + std::to_string(n) + " is not JSON");
    }
  }
  return out;
}

std::vector<Json> move_entries(const Json& body) {
  if (!body.is_object()) bad("a move is a JSON object");
  if (body.value("abandon", false)) return {Json{{"op", "abandon"}}};
  if (body.value("player", std::string("E")) == "NE") return {Json{{"op", "NE"}}};
  Json e{{"op", "E"}, {"extra", to_json(body.contains("extra") ? box_from_json(body["extra"]) : std::vector<SubbasicBox>{})}};
  if (body.contains("point") && !body["point"].is_null()) e["point"] = to_json(map_from_json(body["point"]));
  std::vector<Json> out{std::move(e)};
  if (body.value("reply", true)) out.push_back(Json{{"op", "NE"}});
  return out;
}

Json demo_report() {
  const Nat modulus = 64;
  const auto app = ParityApparatus::residues(modulus);

  Json table = Json::array();
  bool all_disjoint = true;
  for (std::size_t bound : {2, 4, 8, 16}) {
    const auto r = parity_disjoint_upto(app, bound);
    all_disjoint = all_disjoint && r.disjoint;
    table.push_back(Json{{"bound", bound},
                         {"pairs", r.pairs_checked},
                         {"disjoint", r.disjoint},
                         {"offending", r.offending ? Json(*r.offending) : Json(nullptr)}});
  }

  const auto id = ProgressionMap::identity();
  const Json identity{{"bound", 16},
                      {"even", parity_member(id, app, Parity::even, 16)},
                      {"odd", parity_member(id, app, Parity::odd, 16)}};

  std::vector<std::size_t> evens;
  for (std::size_t k = 0; k < 32; k += 2) evens.push_back(k);
  Json witnesses = Json::array();
  for (std::size_t n = 0; n <= 8; ++n) {
    // C_j = union of the parts with index j mod N: a partition of omega.
    std::vector<PeriodicSet> v(n);
    for (std::size_t k = 0; k < modulus; ++k) {
      if (n > 0) v[k % n] = v[k % n] | app.parts[k];
    }
    const auto w = approach_identity_witness(v, app, evens);
    Json sets = Json::array();
    for (const auto& c : v) sets.push_back(to_string(c));
    witnesses.push_back(Json{{"N", n},
                             {"v_parts", std::move(sets)},
                             {"from", w.from},
                             {"to", w.to},
                             {"map", to_json(w.map)},
                             {"certificates",
                              {{"identity_nbhd", member(w.map, identity_nbhd(v))},
                               {"disjunct", member(w.map, disjunct(app, w.from, w.to))},
                               {"U_E", parity_member(w.map, app, Parity::even, 32)},
                               {"U_O", parity_member(w.map, app, Parity::odd, 32)}}}});
  }

  return Json{{"apparatus", {{"modulus", modulus}, {"parts", app.size()}}},
              {"disjointness", {{"disjoint", all_disjoint}, {"table", std::move(table)}}},
              {"identity", identity},
              {"witnesses", std::move(witnesses)}};
}

}  // namespace fspace::ops
