#include "fspace/json.hpp"

#include "fspace/error.hpp"
#include "fspace/parse.hpp"

namespace fspace {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::invalid_argument, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Nat nat(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad("expected a natural number, got " + j.dump());
  }
  return j.get<Nat>();
}

std::vector<Nat> nat_list(const Json& j) {
  if (!j.is_array()) bad("expected a list of naturals, got " + j.dump());
  std::vector<Nat> out;
  for (const auto& v : j) out.push_back(nat(v));
  return out;
}

}  // namespace

Json to_json(const PeriodicSet& s) {
  return Json{{"m", s.modulus()}, {"r", s.residues()}, {"add", s.added()}, {"del", s.removed()}};
}

Json to_json(const ProgressionMap& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back(Json{{"a", p.a}, {"d", p.d}, {"b", p.b}, {"e", p.e}});
  Json table = Json::array();
  for (Nat n = 0; n < f.threshold(); ++n) table.push_back(Json::array({n, f.table()[n]}));
  return Json{{"pieces", std::move(pieces)}, {"table", std::move(table)}};
}

Json to_json(std::span<const SubbasicBox> constraints) {
  Json out = Json::array();
  for (const auto& c : constraints) out.push_back(Json{{"a", to_json(c.a)}, {"b", to_json(c.b)}});
  return out;
}

Json to_json(const RefinementCert& cert) { return Json(cert.assignment); }

Json to_json(const SchemeTree& tree) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& n = tree.nodes()[i];
    nodes.push_back(Json{{"level", tree.level_of(i)}, {"parent", n.parent}, {"c", to_json(n.c)}, {"d", to_json(n.d)}});
  }
  return Json{{"levels", tree.level_count()}, {"nodes", std::move(nodes)}};
}

Json to_json(const MoveRecord& move) {
  Json j{{"player", to_string(move.player)}};
  if (move.player == Player::E) {
    j["extra"] = to_json(move.extra);
    j["point"] = move.point ? to_json(*move.point) : Json(nullptr);
  }
  return j;
}

Json to_json(const GameState& state) {
  Json history = Json::array();
  for (const auto& m : state.history) history.push_back(to_json(m));
  Json chain = Json::array();
  for (const auto& link : state.chain) chain.push_back(Json{{"box", to_json(link.box)}, {"cert", to_json(link.cert)}});
  Json pending = state.pending ? Json{{"box", to_json(state.pending->box)}, {"cert", to_json(state.pending->cert)}}
                               : Json(nullptr);
  return Json{{"mode", to_string(state.mode)},
              {"status", to_string(state.status)},
              {"turn", to_string(state.turn)},
              {"rounds", state.rounds()},
              {"history", std::move(history)},
              {"chain", std::move(chain)},
              {"pending", std::move(pending)},
              {"tree", to_json(state.tree)},
              {"witness", witness_prefix(state, state.rounds())}};
}

Json to_json(const Suggestion& s) {
  return Json{{"label", s.label},
              {"extra", to_json(s.extra)},
              {"point", s.point ? to_json(*s.point) : Json(nullptr)}};
}

PeriodicSet set_from_json(const Json& j) {
  if (j.is_string()) return parse_set(j.get<std::string>());
  const Nat m = nat(field(j, "m"));
  if (m == 0) bad("modulus 0");
  for (Nat r : nat_list(field(j, "r"))) {
    if (r >= m) bad("residue " + std::to_string(r) + " is not below modulus " + std::to_string(m));
  }
  return PeriodicSet::make(m, nat_list(field(j, "r")), nat_list(field(j, "add")), nat_list(field(j, "del")));
}

ProgressionMap map_from_json(const Json& j) {
  if (j.is_string()) return parse_map(j.get<std::string>());
  std::vector<AffinePiece> pieces;
  const auto& ps = field(j, "pieces");
  if (!ps.is_array()) bad("'pieces' must be a list");
  for (const auto& p : ps) {
    pieces.push_back({nat(field(p, "a")), nat(field(p, "d")), nat(field(p, "b")), nat(field(p, "e"))});
  }
  std::map<Nat, Nat> table;
  const auto& ts = field(j, "table");
  if (!ts.is_array()) bad("'table' must be a list");
  for (const auto& row : ts) {
    if (!row.is_array() || row.size() != 2) bad("table rows are [n, value] pairs");
    table[nat(row[0])] = nat(row[1]);
  }
  return ProgressionMap::from_pieces(pieces, table);
}

std::vector<SubbasicBox> box_from_json(const Json& j) {
  if (j.is_string()) return parse_box(j.get<std::string>());
  if (!j.is_array()) bad("a box is a list of {a, b} constraints");
  std::vector<SubbasicBox> out;
  for (const auto& c : j) out.push_back({set_from_json(field(c, "a")), set_from_json(field(c, "b"))});
  return out;
}

SchemeTree tree_from_json(const Json& j) {
  const Nat levels = nat(field(j, "levels"));
  const auto& nodes = field(j, "nodes");
  if (!nodes.is_array()) bad("'nodes' must be a list");
  std::vector<std::vector<SchemeNode>> by_level(levels);
  Nat last = 0;
  for (const auto& n : nodes) {
    const Nat level = nat(field(n, "level"));
    if (level >= levels) bad("node level " + std::to_string(level) + " out of range");
    if (level < last) bad("nodes must be listed level by level");
    last = level;
    const auto& parent = field(n, "parent");
    if (!parent.is_number_integer()) bad("'parent' must be an integer");
    by_level[level].push_back({parent.get<int>(), set_from_json(field(n, "c")), set_from_json(field(n, "d"))});
  }
  SchemeTree tree;
  for (auto& level : by_level) tree.add_level(std::move(level));
  return tree;
}

}  // namespace fspace
