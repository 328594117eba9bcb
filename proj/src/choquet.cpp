#include "fspace/choquet.hpp"

#include "fspace/error.hpp"

namespace fspace {

GameState new_game(GameMode mode) {
  GameState s;
  s.mode = mode;
  s.chain.push_back({BasicBox::full(), {}});
  append_level(s.tree, s.chain.front(), nullptr);
  s.witness.extend(s.tree, 1);
  return s;
}

GameState move_E(const GameState& state, std::span<const SubbasicBox> extra,
                 const std::optional<ProgressionMap>& point) {
  if (state.status != GameStatus::ongoing) throw Error(Errc::illegal_move, "game was abandoned");
  if (state.turn != Player::E) throw Error(Errc::wrong_turn, "it is NE's turn");
  if (state.mode == GameMode::strong && !point) {
    throw Error(Errc::illegal_move, "strong mode: E must declare a point");
  }
  Refinement refined;
  try {
    refined = refine(state.current_box(), extra);
  } catch (const Error& e) {
    if (e.code() != Errc::empty_box) throw;
    throw Error(Errc::illegal_move, e.what());
  }
  if (point && !member(*point, refined.box)) {
    throw Error(Errc::illegal_move, "declared point " + to_string(*point) +
                                        " is not a member of the refined box " +
                                        to_string(refined.box));
  }
  GameState next = state;
  next.history.push_back({Player::E, {extra.begin(), extra.end()}, point});
  next.pending = ChainLink{std::move(refined.box), std::move(refined.cert)};
  next.turn = Player::NE;
  return next;
}

GameState move_NE(const GameState& state) {
  if (state.status != GameStatus::ongoing) throw Error(Errc::illegal_move, "game was abandoned");
  if (state.turn != Player::NE || !state.pending) throw Error(Errc::wrong_turn, "it is E's turn");
  GameState next = state;
  // NE's reply is E's own box: basic, normal form, non-empty, and it contains
  // E's point whenever E's box does.
  append_level(next.tree, *next.pending, &next.current_box());
  next.chain.push_back(std::move(*next.pending));
  next.pending.reset();
  next.history.push_back({Player::NE, {}, std::nullopt});
  next.witness.extend(next.tree, next.rounds() + 1);
  next.turn = Player::E;
  return next;
}

GameState abandon(const GameState& state) {
  GameState next = state;
  next.status = GameStatus::abandoned;
  return next;
}

std::vector<Nat> witness_prefix(const GameState& state, Nat k) {
  if (k > state.rounds()) {
    throw Error(Errc::not_deep_enough, "k = " + std::to_string(k) + " exceeds the " +
                                           std::to_string(state.rounds()) + " completed rounds");
  }
  const auto memo = state.witness.memo();
  return {memo.begin(), memo.begin() + static_cast<std::ptrdiff_t>(k + 1)};
}

namespace {

// The two halves of `s` obtained by splitting each residue class once more.
std::pair<PeriodicSet, PeriodicSet> halves(const PeriodicSet& s) {
  const Nat m = 2 * s.modulus();
  std::vector<Nat> lower, upper;
  for (std::size_t i = 0; i < s.residues().size(); ++i) {
    const Nat r = s.residues()[i];
    (i % 2 == 0 ? lower : upper).push_back(r);
    (i % 2 == 0 ? upper : lower).push_back(r + s.modulus());
  }
  return {s & PeriodicSet::make(m, lower, {}, {}), s & PeriodicSet::make(m, upper, {}, {})};
}

}  // namespace

std::vector<Suggestion> suggestions(const GameState& state) {
  std::vector<Suggestion> out;
  if (state.status != GameStatus::ongoing || state.turn != Player::E) return out;
  const auto& box = state.current_box();
  auto offer = [&](std::string label, std::vector<SubbasicBox> extra) {
    try {
      auto refined = refine(box, extra);
      Suggestion s{std::move(label), std::move(extra), std::nullopt};
      if (state.mode == GameMode::strong) s.point = is_empty(refined.box).witness;
      out.push_back(std::move(s));
    } catch (const Error&) {
    }
  };
  for (std::size_t i = 0; i < box.constraints.size(); ++i) {
    const auto& c = box.constraints[i];
    const auto [a_low, a_high] = halves(c.a);
    const auto [b_low, b_high] = halves(c.b);
    const std::string part = "part " + std::to_string(i);
    offer("split " + part + " into " + to_string(a_low) + " / " + to_string(a_high),
          {{a_low, c.b}});
    offer("shrink target of " + part + " to " + to_string(b_low), {{c.a, b_low}});
    offer("split " + part + " and send " + to_string(a_low) + " into " + to_string(b_high),
          {{a_low, b_high}});
  }
  offer("stall", {});
  return out;
}

const char* to_string(GameMode mode) { return mode == GameMode::plain ? "plain" : "strong"; }
const char* to_string(Player player) { return player == Player::E ? "E" : "NE"; }
const char* to_string(GameStatus status) {
  return status == GameStatus::ongoing ? "ongoing" : "abandoned";
}

GameMode parse_mode(const std::string& text) {
  if (text == "plain") return GameMode::plain;
  if (text == "strong") return GameMode::strong;
  throw Error(Errc::invalid_argument, "mode must be plain or strong, got '" + text + "'");
}

}  // namespace fspace
