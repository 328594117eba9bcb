#pragma once

/**
 * @file choquet.hpp
 * @brief The (strong) Choquet game on the self-map space, with NE playing
 * the 1-tactic "answer with E's own certified basic box".
 *
 * E moves by naming extra subbasic constraints; the engine refines NE's
 * previous box by them and keeps the refinement certificate. Each NE reply
 * appends one level to the scheme tree and finalizes one more value of the
 * witness injection, whose extension lies in every box of the chain.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspace/compact_open.hpp"
#include "fspace/progression_map.hpp"
#include "fspace/schemes.hpp"

namespace fspace {

enum class GameMode { plain, strong };
enum class Player { E, NE };
enum class GameStatus { ongoing, abandoned };

struct MoveRecord {
  Player player = Player::E;
  std::vector<SubbasicBox> extra;       ///< E only
  std::optional<ProgressionMap> point;  ///< E only, strong mode
};

struct GameState {
  GameMode mode = GameMode::plain;
  GameStatus status = GameStatus::ongoing;
  Player turn = Player::E;
  std::vector<MoveRecord> history;
  /// NE's boxes; chain[0] is the whole space.
  std::vector<ChainLink> chain;
  /// E's certified refinement awaiting NE's reply.
  std::optional<ChainLink> pending;
  SchemeTree tree;
  LazyInjection witness;

  std::size_t rounds() const noexcept { return chain.size() - 1; }
  const BasicBox& current_box() const { return chain.back().box; }
};

GameState new_game(GameMode mode);

/// Throws Errc::wrong_turn, or Errc::illegal_move with the reason; the input
/// state is never modified.
GameState move_E(const GameState& state, std::span<const SubbasicBox> extra,
                 const std::optional<ProgressionMap>& point = std::nullopt);

GameState move_NE(const GameState& state);

GameState abandon(const GameState& state);

/// phi(0), ..., phi(k); requires k <= rounds().
std::vector<Nat> witness_prefix(const GameState& state, Nat k);

struct Suggestion {
  std::string label;
  std::vector<SubbasicBox> extra;
  std::optional<ProgressionMap> point;
};

/// Legal shrinks of the current box: split one a-set by a residue class,
/// shrink one b-set, or both. In strong mode each carries a member point.
std::vector<Suggestion> suggestions(const GameState& state);

const char* to_string(GameMode mode);
const char* to_string(Player player);
const char* to_string(GameStatus status);
GameMode parse_mode(const std::string& text);

}  // namespace fspace
