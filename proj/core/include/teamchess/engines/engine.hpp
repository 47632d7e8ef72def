#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "teamchess/chess/board.hpp"
#include "teamchess/uci/score.hpp"

namespace teamchess::engines {

/// A move recommender with its own evaluation. Instances are owned by one
/// game at a time.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual std::string name() const = 0;

  /// `ply` is the game ply; stochastic engines mix it into their seed.
  /// Must not be called at terminal positions.
  virtual chess::Move recommend(const chess::BoardState& s, int ply) = 0;

  /// Score of `s` from its side to move's perspective.
  virtual uci::EvalScore evaluate(const chess::BoardState& s) = 0;

  /// Called before each game. Stochastic engines derive their stream from
  /// `game_seed`; UCI engines reset their state.
  virtual void new_game(std::uint64_t game_seed) { (void)game_seed; }

  /// Same input always yields the same recommendation.
  virtual bool deterministic() const = 0;
};

using EngineFactory = std::function<std::unique_ptr<Engine>()>;

}  // namespace teamchess::engines
