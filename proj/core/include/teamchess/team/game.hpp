#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamchess/chess/game.hpp"
#include "teamchess/engines/engine.hpp"
#include "teamchess/team/manager.hpp"

namespace teamchess::team {

enum class Chooser : std::uint8_t { Manager, RandomTiebreak };

std::string to_string(Chooser c);
Chooser chooser_from_string(const std::string& s);

struct DisagreementRecord {
  std::string game_id;
  int ply = 0;
  std::string fen;
  chess::Move a1;
  chess::Move a2;
  MemberId chosen = MemberId::One;
  Chooser chooser = Chooser::Manager;

  const chess::Move& chosen_move() const { return chosen == MemberId::One ? a1 : a2; }
  friend bool operator==(const DisagreementRecord&, const DisagreementRecord&) = default;
};

struct TeamMoveResult {
  chess::Move move;
  std::optional<DisagreementRecord> disagreement;  // game_id left empty
};

/// Asks both members; consults the manager only when they disagree. Illegal
/// recommendations raise ProtocolError.
TeamMoveResult team_move(engines::Engine& m1, engines::Engine& m2, Manager& manager, const chess::BoardState& s,
                         int ply, Rng& rng);

/// One side of a game: a lone engine or a managed team.
class Side {
 public:
  virtual ~Side() = default;
  virtual std::string name() const = 0;
  virtual void new_game(std::uint64_t game_seed) = 0;
  /// Appends any disagreement to `log`.
  virtual chess::Move choose(const chess::BoardState& s, int ply, std::vector<DisagreementRecord>& log) = 0;
};

class SoloSide final : public Side {
 public:
  explicit SoloSide(engines::Engine& engine) : engine_(engine) {}
  std::string name() const override { return engine_.name(); }
  /// Seeds the engine exactly as TeamSide seeds member 1.
  void new_game(std::uint64_t game_seed) override { engine_.new_game(derive_seed(game_seed, {1})); }
  chess::Move choose(const chess::BoardState& s, int ply, std::vector<DisagreementRecord>& log) override;

 private:
  engines::Engine& engine_;
};

class TeamSide final : public Side {
 public:
  TeamSide(engines::Engine& m1, engines::Engine& m2, Manager& manager) : m1_(m1), m2_(m2), manager_(manager) {}
  std::string name() const override;
  void new_game(std::uint64_t game_seed) override;
  chess::Move choose(const chess::BoardState& s, int ply, std::vector<DisagreementRecord>& log) override;

 private:
  engines::Engine& m1_;
  engines::Engine& m2_;
  Manager& manager_;
  Rng rng_{0};
};

/// Material adjudication after `max_plies` plies from the setup's start:
/// the side ahead by at least `material_margin` pawns wins, otherwise draw.
struct Adjudication {
  int max_plies = 40;
  int material_margin = 1;
  friend bool operator==(const Adjudication&, const Adjudication&) = default;
};

struct GameSetup {
  chess::BoardState start = chess::BoardState::initial();
  /// Hashes of positions before `start` in the same game.
  std::vector<std::uint64_t> history;
  int start_ply = 0;
  chess::Color team_color = chess::Color::White;
  std::uint64_t seed = 0;
  std::string game_id;
  std::size_t opening_index = 0;
  int ply_cap = chess::kDefaultPlyCap;
  std::optional<Adjudication> adjudication;
  /// Played by the team instead of asking it, on the first ply.
  std::optional<chess::Move> forced_first_move;
};

struct GameRecord {
  std::string game_id;
  std::size_t opening_index = 0;
  std::string opening_fen;
  chess::Color team_color = chess::Color::White;
  std::uint64_t seed = 0;
  std::string white;
  std::string black;
  std::vector<chess::Move> moves;
  std::vector<DisagreementRecord> disagreements;
  /// Team perspective; absent for aborted games.
  std::optional<chess::Outcome> outcome;
  std::optional<std::string> error;

  bool aborted() const { return error.has_value(); }
  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// Alternates team and adversary until the game ends. Engine failures abort
/// the game and are recorded in `error`.
GameRecord play_game(Side& team, Side& adversary, const GameSetup& setup);

GameRecord play_team_game(engines::Engine& m1, engines::Engine& m2, Manager& manager, engines::Engine& adversary,
                          const GameSetup& setup);

GameRecord play_solo_game(engines::Engine& engine, engines::Engine& adversary, const GameSetup& setup);

/// Per-game seed: the master seed mixed with (opening index, team color).
std::uint64_t game_seed(std::uint64_t master_seed, std::size_t opening_index, chess::Color team_color);

}  // namespace teamchess::team
