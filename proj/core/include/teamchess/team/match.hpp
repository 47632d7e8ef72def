#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamchess/engines/engine.hpp"
#include "teamchess/team/game.hpp"
#include "teamchess/team/manager.hpp"

namespace teamchess::team {

struct MatchStatistics {
  int wins = 0;
  int draws = 0;
  int losses = 0;
  std::vector<double> per_game_scores;
  double wdl = 0.0;
  /// Standard error of the mean per-game score (sample standard deviation).
  double sem = 0.0;

  int games() const { return wins + draws + losses; }
  static MatchStatistics from_scores(std::vector<double> scores);
  friend bool operator==(const MatchStatistics&, const MatchStatistics&) = default;
};

struct TeamFactories {
  engines::EngineFactory member1;
  engines::EngineFactory member2;
  ManagerFactory manager;
};

struct MatchOptions {
  unsigned workers = 1;
  int ply_cap = chess::kDefaultPlyCap;
  std::optional<Adjudication> adjudication;
  /// Fraction of aborted games above which the match fails.
  double failure_budget = 0.01;
  /// Prefix for game ids.
  std::string label = "match";
};

struct MatchResult {
  std::string team_name;
  std::string adversary_name;
  MatchStatistics stats;
  /// Sorted by (opening index, team color), aborted games included.
  std::vector<GameRecord> games;
  std::size_t aborted = 0;
};

/// Folds completed games in (opening, color) order; aborted games are skipped.
MatchStatistics aggregate(std::vector<GameRecord> games);

/// Every opening from both colors. Throws FailureBudgetExceeded when too many
/// games abort.
MatchResult run_match(const TeamFactories& team, const engines::EngineFactory& adversary,
                      std::span<const chess::BoardState> openings, std::uint64_t seed, const MatchOptions& options = {});

MatchResult solo_baseline(const engines::EngineFactory& engine, const engines::EngineFactory& adversary,
                          std::span<const chess::BoardState> openings, std::uint64_t seed,
                          const MatchOptions& options = {});

/// Throws FailureBudgetExceeded when aborted / total exceeds `budget`.
void enforce_failure_budget(std::size_t aborted, std::size_t total, double budget);

}  // namespace teamchess::team
