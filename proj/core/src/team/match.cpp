#include "teamchess/team/match.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "teamchess/chess/fen.hpp"
#include "teamchess/engines/pool.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/parallel.hpp"

namespace teamchess::team {

using chess::Color;

MatchStatistics MatchStatistics::from_scores(std::vector<double> scores) {
  MatchStatistics m;
  for (double x : scores) {
    if (x == 1.0) ++m.wins;
    else if (x == 0.5) ++m.draws;
    else if (x == 0.0) ++m.losses;
    else throw ContractError("per-game score must be 0, 0.5 or 1");
  }
  m.per_game_scores = std::move(scores);
  const int n = m.games();
  if (n == 0) return m;
  m.wdl = (m.wins + 0.5 * m.draws) / n;
  if (n > 1) {
    double ss = 0.0;
    for (double x : m.per_game_scores) ss += (x - m.wdl) * (x - m.wdl);
    m.sem = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return m;
}

MatchStatistics aggregate(std::vector<GameRecord> games) {
  std::sort(games.begin(), games.end(), [](const GameRecord& a, const GameRecord& b) {
    return std::pair(a.opening_index, a.team_color) < std::pair(b.opening_index, b.team_color);
  });
  std::vector<double> scores;
  for (const auto& g : games)
    if (!g.aborted() && g.outcome) scores.push_back(g.outcome->score());
  return MatchStatistics::from_scores(std::move(scores));
}

void enforce_failure_budget(std::size_t aborted, std::size_t total, double budget) {
  if (total == 0) return;
  if (static_cast<double>(aborted) > budget * static_cast<double>(total))
    throw FailureBudgetExceeded(std::to_string(aborted) + " of " + std::to_string(total) +
                                " games aborted on engine failures");
}

namespace {

std::string game_id(const std::string& label, std::size_t opening, Color c) {
  return label + ":" + std::to_string(opening) + (c == Color::White ? "w" : "b");
}

template <typename PlayFn>
MatchResult run_games(std::span<const chess::BoardState> openings, std::uint64_t seed, const MatchOptions& options,
                      PlayFn&& play) {
  if (openings.empty()) throw ContractError("a match needs at least one opening");
  const std::size_t n = openings.size() * 2;
  MatchResult result;
  result.games.resize(n);
  parallel_for(n, options.workers, [&](std::size_t i) {
    GameSetup setup;
    setup.opening_index = i / 2;
    setup.team_color = i % 2 == 0 ? Color::White : Color::Black;
    setup.start = openings[setup.opening_index];
    setup.seed = game_seed(seed, setup.opening_index, setup.team_color);
    setup.game_id = game_id(options.label, setup.opening_index, setup.team_color);
    setup.ply_cap = options.ply_cap;
    setup.adjudication = options.adjudication;
    try {
      result.games[i] = play(setup);
    } catch (const ProtocolError& e) {
      GameRecord g;
      g.game_id = setup.game_id;
      g.opening_index = setup.opening_index;
      g.opening_fen = chess::format_fen(setup.start);
      g.team_color = setup.team_color;
      g.seed = setup.seed;
      g.error = e.what();
      result.games[i] = std::move(g);
    }
  });
  result.aborted = static_cast<std::size_t>(
      std::count_if(result.games.begin(), result.games.end(), [](const GameRecord& g) { return g.aborted(); }));
  result.stats = aggregate(result.games);
  enforce_failure_budget(result.aborted, n, options.failure_budget);
  return result;
}

}  // namespace

MatchResult run_match(const TeamFactories& team, const engines::EngineFactory& adversary,
                      std::span<const chess::BoardState> openings, std::uint64_t seed, const MatchOptions& options) {
  engines::EnginePool p1(team.member1), p2(team.member2), pa(adversary);
  std::string team_name, adversary_name;
  std::once_flag names;
  MatchResult r = run_games(openings, seed, options, [&](const GameSetup& setup) {
    auto m1 = p1.take();
    auto m2 = p2.take();
    auto adv = pa.take();
    auto manager = team.manager();
    TeamSide side(*m1, *m2, *manager);
    SoloSide opp(*adv);
    std::call_once(names, [&] {
      team_name = side.name();
      adversary_name = opp.name();
    });
    GameRecord g = play_game(side, opp, setup);
    if (!g.aborted()) {
      p1.give_back(std::move(m1));
      p2.give_back(std::move(m2));
      pa.give_back(std::move(adv));
    }
    return g;
  });
  r.team_name = team_name;
  r.adversary_name = adversary_name;
  return r;
}

MatchResult solo_baseline(const engines::EngineFactory& engine, const engines::EngineFactory& adversary,
                          std::span<const chess::BoardState> openings, std::uint64_t seed,
                          const MatchOptions& options) {
  engines::EnginePool pe(engine), pa(adversary);
  std::string name, adversary_name;
  std::once_flag names;
  MatchResult r = run_games(openings, seed, options, [&](const GameSetup& setup) {
    auto e = pe.take();
    auto adv = pa.take();
    SoloSide side(*e);
    SoloSide opp(*adv);
    std::call_once(names, [&] {
      name = side.name();
      adversary_name = opp.name();
    });
    GameRecord g = play_game(side, opp, setup);
    if (!g.aborted()) {
      pe.give_back(std::move(e));
      pa.give_back(std::move(adv));
    }
    return g;
  });
  r.team_name = name;
  r.adversary_name = adversary_name;
  return r;
}

}  // namespace teamchess::team
