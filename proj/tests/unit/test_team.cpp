#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/engines/registry.hpp"
#include "teamchess/team/game.hpp"
#include "teamchess/team/match.hpp"
#include "teamchess/team/records.hpp"
#include "teamchess/util/errors.hpp"

using namespace teamchess;
using namespace teamchess::team;
using chess::BoardState;
using chess::Color;
using fixtures::mv;

namespace {

class FnEngine final : public engines::Engine {
 public:
  explicit FnEngine(std::function<chess::Move(const BoardState&, int)> fn, std::string name = "fn")
      : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  chess::Move recommend(const BoardState& s, int ply) override { return fn_(s, ply); }
  uci::EvalScore evaluate(const BoardState&) override { return uci::EvalScore::centipawns(0); }
  bool deterministic() const override { return true; }

 private:
  std::function<chess::Move(const BoardState&, int)> fn_;
  std::string name_;
};

class CountingManager final : public Manager {
 public:
  explicit CountingManager(std::optional<MemberId> answer) : answer_(answer) {}
  std::string name() const override { return "counting"; }
  std::optional<MemberId> decide(const DecisionContext& ctx) override {
    ++calls;
    EXPECT_TRUE(ctx.recommendations.has_value());
    EXPECT_NE(ctx.recommendations->first, ctx.recommendations->second);
    return answer_;
  }
  int calls = 0;

 private:
  std::optional<MemberId> answer_;
};

engines::EngineFactory builtin(const std::string& uri) { return engines::make_engine_factory({uri}); }

ManagerFactory constant(MemberId k) {
  return [k] { return std::make_unique<ConstantManager>(k); };
}

std::vector<BoardState> openings(std::size_t n) {
  auto all = fixtures::bundled_openings();
  all.resize(std::min(n, all.size()));
  return all;
}

const std::string kL = "builtin:alphabeta?depth=2&profile=lstyle";
const std::string kM = "builtin:alphabeta?depth=2&profile=mstyle";
const std::string kAdv = "builtin:alphabeta?depth=1&profile=neutral";

}  // namespace

TEST(TeamMove, AgreementSkipsManager) {
  FnEngine a([](const BoardState&, int) { return mv("e2e4"); });
  FnEngine b([](const BoardState&, int) { return mv("e2e4"); });
  CountingManager manager(MemberId::Two);
  Rng rng(1);
  const auto r = team_move(a, b, manager, BoardState::initial(), 0, rng);
  EXPECT_EQ(r.move, mv("e2e4"));
  EXPECT_FALSE(r.disagreement.has_value());
  EXPECT_EQ(manager.calls, 0);
}

TEST(TeamMove, ManagerArbitratesDisagreement) {
  FnEngine a([](const BoardState&, int) { return mv("d2d4"); });
  FnEngine b([](const BoardState&, int) { return mv("e2e4"); });
  CountingManager manager(MemberId::Two);
  Rng rng(1);
  const auto r = team_move(a, b, manager, BoardState::initial(), 7, rng);
  EXPECT_EQ(r.move, mv("e2e4"));
  ASSERT_TRUE(r.disagreement.has_value());
  EXPECT_EQ(r.disagreement->chosen, MemberId::Two);
  EXPECT_EQ(r.disagreement->chooser, Chooser::Manager);
  EXPECT_EQ(r.disagreement->a1, mv("d2d4"));
  EXPECT_EQ(r.disagreement->ply, 7);
  EXPECT_EQ(r.disagreement->fen, chess::kStartFen);
  EXPECT_EQ(manager.calls, 1);
}

TEST(TeamMove, IndifferenceIsSeededCoinFlip) {
  FnEngine a([](const BoardState&, int) { return mv("d2d4"); });
  FnEngine b([](const BoardState&, int) { return mv("e2e4"); });
  RandomManager manager;
  int twos = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng r1(seed), r2(seed);
    const auto x = team_move(a, b, manager, BoardState::initial(), 0, r1);
    const auto y = team_move(a, b, manager, BoardState::initial(), 0, r2);
    EXPECT_EQ(x.move, y.move);
    EXPECT_EQ(x.disagreement->chooser, Chooser::RandomTiebreak);
    twos += x.disagreement->chosen == MemberId::Two;
  }
  EXPECT_GT(twos, 60);
  EXPECT_LT(twos, 140);
}

TEST(TeamMove, IllegalRecommendationIsProtocolError) {
  FnEngine a([](const BoardState&, int) { return mv("e2e5"); });
  FnEngine b([](const BoardState&, int) { return mv("e2e4"); });
  RandomManager manager;
  Rng rng(1);
  EXPECT_THROW(team_move(a, b, manager, BoardState::initial(), 0, rng), ProtocolError);

  engines::BuiltinEngine adv(engines::parse_builtin_uri(kAdv));
  GameSetup setup;
  setup.game_id = "g";
  const GameRecord g = play_team_game(a, b, manager, adv, setup);
  EXPECT_TRUE(g.aborted());
  EXPECT_FALSE(g.outcome.has_value());
  EXPECT_NE(g.error->find("illegal"), std::string::npos);
}

TEST(Members, ManagerIds) {
  EXPECT_EQ(member_from_int(1), MemberId::One);
  EXPECT_EQ(to_int(MemberId::Two), 2);
  EXPECT_EQ(other(MemberId::One), MemberId::Two);
  EXPECT_THROW(member_from_int(3), ContractError);
  EXPECT_THROW(member_from_int(0), ContractError);
}

TEST(Game, AgreementClosure) {
  const auto ops = openings(25);
  engines::BuiltinEngine m1(engines::parse_builtin_uri(kL)), m2(engines::parse_builtin_uri(kL)),
      solo(engines::parse_builtin_uri(kL)), adv(engines::parse_builtin_uri(kAdv));
  RandomManager manager;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (Color c : {Color::White, Color::Black}) {
      GameSetup setup;
      setup.start = ops[i];
      setup.team_color = c;
      setup.seed = game_seed(5, i, c);
      const auto team = play_team_game(m1, m2, manager, adv, setup);
      const auto alone = play_solo_game(solo, adv, setup);
      EXPECT_TRUE(team.disagreements.empty());
      EXPECT_EQ(team.moves, alone.moves);
      EXPECT_EQ(team.outcome, alone.outcome);
    }
  }
}

TEST(Game, ConstantManagerEquivalence) {
  const auto ops = openings(15);
  engines::BuiltinEngine l(engines::parse_builtin_uri(kL)), m(engines::parse_builtin_uri(kM)),
      adv(engines::parse_builtin_uri(kAdv));
  int disagreements = 0;
  for (MemberId k : {MemberId::One, MemberId::Two}) {
    ConstantManager manager(k);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      GameSetup setup;
      setup.start = ops[i];
      setup.team_color = i % 2 ? Color::Black : Color::White;
      const auto team = play_team_game(l, m, manager, adv, setup);
      const auto alone = play_solo_game(k == MemberId::One ? l : m, adv, setup);
      EXPECT_EQ(team.moves, alone.moves);
      EXPECT_EQ(team.outcome, alone.outcome);
      for (const auto& d : team.disagreements) EXPECT_EQ(d.chosen, k);
      disagreements += static_cast<int>(team.disagreements.size());
    }
  }
  EXPECT_GT(disagreements, 0);
}

TEST(Game, RecordsAreByteIdenticalAcrossRuns) {
  engines::BuiltinEngine l(engines::parse_builtin_uri(kL)), m(engines::parse_builtin_uri(kM)),
      adv(engines::parse_builtin_uri("builtin:alphabeta?depth=1&profile=neutral&epsilon=0.2&seed=3"));
  RandomManager manager;
  GameSetup setup;
  setup.start = openings(3)[2];
  setup.seed = 99;
  setup.game_id = "x";
  const auto a = to_json_line(play_team_game(l, m, manager, adv, setup));
  const auto b = to_json_line(play_team_game(l, m, manager, adv, setup));
  EXPECT_EQ(a, b);
  setup.seed = 100;
  EXPECT_NE(a, to_json_line(play_team_game(l, m, manager, adv, setup)));
}

TEST(Game, AdjudicationAndForcedMove) {
  engines::BuiltinEngine e(engines::parse_builtin_uri(kAdv));
  GameSetup setup;
  setup.start = chess::parse_fen("4k3/8/8/8/8/8/4P3/3QK3 w - - 0 1");
  setup.adjudication = Adjudication{0, 3};
  auto g = play_solo_game(e, e, setup);
  ASSERT_TRUE(g.outcome.has_value());
  EXPECT_EQ(g.outcome->kind, chess::OutcomeKind::Win);
  EXPECT_EQ(g.outcome->reason, chess::OutcomeReason::Adjudicated);
  EXPECT_TRUE(g.moves.empty());

  setup.team_color = Color::Black;
  setup.start = chess::parse_fen("4k3/8/8/8/8/8/4P3/3QK3 b - - 0 1");
  g = play_solo_game(e, e, setup);
  EXPECT_EQ(g.outcome->kind, chess::OutcomeKind::Loss);

  setup.adjudication = Adjudication{2, 20};
  setup.forced_first_move = mv("e8f7");
  g = play_solo_game(e, e, setup);
  ASSERT_EQ(g.moves.size(), 2u);
  EXPECT_EQ(g.moves[0], mv("e8f7"));
  EXPECT_EQ(g.outcome->kind, chess::OutcomeKind::Draw);

  setup.forced_first_move = mv("e8e6");
  EXPECT_THROW(play_solo_game(e, e, setup), ContractError);
}

TEST(Game, CheckmateOutcomeFromTeamPerspective) {
  engines::BuiltinEngine e(engines::parse_builtin_uri("builtin:alphabeta?depth=2&profile=material"));
  GameSetup setup;
  setup.start = chess::parse_fen("6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1");
  setup.team_color = Color::Black;
  const auto g = play_solo_game(e, e, setup);
  ASSERT_EQ(g.moves.size(), 1u);
  EXPECT_EQ(g.outcome->kind, chess::OutcomeKind::Loss);
  EXPECT_EQ(g.outcome->perspective, Color::Black);
  EXPECT_EQ(g.outcome->reason, chess::OutcomeReason::Checkmate);
}

TEST(Stats, FormulaExamples) {
  std::vector<double> s;
  s.insert(s.end(), 3, 1.0);
  s.insert(s.end(), 2, 0.5);
  s.insert(s.end(), 5, 0.0);
  const auto m = MatchStatistics::from_scores(s);
  EXPECT_EQ(m.wins, 3);
  EXPECT_EQ(m.draws, 2);
  EXPECT_EQ(m.losses, 5);
  EXPECT_DOUBLE_EQ(m.wdl, 0.4);
  // Squared deviations from 0.4: 3 * 0.36 + 2 * 0.01 + 5 * 0.16 = 1.9.
  EXPECT_NEAR(m.sem, std::sqrt(1.9 / 9.0) / std::sqrt(10.0), 1e-15);
  const auto all = MatchStatistics::from_scores(std::vector<double>(12, 1.0));
  EXPECT_EQ(all.wdl, 1.0);
  EXPECT_EQ(all.sem, 0.0);
  EXPECT_THROW(MatchStatistics::from_scores({0.25}), ContractError);
}

TEST(Stats, WdlMatchesClosedFormOnRandomScores) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(1 + rng.uniform_index(300));
    for (auto& x : s) x = 0.5 * static_cast<double>(rng.uniform_index(3));
    const auto m = MatchStatistics::from_scores(s);
    EXPECT_EQ(static_cast<std::size_t>(m.games()), s.size());
    // Integer arithmetic in half points.
    long half = 0;
    for (double x : s) half += static_cast<long>(x * 2);
    EXPECT_EQ(m.wdl, static_cast<double>(2 * m.wins + m.draws) / (2.0 * m.games()));
    EXPECT_EQ(half, 2 * m.wins + m.draws);
    EXPECT_GE(m.wdl, 0.0);
    EXPECT_LE(m.wdl, 1.0);
  }
}

TEST(Match, DeterministicParallelAndPermutationInvariant) {
  const auto ops = openings(12);
  const TeamFactories team{builtin(kL), builtin(kM), [] { return std::make_unique<RandomManager>(); }};
  MatchOptions serial;
  serial.label = "m";
  MatchOptions parallel = serial;
  parallel.workers = 3;
  const auto a = run_match(team, builtin(kAdv), ops, 17, serial);
  const auto b = run_match(team, builtin(kAdv), ops, 17, parallel);
  EXPECT_EQ(a.games.size(), 24u);
  EXPECT_EQ(a.stats, b.stats);
  EXPECT_EQ(games_to_jsonl(a.games), games_to_jsonl(b.games));
  EXPECT_EQ(a.team_name, "team(" + kL + "," + kM + "|random)");
  EXPECT_EQ(a.adversary_name, kAdv);

  auto shuffled = a.games;
  Rng rng(3);
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
  EXPECT_EQ(aggregate(shuffled), a.stats);
  EXPECT_EQ(a.games[1].game_id, "m:0b");
}

TEST(Match, ConstantManagerMatchEqualsSoloBaseline) {
  const auto ops = openings(10);
  const TeamFactories team{builtin(kL), builtin(kM), constant(MemberId::One)};
  const auto t = run_match(team, builtin(kAdv), ops, 3);
  const auto s = solo_baseline(builtin(kL), builtin(kAdv), ops, 3);
  EXPECT_EQ(t.stats, s.stats);
  for (std::size_t i = 0; i < t.games.size(); ++i) EXPECT_EQ(t.games[i].moves, s.games[i].moves);
  EXPECT_EQ(run_match(team, builtin(kAdv), ops, 3).stats, t.stats);
}

TEST(Match, MirroredSelfPlayScoresExactlyHalf) {
  const auto ops = openings(20);
  const auto r = solo_baseline(builtin(kM), builtin(kM), ops, 1);
  for (std::size_t i = 0; i < ops.size(); ++i)
    EXPECT_EQ(r.games[2 * i].outcome->score() + r.games[2 * i + 1].outcome->score(), 1.0);
  EXPECT_EQ(r.stats.wdl, 0.5);
}

TEST(Match, FailureBudget) {
  EXPECT_NO_THROW(enforce_failure_budget(1, 100, 0.01));
  EXPECT_THROW(enforce_failure_budget(2, 100, 0.01), FailureBudgetExceeded);
  const auto ops = openings(5);
  // Fails on opening 3 and every position one ply later, so both games of
  // that opening abort.
  std::set<std::string> bad{chess::format_fen(ops[3])};
  for (const auto& m : chess::legal_moves(ops[3])) bad.insert(chess::format_fen(chess::apply_move(ops[3], m)));
  engines::EngineFactory flaky = [bad] {
    auto inner = std::make_shared<engines::BuiltinEngine>(engines::parse_builtin_uri(kAdv));
    return std::make_unique<FnEngine>([inner, bad](const BoardState& s, int ply) {
      if (bad.count(chess::format_fen(s))) throw ProtocolError("engine crashed");
      return inner->recommend(s, ply);
    });
  };
  EXPECT_THROW(solo_baseline(flaky, builtin(kAdv), ops, 1), FailureBudgetExceeded);
  MatchOptions lenient;
  lenient.failure_budget = 0.5;
  const auto r = solo_baseline(flaky, builtin(kAdv), ops, 1, lenient);
  EXPECT_EQ(r.aborted, 2u);
  EXPECT_EQ(r.stats.games(), 8);
  EXPECT_TRUE(r.games[6].aborted());
  EXPECT_TRUE(r.games[7].aborted());
}

TEST(Match, SpawnFailureAbortsGames) {
  MatchOptions lenient;
  lenient.failure_budget = 1.0;
  const auto r = solo_baseline(engines::make_engine_factory({"/nonexistent/engine"}), builtin(kAdv), openings(2), 1,
                               lenient);
  EXPECT_EQ(r.aborted, 4u);
  EXPECT_EQ(r.stats.games(), 0);
}

TEST(Match, EpsilonAdversaryVariesAcrossGames) {
  // Same opening repeated: without noise both copies play out identically.
  const auto one = openings(1);
  const std::vector<BoardState> twice{one[0], one[0]};
  const auto noisy = solo_baseline(builtin(kAdv), builtin(kAdv + "&epsilon=0.3&seed=8"), twice, 2);
  EXPECT_NE(noisy.games[0].moves, noisy.games[2].moves);
  const auto clean = solo_baseline(builtin(kAdv), builtin(kAdv), twice, 2);
  EXPECT_EQ(clean.games[0].moves, clean.games[2].moves);
}

TEST(Records, JsonRoundTripAndPgn) {
  const TeamFactories team{builtin(kL), builtin(kM), [] { return std::make_unique<RandomManager>(); }};
  const auto r = run_match(team, builtin(kAdv), openings(3), 5);
  for (const auto& g : r.games) {
    const auto line = to_json_line(g);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(game_from_json_line(line), g);
    for (const auto& d : g.disagreements) EXPECT_EQ(disagreement_from_json_line(to_json_line(d)), d);
  }
  EXPECT_EQ(games_from_jsonl(games_to_jsonl(r.games)), r.games);
  const auto pgn = to_pgn(r.games[0]);
  EXPECT_NE(pgn.find("[FEN \"" + r.games[0].opening_fen + "\"]"), std::string::npos);
  EXPECT_NE(pgn.find("[Result "), std::string::npos);
  EXPECT_THROW(game_from_json_line("{\"game_id\": 3}"), ParseError);
  EXPECT_THROW(game_from_json_line("not json"), ParseError);

  GameRecord aborted;
  aborted.error = "boom";
  EXPECT_EQ(game_from_json_line(to_json_line(aborted)), aborted);
}

TEST(Records, CsvRow) {
  MatchResult m;
  m.team_name = "t,1";
  m.adversary_name = "a";
  m.stats = MatchStatistics::from_scores({1.0, 0.0, 0.5, 0.5});
  EXPECT_EQ(match_csv_header(), "team,adversary,games,wins,draws,losses,wdl,sem,aborted");
  EXPECT_EQ(match_csv_row(m).substr(0, 24), "\"t,1\",\"a\",4,1,2,1,0.5,0.");
}

// Observed on the bundled openings: d3 vs d1 scored 0.971, random vs d2 scored 0.015.
TEST(Ladder, DepthThreeBeatsDepthOne) {
  const auto ops = openings(200);
  const auto r = solo_baseline(builtin("builtin:alphabeta?depth=3&profile=neutral"),
                               builtin("builtin:alphabeta?depth=1&profile=neutral"), ops, 11);
  std::cout << "d3 vs d1 WDL " << r.stats.wdl << " over " << r.stats.games() << " games\n";
  EXPECT_GT(r.stats.wdl, 0.5);
}

TEST(Ladder, RandomLosesToDepthTwo) {
  const auto ops = openings(200);
  const auto r = solo_baseline(builtin("builtin:random?seed=3"), builtin("builtin:alphabeta?depth=2&profile=neutral"),
                               ops, 12);
  std::cout << "random vs d2 WDL " << r.stats.wdl << " over " << r.stats.games() << " games\n";
  EXPECT_LT(r.stats.wdl, 0.2);
}
