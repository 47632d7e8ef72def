#include "teamchess/team/game.hpp"

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::team {

using chess::BoardState;
using chess::Move;

std::string to_string(Chooser c) { return c == Chooser::Manager ? "manager" : "random-tiebreak"; }

Chooser chooser_from_string(const std::string& s) {
  if (s == "manager") return Chooser::Manager;
  if (s == "random-tiebreak") return Chooser::RandomTiebreak;
  throw ParseError("unknown chooser '" + s + "'");
}

namespace {

Move checked(const BoardState& s, const Move& m, const std::string& who) {
  if (!chess::legal_moves(s).contains(m))
    throw ProtocolError(who + " recommended illegal move " + m.uci() + " in " + chess::format_fen(s));
  return m;
}

}  // namespace

TeamMoveResult team_move(engines::Engine& m1, engines::Engine& m2, Manager& manager, const BoardState& s, int ply,
                         Rng& rng) {
  const Move a1 = checked(s, m1.recommend(s, ply), m1.name());
  const Move a2 = checked(s, m2.recommend(s, ply), m2.name());
  if (a1 == a2) return {a1, std::nullopt};

  const DecisionContext ctx{s, std::make_pair(a1, a2), ply, rng};
  const std::optional<MemberId> pick = manager.decide(ctx);
  DisagreementRecord record;
  record.ply = ply;
  record.fen = chess::format_fen(s);
  record.a1 = a1;
  record.a2 = a2;
  if (pick) {
    record.chosen = *pick;
    record.chooser = Chooser::Manager;
  } else {
    record.chosen = rng.coin() ? MemberId::Two : MemberId::One;
    record.chooser = Chooser::RandomTiebreak;
  }
  return {record.chosen_move(), record};
}

Move SoloSide::choose(const BoardState& s, int ply, std::vector<DisagreementRecord>&) {
  return checked(s, engine_.recommend(s, ply), engine_.name());
}

std::string TeamSide::name() const { return "team(" + m1_.name() + "," + m2_.name() + "|" + manager_.name() + ")"; }

void TeamSide::new_game(std::uint64_t game_seed) {
  m1_.new_game(derive_seed(game_seed, {1}));
  m2_.new_game(derive_seed(game_seed, {2}));
  rng_ = Rng(derive_seed(game_seed, {4}));
}

Move TeamSide::choose(const BoardState& s, int ply, std::vector<DisagreementRecord>& log) {
  TeamMoveResult r = team_move(m1_, m2_, manager_, s, ply, rng_);
  if (r.disagreement) log.push_back(std::move(*r.disagreement));
  return r.move;
}

std::uint64_t game_seed(std::uint64_t master_seed, std::size_t opening_index, chess::Color team_color) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(opening_index), static_cast<std::uint64_t>(team_color)});
}

GameRecord play_game(Side& team, Side& adversary, const GameSetup& setup) {
  GameRecord rec;
  rec.game_id = setup.game_id;
  rec.opening_index = setup.opening_index;
  rec.opening_fen = chess::format_fen(setup.start);
  rec.team_color = setup.team_color;
  rec.seed = setup.seed;
  rec.white = setup.team_color == chess::Color::White ? team.name() : adversary.name();
  rec.black = setup.team_color == chess::Color::White ? adversary.name() : team.name();

  BoardState s = setup.start;
  std::vector<std::uint64_t> history = setup.history;
  int ply = setup.start_ply;
  try {
    team.new_game(derive_seed(setup.seed, {10}));
    adversary.new_game(derive_seed(setup.seed, {3}));
    for (;;) {
      if (auto r = chess::game_result(s, history, ply, setup.ply_cap)) {
        rec.outcome = r->relative_to(setup.team_color);
        break;
      }
      if (setup.adjudication && ply - setup.start_ply >= setup.adjudication->max_plies) {
        const int balance = chess::material_balance(s, setup.team_color);
        chess::Outcome o;
        o.perspective = setup.team_color;
        o.reason = chess::OutcomeReason::Adjudicated;
        o.kind = balance >= setup.adjudication->material_margin    ? chess::OutcomeKind::Win
                 : balance <= -setup.adjudication->material_margin ? chess::OutcomeKind::Loss
                                                                   : chess::OutcomeKind::Draw;
        rec.outcome = o;
        break;
      }
      const bool team_to_move = s.side_to_move == setup.team_color;
      Move m;
      if (ply == setup.start_ply && setup.forced_first_move) {
        if (!team_to_move) throw ContractError("forced first move requires the team to move");
        if (!chess::legal_moves(s).contains(*setup.forced_first_move))
          throw ContractError("forced move " + setup.forced_first_move->uci() + " is illegal");
        m = *setup.forced_first_move;
      } else {
        m = (team_to_move ? team : adversary).choose(s, ply, rec.disagreements);
      }
      history.push_back(chess::position_hash(s));
      s = chess::apply_move_unchecked(s, m);
      rec.moves.push_back(m);
      ++ply;
    }
  } catch (const ProtocolError& e) {
    rec.error = e.what();
    rec.outcome.reset();
  }
  for (auto& d : rec.disagreements) d.game_id = rec.game_id;
  return rec;
}

GameRecord play_team_game(engines::Engine& m1, engines::Engine& m2, Manager& manager, engines::Engine& adversary,
                          const GameSetup& setup) {
  TeamSide team(m1, m2, manager);
  SoloSide adv(adversary);
  return play_game(team, adv, setup);
}

GameRecord play_solo_game(engines::Engine& engine, engines::Engine& adversary, const GameSetup& setup) {
  SoloSide solo(engine);
  SoloSide adv(adversary);
  return play_game(solo, adv, setup);
}

}  // namespace teamchess::team
