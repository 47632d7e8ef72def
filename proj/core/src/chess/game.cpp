#include "teamchess/chess/game.hpp"

#include <algorithm>
#include <utility>

#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::chess {

double Outcome::score() const {
  switch (kind) {
    case OutcomeKind::Win: return 1.0;
    case OutcomeKind::Draw: return 0.5;
    case OutcomeKind::Loss: return 0.0;
  }
  return 0.5;
}

Outcome Outcome::relative_to(Color c) const {
  if (c == perspective || kind == OutcomeKind::Draw) return {kind, c, reason};
  return {kind == OutcomeKind::Win ? OutcomeKind::Loss : OutcomeKind::Win, c, reason};
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Win: return "win";
    case OutcomeKind::Draw: return "draw";
    case OutcomeKind::Loss: return "loss";
  }
  return "draw";
}

std::string to_string(OutcomeReason r) {
  switch (r) {
    case OutcomeReason::Checkmate: return "checkmate";
    case OutcomeReason::Stalemate: return "stalemate";
    case OutcomeReason::FiftyMove: return "fifty-move";
    case OutcomeReason::Threefold: return "threefold";
    case OutcomeReason::PlyCap: return "ply-cap";
    case OutcomeReason::Adjudicated: return "adjudicated";
  }
  return "ply-cap";
}

OutcomeKind outcome_kind_from_string(const std::string& s) {
  if (s == "win") return OutcomeKind::Win;
  if (s == "draw") return OutcomeKind::Draw;
  if (s == "loss") return OutcomeKind::Loss;
  throw ParseError("unknown outcome kind '" + s + "'");
}

OutcomeReason outcome_reason_from_string(const std::string& s) {
  for (auto r : {OutcomeReason::Checkmate, OutcomeReason::Stalemate, OutcomeReason::FiftyMove,
                 OutcomeReason::Threefold, OutcomeReason::PlyCap, OutcomeReason::Adjudicated}) {
    if (to_string(r) == s) return r;
  }
  throw ParseError("unknown outcome reason '" + s + "'");
}

std::optional<Outcome> game_result(const BoardState& s, std::span<const std::uint64_t> history, int ply,
                                   int ply_cap) {
  const Color mover = s.side_to_move;
  if (legal_moves(s).empty()) {
    if (is_check(s)) return Outcome{OutcomeKind::Loss, mover, OutcomeReason::Checkmate};
    return Outcome{OutcomeKind::Draw, mover, OutcomeReason::Stalemate};
  }
  if (s.halfmove_clock >= 100) return Outcome{OutcomeKind::Draw, mover, OutcomeReason::FiftyMove};
  const std::uint64_t h = position_hash(s);
  if (std::count(history.begin(), history.end(), h) >= 2)
    return Outcome{OutcomeKind::Draw, mover, OutcomeReason::Threefold};
  if (ply >= ply_cap) return Outcome{OutcomeKind::Draw, mover, OutcomeReason::PlyCap};
  return std::nullopt;
}

BoardState shuffle_position(const BoardState& s, std::uint64_t seed) {
  BoardState out = s;
  Rng rng(derive_seed(seed, {0x5368756666ULL}));
  for (std::size_t i = 63; i > 0; --i) {
    const std::size_t j = rng.uniform_index(i + 1);
    std::swap(out.placement[i], out.placement[j]);
  }
  out.castling = {};
  out.en_passant.reset();
  return out;
}

}  // namespace teamchess::chess
