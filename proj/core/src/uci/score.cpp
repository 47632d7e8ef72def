#include "teamchess/uci/score.hpp"

#include "teamchess/util/errors.hpp"

namespace teamchess::uci {

EvalScore EvalScore::mate_in(int moves) {
  if (moves == 0) throw ContractError("mate-in score must be non-zero");
  return {ScoreKind::MateIn, moves};
}

std::int64_t EvalScore::comparable() const {
  if (kind == ScoreKind::Centipawns) return value;
  // +N: we mate after 2N-1 plies. -N: we are mated after 2N plies.
  const std::int64_t plies = value > 0 ? 2LL * value - 1 : -2LL * value;
  return value > 0 ? kMateScore - plies : -(kMateScore - plies);
}

std::string EvalScore::to_string() const {
  return kind == ScoreKind::Centipawns ? "cp " + std::to_string(value) : "mate " + std::to_string(value);
}

}  // namespace teamchess::uci
