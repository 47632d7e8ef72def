#include "teamchess/engines/openings.hpp"

#include <cstdlib>
#include <sstream>
#include <unordered_set>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::engines {

std::vector<chess::BoardState> generate_openings(const OpeningRecipe& recipe) {
  if (recipe.min_plies < 0 || recipe.max_plies < recipe.min_plies) throw ContractError("bad opening ply range");
  const EvalProfile profile = neutral_profile();
  Rng rng(recipe.seed);
  std::vector<chess::BoardState> out;
  std::unordered_set<std::uint64_t> seen;
  std::size_t attempts = 0;
  while (out.size() < recipe.count) {
    if (++attempts > recipe.count * 200) throw ContractError("opening recipe too strict to fill the requested count");
    const int plies = recipe.min_plies + static_cast<int>(rng.uniform_index(recipe.max_plies - recipe.min_plies + 1));
    chess::BoardState s = chess::BoardState::initial();
    bool ok = true;
    for (int p = 0; p < plies && ok; ++p) {
      const chess::MoveList moves = chess::legal_moves(s);
      if (moves.empty()) {
        ok = false;
        break;
      }
      std::vector<int> values;
      int best = -kMateValue;
      for (const auto& m : moves) {
        values.push_back(-static_eval(profile, chess::apply_move_unchecked(s, m)));
        best = std::max(best, values.back());
      }
      std::vector<chess::Move> candidates;
      for (std::size_t i = 0; i < moves.size(); ++i)
        if (values[i] >= best - recipe.candidate_window) candidates.push_back(moves[i]);
      s = chess::apply_move_unchecked(s, candidates[rng.uniform_index(candidates.size())]);
    }
    if (!ok || chess::legal_moves(s).empty()) continue;
    if (std::abs(alphabeta_search(profile, s, 3).value) > recipe.max_abs_eval) continue;
    if (!seen.insert(chess::position_hash(s)).second) continue;
    out.push_back(s);
  }
  return out;
}

std::string format_openings(const std::vector<chess::BoardState>& openings, const OpeningRecipe& recipe) {
  std::ostringstream out;
  out << "# " << openings.size() << " openings, " << recipe.min_plies << "-" << recipe.max_plies
      << " plies from the initial position.\n"
      << "# Each ply: uniform among moves within " << recipe.candidate_window
      << " cp of the best static neutral-profile reply.\n"
      << "# Kept when non-terminal, distinct, and |depth-3 neutral eval| <= " << recipe.max_abs_eval << " cp.\n"
      << "# seed " << recipe.seed << "\n";
  for (const auto& s : openings) out << chess::format_fen(s) << "\n";
  return out.str();
}

}  // namespace teamchess::engines
