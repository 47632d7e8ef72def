#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teamchess/chess/board.hpp"

namespace teamchess::engines {

struct OpeningRecipe {
  std::size_t count = 250;
  std::uint64_t seed = 2024;
  int min_plies = 4;
  int max_plies = 8;
  /// Each ply is drawn uniformly from moves within this many centipawns of
  /// the best depth-1 neutral-profile move.
  int candidate_window = 40;
  /// Final positions must evaluate within +/- this at depth 3.
  int max_abs_eval = 60;
};

/// Distinct, non-terminal, roughly balanced positions. Deterministic in the recipe.
std::vector<chess::BoardState> generate_openings(const OpeningRecipe& recipe);

/// EPD text with a header comment recording the recipe.
std::string format_openings(const std::vector<chess::BoardState>& openings, const OpeningRecipe& recipe);

}  // namespace teamchess::engines
