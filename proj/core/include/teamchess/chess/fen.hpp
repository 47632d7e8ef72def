#pragma once

#include <string>
#include <string_view>

#include "teamchess/chess/board.hpp"

namespace teamchess::chess {

inline constexpr std::string_view kStartFen =
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

/// Parses a 6-field FEN record. Throws ParseError naming the offending field.
BoardState parse_fen(std::string_view text);

/// Canonical single-space FEN.
std::string format_fen(const BoardState& s);

}  // namespace teamchess::chess
