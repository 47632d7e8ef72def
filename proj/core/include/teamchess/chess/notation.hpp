#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "teamchess/chess/board.hpp"
#include "teamchess/chess/game.hpp"

namespace teamchess::chess {

/// Standard algebraic notation for a legal move, with +/# suffixes.
std::string to_san(const BoardState& s, const Move& m);

struct PgnGame {
  std::string white = "?";
  std::string black = "?";
  std::string start_fen;             // omitted from tags when it is the initial position
  std::vector<std::string> uci_moves;
  std::string result = "*";          // "1-0", "0-1", "1/2-1/2" or "*"
};

/// Mainline moves plus the seven-tag roster (and SetUp/FEN when needed).
std::string to_pgn(const PgnGame& game);

/// One FEN per line; blank lines and lines starting with '#' are skipped.
std::vector<BoardState> load_openings(const std::filesystem::path& path);
std::vector<BoardState> parse_openings(std::string_view text);

}  // namespace teamchess::chess
