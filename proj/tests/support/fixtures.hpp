#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "teamchess/chess/board.hpp"
#include "teamchess/chess/types.hpp"

namespace fixtures {

inline constexpr const char* kKiwipete = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";
inline constexpr const char* kFoolsMate = "rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3";

teamchess::chess::Move mv(const char* uci);
teamchess::chess::BoardState fen(const char* text);

/// Plays `plies` random legal moves from `s`, collecting every visited state.
std::vector<teamchess::chess::BoardState> random_walk(teamchess::chess::BoardState s, int plies, std::uint64_t seed);

/// `n` non-terminal positions reached by random walks of 4..60 plies.
std::vector<teamchess::chess::BoardState> sample_positions(std::size_t n, std::uint64_t seed);

/// Openings bundled with the library.
std::vector<teamchess::chess::BoardState> bundled_openings();

std::filesystem::path data_dir();
std::filesystem::path source_dir();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace fixtures
