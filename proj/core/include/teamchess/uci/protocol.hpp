#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "teamchess/chess/board.hpp"
#include "teamchess/uci/score.hpp"

namespace teamchess::uci {

std::string format_position(const chess::BoardState& s);
std::string format_go(const SearchLimits& limits);
std::string format_setoption(const std::string& name, const std::string& value);

bool is_bestmove_line(std::string_view line);

/// Parses "bestmove <move> [ponder <move>]". Null moves ("0000", "(none)")
/// and malformed lines raise ProtocolError.
chess::Move parse_bestmove(std::string_view line);

/// Extracts the score of an "info" line, if it carries one. Unknown tokens
/// are skipped.
std::optional<EvalScore> parse_info_score(std::string_view line);

/// "id name <rest of line>"
std::optional<std::string> parse_id_name(std::string_view line);

}  // namespace teamchess::uci
