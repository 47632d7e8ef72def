#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "teamchess/team/game.hpp"
#include "teamchess/team/match.hpp"

namespace teamchess::team {

/// One game as a single JSON line (no trailing newline).
std::string to_json_line(const GameRecord& g);
GameRecord game_from_json_line(const std::string& line);

std::string to_json_line(const DisagreementRecord& d);
DisagreementRecord disagreement_from_json_line(const std::string& line);

std::string games_to_jsonl(const std::vector<GameRecord>& games);
std::vector<GameRecord> games_from_jsonl(const std::string& text);

std::string to_pgn(const GameRecord& g);

std::string match_csv_header();
std::string match_csv_row(const MatchResult& m);

}  // namespace teamchess::team
