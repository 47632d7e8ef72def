#include "teamchess/uci/protocol.hpp"

#include <charconv>
#include <vector>

#include "teamchess/chess/fen.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::uci {
namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<int> to_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_position(const chess::BoardState& s) { return "position fen " + chess::format_fen(s); }

std::string format_go(const SearchLimits& limits) {
  if (!limits.valid()) throw ContractError("search limits must set depth, nodes or movetime");
  std::string out = "go";
  if (limits.depth) out += " depth " + std::to_string(*limits.depth);
  if (limits.nodes) out += " nodes " + std::to_string(*limits.nodes);
  if (limits.movetime_ms) out += " movetime " + std::to_string(*limits.movetime_ms);
  return out;
}

std::string format_setoption(const std::string& name, const std::string& value) {
  return "setoption name " + name + " value " + value;
}

bool is_bestmove_line(std::string_view line) {
  const auto t = tokens(line);
  return !t.empty() && t[0] == "bestmove";
}

chess::Move parse_bestmove(std::string_view line) {
  const auto t = tokens(line);
  if (t.size() < 2 || t[0] != "bestmove") throw ProtocolError("expected bestmove, got '" + std::string(line) + "'");
  if (t[1] == "0000" || t[1] == "(none)") throw ProtocolError("engine returned null move");
  const auto m = chess::Move::from_uci(t[1]);
  if (!m) throw ProtocolError("malformed bestmove '" + std::string(t[1]) + "'");
  return *m;
}

std::optional<EvalScore> parse_info_score(std::string_view line) {
  const auto t = tokens(line);
  if (t.empty() || t[0] != "info") return std::nullopt;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] == "string") break;  // free text runs to end of line
    if (t[i] != "score") continue;
    if (i + 2 >= t.size()) return std::nullopt;
    const auto v = to_int(t[i + 2]);
    if (!v) return std::nullopt;
    if (t[i + 1] == "cp") return EvalScore::centipawns(*v);
    if (t[i + 1] == "mate" && *v != 0) return EvalScore::mate_in(*v);
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> parse_id_name(std::string_view line) {
  constexpr std::string_view kPrefix = "id name ";
  if (line.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  std::string name(line.substr(kPrefix.size()));
  while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
  return name;
}

}  // namespace teamchess::uci
