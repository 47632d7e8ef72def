#include "teamchess/team/records.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "teamchess/chess/notation.hpp"
#include "teamchess/util/errors.hpp"

namespace teamchess::team {

using nlohmann::json;

namespace {

chess::Move parse_move(const std::string& uci) {
  const auto m = chess::Move::from_uci(uci);
  if (!m) throw ParseError("bad move '" + uci + "' in record");
  return *m;
}

std::string color_name(chess::Color c) { return c == chess::Color::White ? "white" : "black"; }

chess::Color parse_color(const std::string& s) {
  if (s == "white") return chess::Color::White;
  if (s == "black") return chess::Color::Black;
  throw ParseError("bad color '" + s + "' in record");
}

json disagreement_json(const DisagreementRecord& d) {
  return json{{"game_id", d.game_id}, {"ply", d.ply},
              {"fen", d.fen},         {"a1", d.a1.uci()},
              {"a2", d.a2.uci()},     {"chosen", to_int(d.chosen)},
              {"chooser", to_string(d.chooser)}};
}

DisagreementRecord disagreement_from(const json& j) {
  DisagreementRecord d;
  d.game_id = j.at("game_id").get<std::string>();
  d.ply = j.at("ply").get<int>();
  d.fen = j.at("fen").get<std::string>();
  d.a1 = parse_move(j.at("a1").get<std::string>());
  d.a2 = parse_move(j.at("a2").get<std::string>());
  d.chosen = member_from_int(j.at("chosen").get<int>());
  d.chooser = chooser_from_string(j.at("chooser").get<std::string>());
  return d;
}

template <typename Fn>
auto parse_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
}

}  // namespace

std::string to_json_line(const DisagreementRecord& d) { return disagreement_json(d).dump(); }

DisagreementRecord disagreement_from_json_line(const std::string& line) {
  return parse_guard([&] { return disagreement_from(json::parse(line)); });
}

std::string to_json_line(const GameRecord& g) {
  json moves = json::array();
  for (const auto& m : g.moves) moves.push_back(m.uci());
  json dis = json::array();
  for (const auto& d : g.disagreements) dis.push_back(disagreement_json(d));
  json j{{"game_id", g.game_id},
         {"opening_index", g.opening_index},
         {"opening_fen", g.opening_fen},
         {"team_color", color_name(g.team_color)},
         {"seed", g.seed},
         {"white", g.white},
         {"black", g.black},
         {"moves", moves},
         {"disagreements", dis}};
  if (g.outcome)
    j["outcome"] = json{{"kind", chess::to_string(g.outcome->kind)}, {"reason", chess::to_string(g.outcome->reason)}};
  else
    j["outcome"] = nullptr;
  j["error"] = g.error ? json(*g.error) : json(nullptr);
  return j.dump();
}

GameRecord game_from_json_line(const std::string& line) {
  return parse_guard([&] {
    const json j = json::parse(line);
    GameRecord g;
    g.game_id = j.at("game_id").get<std::string>();
    g.opening_index = j.at("opening_index").get<std::size_t>();
    g.opening_fen = j.at("opening_fen").get<std::string>();
    g.team_color = parse_color(j.at("team_color").get<std::string>());
    g.seed = j.at("seed").get<std::uint64_t>();
    g.white = j.at("white").get<std::string>();
    g.black = j.at("black").get<std::string>();
    for (const auto& m : j.at("moves")) g.moves.push_back(parse_move(m.get<std::string>()));
    for (const auto& d : j.at("disagreements")) g.disagreements.push_back(disagreement_from(d));
    if (!j.at("outcome").is_null()) {
      chess::Outcome o;
      o.perspective = g.team_color;
      o.kind = chess::outcome_kind_from_string(j.at("outcome").at("kind").get<std::string>());
      o.reason = chess::outcome_reason_from_string(j.at("outcome").at("reason").get<std::string>());
      g.outcome = o;
    }
    if (!j.at("error").is_null()) g.error = j.at("error").get<std::string>();
    return g;
  });
}

std::string games_to_jsonl(const std::vector<GameRecord>& games) {
  std::string out;
  for (const auto& g : games) out += to_json_line(g) + "\n";
  return out;
}

std::vector<GameRecord> games_from_jsonl(const std::string& text) {
  std::vector<GameRecord> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(game_from_json_line(line));
  return out;
}

std::string to_pgn(const GameRecord& g) {
  chess::PgnGame p;
  p.white = g.white;
  p.black = g.black;
  p.start_fen = g.opening_fen;
  for (const auto& m : g.moves) p.uci_moves.push_back(m.uci());
  if (g.outcome) {
    const auto white = g.outcome->relative_to(chess::Color::White);
    p.result = white.kind == chess::OutcomeKind::Win    ? "1-0"
               : white.kind == chess::OutcomeKind::Loss ? "0-1"
                                                        : "1/2-1/2";
  }
  return chess::to_pgn(p);
}

std::string match_csv_header() { return "team,adversary,games,wins,draws,losses,wdl,sem,aborted"; }

std::string match_csv_row(const MatchResult& m) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  out << quote(m.team_name) << ',' << quote(m.adversary_name) << ',' << m.stats.games() << ',' << m.stats.wins << ','
      << m.stats.draws << ',' << m.stats.losses << ',' << std::setprecision(17) << m.stats.wdl << ',' << m.stats.sem
      << ',' << m.aborted;
  return out.str();
}

}  // namespace teamchess::team
