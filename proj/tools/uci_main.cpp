// UCI front-end for the builtin engines, so they can be driven like any
// external binary.
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/engines/builtin.hpp"
#include "teamchess/util/errors.hpp"

using namespace teamchess;

namespace {

chess::BoardState parse_position(std::istringstream& in) {
  std::string word;
  in >> word;
  chess::BoardState s;
  if (word == "startpos") {
    s = chess::BoardState::initial();
    in >> word;
  } else if (word == "fen") {
    std::string fen, field;
    while (in >> field && field != "moves") fen += (fen.empty() ? "" : " ") + field;
    s = chess::parse_fen(fen);
    word = field;
  } else {
    throw ParseError("position: expected startpos or fen");
  }
  if (word == "moves") {
    std::string uci;
    while (in >> uci) {
      const auto m = chess::Move::from_uci(uci);
      if (!m) throw ParseError("bad move " + uci);
      s = chess::apply_move(s, *m);
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UCI wrapper around a builtin engine"};
  std::string uri = "builtin:alphabeta?depth=2&profile=neutral";
  app.add_option("--engine", uri, "builtin engine URI");
  CLI11_PARSE(app, argc, argv);

  engines::BuiltinEngineSpec spec;
  try {
    spec = engines::parse_builtin_uri(uri);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  chess::BoardState position = chess::BoardState::initial();
  int ply = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    try {
      if (cmd == "uci") {
        std::cout << "id name teamchess " << spec.uri() << "\n"
                  << "id author teamchess\n"
                  << "option name Engine type string default " << spec.uri() << "\n"
                  << "uciok" << std::endl;
      } else if (cmd == "isready") {
        std::cout << "readyok" << std::endl;
      } else if (cmd == "setoption") {
        std::string tok, name, value;
        in >> tok >> name >> tok >> value;
        if (name == "Engine") spec = engines::parse_builtin_uri(value);
      } else if (cmd == "ucinewgame") {
        ply = 0;
      } else if (cmd == "position") {
        position = parse_position(in);
      } else if (cmd == "go") {
        auto search = spec;
        std::string tok;
        while (in >> tok)
          if (tok == "depth") in >> search.depth;
        if (chess::legal_moves(position).empty()) {
          std::cout << "bestmove 0000" << std::endl;
          continue;
        }
        const auto score = engines::evaluate(search, position);
        std::cout << "info depth " << search.depth << " score " << score.to_string() << "\n"
                  << "bestmove " << engines::recommend(search, position, ply++).uci() << std::endl;
      } else if (cmd == "quit") {
        return 0;
      }
    } catch (const std::exception& e) {
      std::cout << "info string error " << e.what() << std::endl;
    }
  }
  return 0;
}
