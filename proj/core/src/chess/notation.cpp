#include "teamchess/chess/notation.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/io.hpp"

namespace teamchess::chess {

std::string to_san(const BoardState& s, const Move& m) {
  const MoveList legal = legal_moves(s);
  if (!legal.contains(m)) throw ContractError("to_san: illegal move " + m.uci());
  const Cell mover = s.at(m.from);
  const PieceKind kind = kind_of(mover);
  std::string san;

  if (kind == PieceKind::King && std::abs(m.to - m.from) == 2) {
    san = m.to > m.from ? "O-O" : "O-O-O";
  } else {
    const bool capture = is_capture(s, m);
    if (kind == PieceKind::Pawn) {
      if (capture) {
        san.push_back(static_cast<char>('a' + file_of(m.from)));
        san.push_back('x');
      }
    } else {
      san.push_back(static_cast<char>(std::toupper(piece_letter(mover))));
      bool ambiguous = false;
      bool same_file = false;
      bool same_rank = false;
      for (const Move& other : legal) {
        if (other.to != m.to || other.from == m.from || s.at(other.from) != mover) continue;
        ambiguous = true;
        same_file |= file_of(other.from) == file_of(m.from);
        same_rank |= rank_of(other.from) == rank_of(m.from);
      }
      if (ambiguous) {
        if (!same_file) {
          san.push_back(static_cast<char>('a' + file_of(m.from)));
        } else if (!same_rank) {
          san.push_back(static_cast<char>('1' + rank_of(m.from)));
        } else {
          san += square_name(m.from);
        }
      }
      if (capture) san.push_back('x');
    }
    san += square_name(m.to);
    if (m.promotion) {
      san.push_back('=');
      san.push_back(piece_letter(make_cell(Color::White, *m.promotion)));
    }
  }

  const BoardState next = apply_move_unchecked(s, m);
  if (is_check(next)) san.push_back(legal_moves(next).empty() ? '#' : '+');
  return san;
}

std::string to_pgn(const PgnGame& game) {
  BoardState s = game.start_fen.empty() ? BoardState::initial() : parse_fen(game.start_fen);
  const bool custom_start = !game.start_fen.empty() && s != BoardState::initial();

  std::ostringstream out;
  out << "[Event \"?\"]\n[Site \"?\"]\n[Date \"????.??.??\"]\n[Round \"?\"]\n";
  out << "[White \"" << game.white << "\"]\n[Black \"" << game.black << "\"]\n";
  out << "[Result \"" << game.result << "\"]\n";
  if (custom_start) out << "[SetUp \"1\"]\n[FEN \"" << format_fen(s) << "\"]\n";
  out << '\n';

  std::string line;
  auto emit = [&](const std::string& token) {
    if (!line.empty() && line.size() + 1 + token.size() > 79) {
      out << line << '\n';
      line.clear();
    }
    if (!line.empty()) line.push_back(' ');
    line += token;
  };

  bool first = true;
  for (const std::string& text : game.uci_moves) {
    const auto m = Move::from_uci(text);
    if (!m) throw ParseError("PGN export: bad move '" + text + "'");
    if (s.side_to_move == Color::White) {
      emit(std::to_string(s.fullmove_number) + ".");
    } else if (first) {
      emit(std::to_string(s.fullmove_number) + "...");
    }
    emit(to_san(s, *m));
    s = apply_move_unchecked(s, *m);
    first = false;
  }
  emit(game.result);
  out << line << "\n";
  return out.str();
}

std::vector<BoardState> parse_openings(std::string_view text) {
  std::vector<BoardState> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    try {
      out.push_back(parse_fen(line));
    } catch (const ParseError& e) {
      throw ParseError("opening line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return out;
}

std::vector<BoardState> load_openings(const std::filesystem::path& path) { return parse_openings(read_file(path)); }

}  // namespace teamchess::chess
