#include "teamchess/chess/fen.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "teamchess/util/errors.hpp"

namespace teamchess::chess {
namespace {

[[noreturn]] void fail(std::string_view field, const std::string& what) {
  throw ParseError("FEN " + std::string(field) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n')) ++i;
    const std::size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' || text[i] == '\r' || text[i] == '\n')) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

int parse_count(std::string_view field, std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0)
    fail(field, "expected a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

}  // namespace

BoardState parse_fen(std::string_view text) {
  const auto fields = split_ws(text);
  if (fields.size() != 6) fail("record", "expected 6 fields, got " + std::to_string(fields.size()));

  BoardState s;
  int rank = 7;
  int file = 0;
  for (char ch : fields[0]) {
    if (ch == '/') {
      if (file != 8) fail("placement", "rank " + std::to_string(rank + 1) + " has length " + std::to_string(file));
      --rank;
      file = 0;
      if (rank < 0) fail("placement", "more than 8 ranks");
      continue;
    }
    if (ch >= '1' && ch <= '8') {
      file += ch - '0';
      if (file > 8) fail("placement", "rank " + std::to_string(rank + 1) + " longer than 8");
      continue;
    }
    const auto cell = cell_from_letter(ch);
    if (!cell) fail("placement", std::string("illegal piece letter '") + ch + "'");
    if (file >= 8) fail("placement", "rank " + std::to_string(rank + 1) + " longer than 8");
    s.placement[make_square(file, rank)] = *cell;
    ++file;
  }
  if (rank != 0 || file != 8) fail("placement", "expected 8 ranks of length 8");

  if (fields[1] == "w") {
    s.side_to_move = Color::White;
  } else if (fields[1] == "b") {
    s.side_to_move = Color::Black;
  } else {
    fail("side", "expected 'w' or 'b'");
  }

  if (fields[2] != "-") {
    static constexpr std::string_view kOrder = "KQkq";
    std::size_t last = 0;
    bool first = true;
    for (char ch : fields[2]) {
      const auto pos = kOrder.find(ch);
      if (pos == std::string_view::npos) fail("castling", std::string("illegal letter '") + ch + "'");
      if (!first && pos <= last) fail("castling", "letters must be unique and in KQkq order");
      last = pos;
      first = false;
      switch (ch) {
        case 'K': s.castling.white_king = true; break;
        case 'Q': s.castling.white_queen = true; break;
        case 'k': s.castling.black_king = true; break;
        default: s.castling.black_queen = true; break;
      }
    }
  }

  if (fields[3] != "-") {
    const auto sq = parse_square(fields[3]);
    if (!sq) fail("en-passant", "bad square '" + std::string(fields[3]) + "'");
    s.en_passant = *sq;
  }

  s.halfmove_clock = parse_count("halfmove", fields[4]);
  s.fullmove_number = parse_count("fullmove", fields[5]);

  if (const auto violation = invariant_violation(s)) {
    std::string field = "placement";
    if (violation->find("castling") != std::string::npos || violation->find("right") != std::string::npos)
      field = "castling";
    else if (violation->find("en-passant") != std::string::npos)
      field = "en-passant";
    else if (violation->find("fullmove") != std::string::npos)
      field = "fullmove";
    fail(field, *violation);
  }
  return s;
}

std::string format_fen(const BoardState& s) {
  std::string out;
  out.reserve(90);
  for (int rank = 7; rank >= 0; --rank) {
    int empties = 0;
    for (int file = 0; file < 8; ++file) {
      const Cell c = s.at(make_square(file, rank));
      if (is_empty(c)) {
        ++empties;
        continue;
      }
      if (empties) out.push_back(static_cast<char>('0' + empties));
      empties = 0;
      out.push_back(piece_letter(c));
    }
    if (empties) out.push_back(static_cast<char>('0' + empties));
    if (rank) out.push_back('/');
  }
  out += s.side_to_move == Color::White ? " w " : " b ";
  const auto& cr = s.castling;
  if (cr.mask() == 0) {
    out += '-';
  } else {
    if (cr.white_king) out += 'K';
    if (cr.white_queen) out += 'Q';
    if (cr.black_king) out += 'k';
    if (cr.black_queen) out += 'q';
  }
  out += ' ';
  out += s.en_passant ? square_name(*s.en_passant) : "-";
  out += ' ' + std::to_string(s.halfmove_clock) + ' ' + std::to_string(s.fullmove_number);
  return out;
}

}  // namespace teamchess::chess
