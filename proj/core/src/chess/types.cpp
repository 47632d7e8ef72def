#include "teamchess/chess/types.hpp"

namespace teamchess::chess {

std::string square_name(Square sq) {
  return {static_cast<char>('a' + file_of(sq)), static_cast<char>('1' + rank_of(sq))};
}

std::optional<Square> parse_square(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  const char f = text[0];
  const char r = text[1];
  if (f < 'a' || f > 'h' || r < '1' || r > '8') return std::nullopt;
  return make_square(f - 'a', r - '1');
}

char piece_letter(Cell c) {
  static constexpr char kLetters[] = ".PNBRQKpnbrqk";
  return kLetters[static_cast<int>(c)];
}

std::optional<Cell> cell_from_letter(char letter) {
  static constexpr std::string_view kLetters = ".PNBRQKpnbrqk";
  const auto pos = kLetters.find(letter);
  if (pos == std::string_view::npos || pos == 0) return std::nullopt;
  return static_cast<Cell>(pos);
}

std::string Move::uci() const {
  std::string out = square_name(from) + square_name(to);
  if (promotion) {
    static constexpr char kPromo[] = "pnbrqk";
    out.push_back(kPromo[static_cast<int>(*promotion)]);
  }
  return out;
}

std::optional<Move> Move::from_uci(std::string_view text) {
  if (text.size() != 4 && text.size() != 5) return std::nullopt;
  const auto from = parse_square(text.substr(0, 2));
  const auto to = parse_square(text.substr(2, 2));
  if (!from || !to || *from == *to) return std::nullopt;
  Move m{*from, *to, std::nullopt};
  if (text.size() == 5) {
    switch (text[4]) {
      case 'n': m.promotion = PieceKind::Knight; break;
      case 'b': m.promotion = PieceKind::Bishop; break;
      case 'r': m.promotion = PieceKind::Rook; break;
      case 'q': m.promotion = PieceKind::Queen; break;
      default: return std::nullopt;
    }
  }
  return m;
}

}  // namespace teamchess::chess
