#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace teamchess::chess {

enum class Color : std::uint8_t { White = 0, Black = 1 };

constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

enum class PieceKind : std::uint8_t { Pawn = 0, Knight, Bishop, Rook, Queen, King };

inline constexpr int kPieceKinds = 6;

/// Content of one square: empty, or one of 12 colored pieces.
enum class Cell : std::uint8_t {
  Empty = 0,
  WhitePawn, WhiteKnight, WhiteBishop, WhiteRook, WhiteQueen, WhiteKing,
  BlackPawn, BlackKnight, BlackBishop, BlackRook, BlackQueen, BlackKing,
};

inline constexpr int kCellKinds = 13;

constexpr bool is_empty(Cell c) { return c == Cell::Empty; }
constexpr Color color_of(Cell c) {
  return static_cast<std::uint8_t>(c) <= 6 ? Color::White : Color::Black;
}
constexpr PieceKind kind_of(Cell c) {
  return static_cast<PieceKind>((static_cast<std::uint8_t>(c) - 1) % 6);
}
constexpr Cell make_cell(Color color, PieceKind kind) {
  return static_cast<Cell>(1 + static_cast<int>(kind) + (color == Color::Black ? 6 : 0));
}

/// 0 = a1, 7 = h1, 56 = a8, 63 = h8.
using Square = int;

constexpr int file_of(Square sq) { return sq & 7; }
constexpr int rank_of(Square sq) { return sq >> 3; }
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }

std::string square_name(Square sq);
std::optional<Square> parse_square(std::string_view text);

char piece_letter(Cell c);  // FEN letter, uppercase for white
std::optional<Cell> cell_from_letter(char letter);

struct Move {
  Square from = 0;
  Square to = 0;
  std::optional<PieceKind> promotion;

  /// Lexicographic on (from, to, promotion); absent promotion sorts first.
  friend auto operator<=>(const Move&, const Move&) = default;
  friend bool operator==(const Move&, const Move&) = default;

  std::string uci() const;
  /// Parses long algebraic "e2e4" / "a7a8q". Returns nullopt on bad syntax.
  static std::optional<Move> from_uci(std::string_view text);
};

}  // namespace teamchess::chess
