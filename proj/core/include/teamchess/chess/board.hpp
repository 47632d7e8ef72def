#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "teamchess/chess/types.hpp"

namespace teamchess::chess {

struct CastlingRights {
  bool white_king = false;
  bool white_queen = false;
  bool black_king = false;
  bool black_queen = false;

  /// Bit 0 = white king side, 1 = white queen side, 2 = black king side, 3 = black queen side.
  std::uint8_t mask() const {
    return static_cast<std::uint8_t>(white_king | white_queen << 1 | black_king << 2 | black_queen << 3);
  }
  static CastlingRights from_mask(std::uint8_t m) {
    return {(m & 1) != 0, (m & 2) != 0, (m & 4) != 0, (m & 8) != 0};
  }
  friend bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

struct BoardState {
  std::array<Cell, 64> placement{};
  Color side_to_move = Color::White;
  CastlingRights castling;
  std::optional<Square> en_passant;
  int halfmove_clock = 0;
  int fullmove_number = 1;

  Cell at(Square sq) const { return placement[static_cast<std::size_t>(sq)]; }

  static BoardState initial();

  friend bool operator==(const BoardState&, const BoardState&) = default;
};

/// Zobrist hash over placement, side to move, castling rights and en-passant
/// square. Used for repetition detection and deterministic seeding.
std::uint64_t position_hash(const BoardState& s);

/// Describes the first violated structural invariant, if any.
std::optional<std::string> invariant_violation(const BoardState& s);

std::optional<Square> king_square(const BoardState& s, Color c);

/// Material balance from `c`'s point of view with weights P=1 N=3 B=3 R=5 Q=9.
int material_balance(const BoardState& s, Color c);

int count_occupied(const BoardState& s);

}  // namespace teamchess::chess
