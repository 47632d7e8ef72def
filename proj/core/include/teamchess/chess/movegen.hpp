#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "teamchess/chess/board.hpp"

namespace teamchess::chess {

/// Fixed-capacity move container; no chess position has more than 218 legal moves.
class MoveList {
 public:
  static constexpr std::size_t kCapacity = 256;

  void push(const Move& m) { moves_[size_++] = m; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const Move& operator[](std::size_t i) const { return moves_[i]; }
  Move& operator[](std::size_t i) { return moves_[i]; }
  const Move* begin() const { return moves_.data(); }
  const Move* end() const { return moves_.data() + size_; }
  Move* begin() { return moves_.data(); }
  Move* end() { return moves_.data() + size_; }
  void clear() { size_ = 0; }
  bool contains(const Move& m) const;
  std::vector<Move> to_vector() const { return {begin(), end()}; }

 private:
  std::array<Move, kCapacity> moves_{};
  std::size_t size_ = 0;
};

/// True iff any piece of `by` attacks `sq` pseudo-legally (pins ignored,
/// occupancy of `sq` irrelevant).
bool is_attacked(const BoardState& s, Square sq, Color by);

/// Side to move's king is attacked.
bool is_check(const BoardState& s);

/// Moves obeying piece movement rules for the side to move, before the
/// own-king-safety filter. Castling is included only when the king and the
/// transit squares are not attacked.
MoveList pseudo_legal_moves(const BoardState& s);

MoveList legal_moves(const BoardState& s);

/// Applies a move without checking legality. The move must come from
/// pseudo_legal_moves or legal_moves of `s`.
BoardState apply_move_unchecked(const BoardState& s, const Move& m);

/// Applies a legal move; throws ContractError otherwise.
BoardState apply_move(const BoardState& s, const Move& m);

/// Number of pseudo-legal non-castling moves available to `c` in `s`,
/// regardless of whose turn it is.
int mobility(const BoardState& s, Color c);

/// Leaf count of the legal move tree.
std::uint64_t perft(const BoardState& s, int depth);

bool is_capture(const BoardState& s, const Move& m);

}  // namespace teamchess::chess
