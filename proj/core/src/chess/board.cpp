#include "teamchess/chess/board.hpp"

#include <array>

#include "teamchess/util/rng.hpp"

namespace teamchess::chess {
namespace {

struct ZobristKeys {
  std::array<std::array<std::uint64_t, kCellKinds>, 64> cells{};
  std::uint64_t black_to_move = 0;
  std::array<std::uint64_t, 16> castling{};
  std::array<std::uint64_t, 64> en_passant{};
};

const ZobristKeys& zobrist() {
  static const ZobristKeys keys = [] {
    ZobristKeys k;
    std::uint64_t state = 0x7465616d63686573ULL;  // fixed: hashes must be stable across runs
    auto next = [&state] {
      state += 0x9e3779b97f4a7c15ULL;
      return splitmix64(state);
    };
    for (auto& sq : k.cells)
      for (auto& v : sq) v = next();
    k.black_to_move = next();
    for (auto& v : k.castling) v = next();
    for (auto& v : k.en_passant) v = next();
    return k;
  }();
  return keys;
}

}  // namespace

BoardState BoardState::initial() {
  BoardState s;
  constexpr std::array<PieceKind, 8> kBack = {PieceKind::Rook, PieceKind::Knight, PieceKind::Bishop,
                                              PieceKind::Queen, PieceKind::King, PieceKind::Bishop,
                                              PieceKind::Knight, PieceKind::Rook};
  for (int f = 0; f < 8; ++f) {
    s.placement[make_square(f, 0)] = make_cell(Color::White, kBack[f]);
    s.placement[make_square(f, 1)] = Cell::WhitePawn;
    s.placement[make_square(f, 6)] = Cell::BlackPawn;
    s.placement[make_square(f, 7)] = make_cell(Color::Black, kBack[f]);
  }
  s.castling = {true, true, true, true};
  return s;
}

std::uint64_t position_hash(const BoardState& s) {
  const auto& z = zobrist();
  std::uint64_t h = 0;
  for (int sq = 0; sq < 64; ++sq) {
    const Cell c = s.placement[sq];
    if (!is_empty(c)) h ^= z.cells[sq][static_cast<int>(c)];
  }
  if (s.side_to_move == Color::Black) h ^= z.black_to_move;
  h ^= z.castling[s.castling.mask()];
  if (s.en_passant) h ^= z.en_passant[*s.en_passant];
  return h;
}

std::optional<Square> king_square(const BoardState& s, Color c) {
  const Cell king = make_cell(c, PieceKind::King);
  for (int sq = 0; sq < 64; ++sq)
    if (s.placement[sq] == king) return sq;
  return std::nullopt;
}

std::optional<std::string> invariant_violation(const BoardState& s) {
  int white_kings = 0;
  int black_kings = 0;
  for (Cell c : s.placement) {
    if (c == Cell::WhiteKing) ++white_kings;
    if (c == Cell::BlackKing) ++black_kings;
  }
  if (white_kings != 1 || black_kings != 1) return "each side must have exactly one king";
  if (s.en_passant) {
    const int r = rank_of(*s.en_passant);
    if (r != 2 && r != 5) return "en-passant square must be on rank 3 or 6";
    if (!is_empty(s.at(*s.en_passant))) return "en-passant square must be empty";
  }
  const auto& cr = s.castling;
  if ((cr.white_king || cr.white_queen) && s.at(4) != Cell::WhiteKing) return "white castling right without king on e1";
  if ((cr.black_king || cr.black_queen) && s.at(60) != Cell::BlackKing) return "black castling right without king on e8";
  if (cr.white_king && s.at(7) != Cell::WhiteRook) return "white king-side right without rook on h1";
  if (cr.white_queen && s.at(0) != Cell::WhiteRook) return "white queen-side right without rook on a1";
  if (cr.black_king && s.at(63) != Cell::BlackRook) return "black king-side right without rook on h8";
  if (cr.black_queen && s.at(56) != Cell::BlackRook) return "black queen-side right without rook on a8";
  if (s.halfmove_clock < 0) return "negative halfmove clock";
  if (s.fullmove_number < 1) return "fullmove number must be positive";
  return std::nullopt;
}

int material_balance(const BoardState& s, Color c) {
  static constexpr std::array<int, kPieceKinds> kValue = {1, 3, 3, 5, 9, 0};
  int balance = 0;
  for (Cell cell : s.placement) {
    if (is_empty(cell)) continue;
    const int v = kValue[static_cast<int>(kind_of(cell))];
    balance += color_of(cell) == c ? v : -v;
  }
  return balance;
}

int count_occupied(const BoardState& s) {
  int n = 0;
  for (Cell c : s.placement) n += is_empty(c) ? 0 : 1;
  return n;
}

}  // namespace teamchess::chess
