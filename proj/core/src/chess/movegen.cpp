#include "teamchess/chess/movegen.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "teamchess/util/errors.hpp"

namespace teamchess::chess {
namespace {

struct Ray {
  std::array<std::int8_t, 7> squares{};
  std::int8_t length = 0;
};

struct Targets {
  std::array<std::int8_t, 8> squares{};
  std::int8_t length = 0;
};

// Directions 0..3 are orthogonal (rook), 4..7 diagonal (bishop).
constexpr std::array<std::array<int, 2>, 8> kDirections = {{
    {0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1},
}};
constexpr std::array<std::array<int, 2>, 8> kKnightJumps = {{
    {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2},
}};

struct Tables {
  std::array<std::array<Ray, 8>, 64> rays{};
  std::array<Targets, 64> knight{};
  std::array<Targets, 64> king{};
};

const Tables& tables() {
  static const Tables t = [] {
    Tables out;
    auto on_board = [](int f, int r) { return f >= 0 && f < 8 && r >= 0 && r < 8; };
    for (int sq = 0; sq < 64; ++sq) {
      const int f = file_of(sq);
      const int r = rank_of(sq);
      for (int d = 0; d < 8; ++d) {
        Ray& ray = out.rays[sq][d];
        for (int step = 1; step < 8; ++step) {
          const int nf = f + kDirections[d][0] * step;
          const int nr = r + kDirections[d][1] * step;
          if (!on_board(nf, nr)) break;
          ray.squares[ray.length++] = static_cast<std::int8_t>(make_square(nf, nr));
        }
        const int kf = f + kDirections[d][0];
        const int kr = r + kDirections[d][1];
        if (on_board(kf, kr)) out.king[sq].squares[out.king[sq].length++] = static_cast<std::int8_t>(make_square(kf, kr));
      }
      for (const auto& j : kKnightJumps) {
        const int nf = f + j[0];
        const int nr = r + j[1];
        if (on_board(nf, nr))
          out.knight[sq].squares[out.knight[sq].length++] = static_cast<std::int8_t>(make_square(nf, nr));
      }
      std::sort(out.king[sq].squares.begin(), out.king[sq].squares.begin() + out.king[sq].length);
      std::sort(out.knight[sq].squares.begin(), out.knight[sq].squares.begin() + out.knight[sq].length);
    }
    return out;
  }();
  return t;
}

constexpr std::array<PieceKind, 4> kPromotions = {PieceKind::Knight, PieceKind::Bishop, PieceKind::Rook,
                                                  PieceKind::Queen};

bool is_piece(Cell c, Color color, PieceKind kind) { return c == make_cell(color, kind); }

void add_pawn_move(MoveList& out, Square from, Square to, bool promotes) {
  if (promotes) {
    for (PieceKind k : kPromotions) out.push({from, to, k});
  } else {
    out.push({from, to, std::nullopt});
  }
}

// Pseudo-legal moves for `us`; castling optionally included.
void generate(const BoardState& s, Color us, bool with_castling, MoveList& out) {
  const auto& t = tables();
  const Color them = opposite(us);
  const int forward = us == Color::White ? 8 : -8;
  const int start_rank = us == Color::White ? 1 : 6;
  const int last_rank = us == Color::White ? 7 : 0;

  for (int from = 0; from < 64; ++from) {
    const Cell c = s.placement[from];
    if (is_empty(c) || color_of(c) != us) continue;
    switch (kind_of(c)) {
      case PieceKind::Pawn: {
        const int one = from + forward;
        if (one >= 0 && one < 64 && is_empty(s.placement[one])) {
          add_pawn_move(out, from, one, rank_of(one) == last_rank);
          const int two = one + forward;
          if (rank_of(from) == start_rank && is_empty(s.placement[two])) out.push({from, two, std::nullopt});
        }
        for (int df : {-1, 1}) {
          const int f = file_of(from) + df;
          if (f < 0 || f > 7 || one < 0 || one >= 64) continue;
          const int to = one + df;
          const Cell target = s.placement[to];
          if (!is_empty(target) && color_of(target) == them) {
            add_pawn_move(out, from, to, rank_of(to) == last_rank);
          } else if (is_empty(target) && s.en_passant && *s.en_passant == to && us == s.side_to_move) {
            out.push({from, to, std::nullopt});
          }
        }
        break;
      }
      case PieceKind::Knight:
      case PieceKind::King: {
        const Targets& tg = kind_of(c) == PieceKind::Knight ? t.knight[from] : t.king[from];
        for (int i = 0; i < tg.length; ++i) {
          const int to = tg.squares[i];
          const Cell target = s.placement[to];
          if (is_empty(target) || color_of(target) == them) out.push({from, to, std::nullopt});
        }
        break;
      }
      case PieceKind::Bishop:
      case PieceKind::Rook:
      case PieceKind::Queen: {
        const PieceKind k = kind_of(c);
        const int d_begin = k == PieceKind::Bishop ? 4 : 0;
        const int d_end = k == PieceKind::Rook ? 4 : 8;
        for (int d = d_begin; d < d_end; ++d) {
          const Ray& ray = t.rays[from][d];
          for (int i = 0; i < ray.length; ++i) {
            const int to = ray.squares[i];
            const Cell target = s.placement[to];
            if (is_empty(target)) {
              out.push({from, to, std::nullopt});
              continue;
            }
            if (color_of(target) == them) out.push({from, to, std::nullopt});
            break;
          }
        }
        break;
      }
    }
  }

  if (!with_castling) return;
  const int home = us == Color::White ? 4 : 60;
  if (s.placement[home] != make_cell(us, PieceKind::King)) return;
  const bool king_side = us == Color::White ? s.castling.white_king : s.castling.black_king;
  const bool queen_side = us == Color::White ? s.castling.white_queen : s.castling.black_queen;
  if (!king_side && !queen_side) return;
  if (is_attacked(s, home, them)) return;
  const Cell rook = make_cell(us, PieceKind::Rook);
  if (king_side && s.placement[home + 3] == rook && is_empty(s.placement[home + 1]) &&
      is_empty(s.placement[home + 2]) && !is_attacked(s, home + 1, them) && !is_attacked(s, home + 2, them)) {
    out.push({home, home + 2, std::nullopt});
  }
  if (queen_side && s.placement[home - 4] == rook && is_empty(s.placement[home - 1]) &&
      is_empty(s.placement[home - 2]) && is_empty(s.placement[home - 3]) && !is_attacked(s, home - 1, them) &&
      !is_attacked(s, home - 2, them)) {
    out.push({home, home - 2, std::nullopt});
  }
}

void clear_rook_right(CastlingRights& cr, Square sq) {
  switch (sq) {
    case 0: cr.white_queen = false; break;
    case 7: cr.white_king = false; break;
    case 56: cr.black_queen = false; break;
    case 63: cr.black_king = false; break;
    default: break;
  }
}

}  // namespace

bool MoveList::contains(const Move& m) const { return std::find(begin(), end(), m) != end(); }

bool is_attacked(const BoardState& s, Square sq, Color by) {
  const auto& t = tables();
  const int f = file_of(sq);
  // A pawn of `by` attacks sq from one rank behind it (from `by`'s viewpoint).
  const int pawn_rank_offset = by == Color::White ? -8 : 8;
  const int behind = sq + pawn_rank_offset;
  if (behind >= 0 && behind < 64) {
    if (f > 0 && is_piece(s.placement[behind - 1], by, PieceKind::Pawn)) return true;
    if (f < 7 && is_piece(s.placement[behind + 1], by, PieceKind::Pawn)) return true;
  }
  for (int i = 0; i < t.knight[sq].length; ++i)
    if (is_piece(s.placement[t.knight[sq].squares[i]], by, PieceKind::Knight)) return true;
  for (int i = 0; i < t.king[sq].length; ++i)
    if (is_piece(s.placement[t.king[sq].squares[i]], by, PieceKind::King)) return true;
  for (int d = 0; d < 8; ++d) {
    const Ray& ray = t.rays[sq][d];
    const PieceKind slider = d < 4 ? PieceKind::Rook : PieceKind::Bishop;
    for (int i = 0; i < ray.length; ++i) {
      const Cell c = s.placement[ray.squares[i]];
      if (is_empty(c)) continue;
      if (color_of(c) == by && (kind_of(c) == slider || kind_of(c) == PieceKind::Queen)) return true;
      break;
    }
  }
  return false;
}

bool is_check(const BoardState& s) {
  const auto k = king_square(s, s.side_to_move);
  return k && is_attacked(s, *k, opposite(s.side_to_move));
}

MoveList pseudo_legal_moves(const BoardState& s) {
  MoveList out;
  generate(s, s.side_to_move, true, out);
  return out;
}

BoardState apply_move_unchecked(const BoardState& s, const Move& m) {
  BoardState n = s;
  const Cell mover = s.placement[m.from];
  const Cell captured = s.placement[m.to];
  const Color us = s.side_to_move;
  const PieceKind kind = kind_of(mover);
  bool irreversible = !is_empty(captured) || kind == PieceKind::Pawn;

  n.placement[m.from] = Cell::Empty;
  n.placement[m.to] = m.promotion ? make_cell(us, *m.promotion) : mover;

  if (kind == PieceKind::Pawn && s.en_passant && m.to == *s.en_passant && is_empty(captured) &&
      file_of(m.from) != file_of(m.to)) {
    n.placement[m.to + (us == Color::White ? -8 : 8)] = Cell::Empty;
  }
  if (kind == PieceKind::King && std::abs(m.to - m.from) == 2) {
    const bool king_side = m.to > m.from;
    const Square rook_from = king_side ? m.from + 3 : m.from - 4;
    const Square rook_to = king_side ? m.from + 1 : m.from - 1;
    n.placement[rook_to] = n.placement[rook_from];
    n.placement[rook_from] = Cell::Empty;
  }

  if (kind == PieceKind::King) {
    if (us == Color::White) {
      n.castling.white_king = n.castling.white_queen = false;
    } else {
      n.castling.black_king = n.castling.black_queen = false;
    }
  }
  clear_rook_right(n.castling, m.from);
  clear_rook_right(n.castling, m.to);

  n.en_passant.reset();
  if (kind == PieceKind::Pawn && std::abs(m.to - m.from) == 16) n.en_passant = (m.from + m.to) / 2;

  n.halfmove_clock = irreversible ? 0 : s.halfmove_clock + 1;
  if (us == Color::Black) ++n.fullmove_number;
  n.side_to_move = opposite(us);
  return n;
}

MoveList legal_moves(const BoardState& s) {
  MoveList pseudo;
  generate(s, s.side_to_move, true, pseudo);
  MoveList out;
  const Color us = s.side_to_move;
  const auto king = king_square(s, us);
  if (!king) return out;
  for (const Move& m : pseudo) {
    const BoardState next = apply_move_unchecked(s, m);
    const Square k = m.from == *king ? m.to : *king;
    if (!is_attacked(next, k, opposite(us))) out.push(m);
  }
  return out;
}

BoardState apply_move(const BoardState& s, const Move& m) {
  if (!legal_moves(s).contains(m)) throw ContractError("illegal move " + m.uci());
  return apply_move_unchecked(s, m);
}

int mobility(const BoardState& s, Color c) {
  MoveList out;
  generate(s, c, false, out);
  return static_cast<int>(out.size());
}

std::uint64_t perft(const BoardState& s, int depth) {
  if (depth <= 0) return 1;
  const MoveList moves = legal_moves(s);
  if (depth == 1) return moves.size();
  std::uint64_t total = 0;
  for (const Move& m : moves) total += perft(apply_move_unchecked(s, m), depth - 1);
  return total;
}

bool is_capture(const BoardState& s, const Move& m) {
  if (!is_empty(s.at(m.to))) return true;
  return kind_of(s.at(m.from)) == PieceKind::Pawn && s.en_passant && *s.en_passant == m.to &&
         file_of(m.from) != file_of(m.to);
}

}  // namespace teamchess::chess
