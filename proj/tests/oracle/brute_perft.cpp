#include "brute_perft.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace oracle {
namespace {

// 0x88 layout: index = rank * 16 + file.
struct Pos {
  char sq[128];
  bool white;
  bool castle[4];  // K Q k q
  int ep;          // 0x88 index or -1
};

struct Mv {
  int from, to;
  char promo;  // 0 or piece letter (lowercase)
};

bool off(int i) { return (i & 0x88) != 0; }
bool own(char p, bool white) { return p != '.' && (std::isupper(static_cast<unsigned char>(p)) != 0) == white; }

Pos parse(const std::string& fen) {
  Pos p{};
  for (char& c : p.sq) c = '.';
  std::istringstream in(fen);
  std::string board, side, castling, ep;
  in >> board >> side >> castling >> ep;
  int r = 7, f = 0;
  for (char c : board) {
    if (c == '/') {
      --r;
      f = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      f += c - '0';
    } else {
      p.sq[r * 16 + f] = c;
      ++f;
    }
  }
  p.white = side == "w";
  for (char c : castling) {
    if (c == 'K') p.castle[0] = true;
    if (c == 'Q') p.castle[1] = true;
    if (c == 'k') p.castle[2] = true;
    if (c == 'q') p.castle[3] = true;
  }
  p.ep = ep == "-" ? -1 : (ep[1] - '1') * 16 + (ep[0] - 'a');
  return p;
}

const int kN[] = {33, 31, 18, 14, -33, -31, -18, -14};
const int kK[] = {1, -1, 16, -16, 17, 15, -17, -15};
const int kB[] = {17, 15, -17, -15};
const int kR[] = {1, -1, 16, -16};

void slide(const Pos& p, int from, const int* dirs, int n, bool repeat, std::vector<Mv>& out) {
  for (int d = 0; d < n; ++d) {
    int to = from + dirs[d];
    while (!off(to)) {
      if (p.sq[to] != '.') {
        if (!own(p.sq[to], p.white)) out.push_back({from, to, 0});
        break;
      }
      out.push_back({from, to, 0});
      if (!repeat) break;
      to += dirs[d];
    }
  }
}

// Everything except castling.
std::vector<Mv> pseudo(const Pos& p) {
  std::vector<Mv> out;
  for (int i = 0; i < 128; ++i) {
    if (off(i) || !own(p.sq[i], p.white)) continue;
    const char t = static_cast<char>(std::tolower(static_cast<unsigned char>(p.sq[i])));
    if (t == 'p') {
      const int dir = p.white ? 16 : -16;
      const int last = p.white ? 7 : 0;
      const int start = p.white ? 1 : 6;
      auto push = [&](int to) {
        if ((to >> 4) == last) {
          for (char pr : {'n', 'b', 'r', 'q'}) out.push_back({i, to, pr});
        } else {
          out.push_back({i, to, 0});
        }
      };
      if (!off(i + dir) && p.sq[i + dir] == '.') {
        push(i + dir);
        if ((i >> 4) == start && p.sq[i + 2 * dir] == '.') out.push_back({i, i + 2 * dir, 0});
      }
      for (int side : {-1, 1}) {
        const int to = i + dir + side;
        if (off(to)) continue;
        if (p.sq[to] != '.' && !own(p.sq[to], p.white)) push(to);
        if (to == p.ep) out.push_back({i, to, 0});
      }
    } else if (t == 'n') {
      slide(p, i, kN, 8, false, out);
    } else if (t == 'k') {
      slide(p, i, kK, 8, false, out);
    } else if (t == 'b') {
      slide(p, i, kB, 4, true, out);
    } else if (t == 'r') {
      slide(p, i, kR, 4, true, out);
    } else if (t == 'q') {
      slide(p, i, kK, 8, true, out);
    }
  }
  return out;
}

// Puts an opponent-colored dummy on `target` so that every attacker type,
// pawns included, generates a capture onto it.
bool attacked_by_side_to_move(const Pos& p, int target) {
  Pos q = p;
  q.sq[target] = p.white ? 'z' : 'Z';
  q.ep = -1;
  for (const Mv& m : pseudo(q)) {
    if (m.to != target) continue;
    const char t = static_cast<char>(std::tolower(static_cast<unsigned char>(q.sq[m.from])));
    if (t == 'p' && (m.from & 7) == (m.to & 7)) continue;
    return true;
  }
  return false;
}

Pos make(const Pos& p, const Mv& m) {
  Pos n = p;
  const char piece = p.sq[m.from];
  const char t = static_cast<char>(std::tolower(static_cast<unsigned char>(piece)));
  n.sq[m.from] = '.';
  n.sq[m.to] = m.promo ? (p.white ? static_cast<char>(std::toupper(m.promo)) : m.promo) : piece;
  if (t == 'p' && m.to == p.ep) n.sq[m.to + (p.white ? -16 : 16)] = '.';
  if (t == 'k' && (m.to - m.from == 2 || m.from - m.to == 2)) {
    if (m.to > m.from) {
      n.sq[m.from + 1] = n.sq[m.from + 3];
      n.sq[m.from + 3] = '.';
    } else {
      n.sq[m.from - 1] = n.sq[m.from - 4];
      n.sq[m.from - 4] = '.';
    }
  }
  n.ep = (t == 'p' && (m.to - m.from == 32 || m.from - m.to == 32)) ? (m.from + m.to) / 2 : -1;
  if (t == 'k') {
    if (p.white) n.castle[0] = n.castle[1] = false;
    else n.castle[2] = n.castle[3] = false;
  }
  for (int sq : {m.from, m.to}) {
    if (sq == 0x07) n.castle[0] = false;
    if (sq == 0x00) n.castle[1] = false;
    if (sq == 0x77) n.castle[2] = false;
    if (sq == 0x70) n.castle[3] = false;
  }
  n.white = !p.white;
  return n;
}

int find_king(const Pos& p, bool white) {
  for (int i = 0; i < 128; ++i)
    if (!off(i) && p.sq[i] == (white ? 'K' : 'k')) return i;
  return -1;
}

bool square_attacked(const Pos& p, int sq, bool by_white) {
  Pos q = p;
  q.white = by_white;
  return attacked_by_side_to_move(q, sq);
}

std::vector<Mv> legal(const Pos& p) {
  std::vector<Mv> cands = pseudo(p);
  const int k = find_king(p, p.white);
  // Castling candidates.
  const int home = p.white ? 0x04 : 0x74;
  const char rook = p.white ? 'R' : 'r';
  if (k == home && !square_attacked(p, home, !p.white)) {
    const bool ks = p.white ? p.castle[0] : p.castle[2];
    const bool qs = p.white ? p.castle[1] : p.castle[3];
    if (ks && p.sq[home + 3] == rook && p.sq[home + 1] == '.' && p.sq[home + 2] == '.' &&
        !square_attacked(p, home + 1, !p.white) && !square_attacked(p, home + 2, !p.white))
      cands.push_back({home, home + 2, 0});
    if (qs && p.sq[home - 4] == rook && p.sq[home - 1] == '.' && p.sq[home - 2] == '.' && p.sq[home - 3] == '.' &&
        !square_attacked(p, home - 1, !p.white) && !square_attacked(p, home - 2, !p.white))
      cands.push_back({home, home - 2, 0});
  }
  std::vector<Mv> out;
  for (const Mv& m : cands) {
    const Pos n = make(p, m);
    const int nk = find_king(n, p.white);
    bool captured = false;
    for (const Mv& reply : pseudo(n))
      if (reply.to == nk) {
        captured = true;
        break;
      }
    if (!captured) out.push_back(m);
  }
  return out;
}

std::uint64_t run(const Pos& p, int depth) {
  if (depth == 0) return 1;
  std::uint64_t total = 0;
  for (const Mv& m : legal(p)) total += run(make(p, m), depth - 1);
  return total;
}

}  // namespace

std::uint64_t brute_perft(const std::string& fen, int depth) { return run(parse(fen), depth); }

int brute_move_count(const std::string& fen) { return static_cast<int>(legal(parse(fen)).size()); }

std::vector<BruteChild> brute_children(const std::string& fen, const std::array<int, 6>& weights) {
  const Pos p = parse(fen);
  std::vector<BruteChild> out;
  for (const Mv& m : legal(p)) {
    const Pos n = make(p, m);
    BruteChild c;
    auto name = [](int i) { return std::string{static_cast<char>('a' + (i & 7)), static_cast<char>('1' + (i >> 4))}; };
    c.uci = name(m.from) + name(m.to);
    if (m.promo) c.uci += m.promo;
    for (int i = 0; i < 128; ++i) {
      if (off(i) || n.sq[i] == '.') continue;
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(n.sq[i])));
      const int w = lower == 'p' ? weights[0] : lower == 'n' ? weights[1] : lower == 'b' ? weights[2]
                  : lower == 'r' ? weights[3] : lower == 'q' ? weights[4] : 0;
      c.material_for_mover += own(n.sq[i], p.white) ? w : -w;
    }
    c.opponent_in_check = square_attacked(n, find_king(n, n.white), p.white);
    c.opponent_mated = c.opponent_in_check && legal(n).empty();
    out.push_back(c);
  }
  return out;
}

bool brute_attacked(const std::string& fen, int square, bool by_white) {
  const int idx = (square / 8) * 16 + (square % 8);
  return square_attacked(parse(fen), idx, by_white);
}

}  // namespace oracle
