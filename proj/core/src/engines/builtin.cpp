#include "teamchess/engines/builtin.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/rng.hpp"

namespace teamchess::engines {

using chess::BoardState;
using chess::Color;
using chess::Move;
using chess::MoveList;

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max() / 2;
constexpr int kMateThreshold = kMateValue - 1000;

bool has_legal_move(const BoardState& s) {
  const MoveList pseudo = chess::pseudo_legal_moves(s);
  const Color us = s.side_to_move;
  const auto king = chess::king_square(s, us);
  if (!king) return !pseudo.empty();
  for (const Move& m : pseudo) {
    const BoardState next = chess::apply_move_unchecked(s, m);
    const chess::Square k = m.from == *king ? m.to : *king;
    if (!chess::is_attacked(next, k, chess::opposite(us))) return true;
  }
  return false;
}

int piece_order_value(const BoardState& s, chess::Square sq) {
  static constexpr int kValue[] = {1, 3, 3, 5, 9, 100};
  const chess::Cell c = s.at(sq);
  return chess::is_empty(c) ? 0 : kValue[static_cast<int>(chess::kind_of(c))];
}

// Promotions and captures (most valuable victim, least valuable attacker) first.
void order_moves(const BoardState& s, MoveList& moves) {
  std::array<int, MoveList::kCapacity> keys{};
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Move& m = moves[i];
    int key = 0;
    if (m.promotion) key += 1000 + static_cast<int>(*m.promotion);
    if (chess::is_capture(s, m)) key += 100 + 10 * std::max(1, piece_order_value(s, m.to)) - piece_order_value(s, m.from);
    keys[i] = key;
  }
  std::array<std::size_t, MoveList::kCapacity> idx{};
  for (std::size_t i = 0; i < moves.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(moves.size()),
                   [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
  MoveList sorted;
  for (std::size_t i = 0; i < moves.size(); ++i) sorted.push(moves[idx[i]]);
  moves = sorted;
}

struct Searcher {
  const EvalProfile& profile;
  bool prune;
  std::uint64_t nodes = 0;

  // Horizon nodes detect mate only when in check; stalemate is not detected there.
  int leaf(const BoardState& s, int ply) {
    ++nodes;
    if (chess::is_check(s) && !has_legal_move(s)) return -(kMateValue - ply);
    return static_eval(profile, s);
  }

  int negamax(const BoardState& s, int depth, int alpha, int beta, int ply) {
    if (depth == 0) return leaf(s, ply);
    ++nodes;
    MoveList moves = chess::legal_moves(s);
    if (moves.empty()) return chess::is_check(s) ? -(kMateValue - ply) : 0;
    if (prune) order_moves(s, moves);
    int best = -kInfinity;
    for (const Move& m : moves) {
      const int v = -negamax(chess::apply_move_unchecked(s, m), depth - 1, -beta, -alpha, ply + 1);
      best = std::max(best, v);
      if (prune) {
        alpha = std::max(alpha, v);
        if (alpha >= beta) break;
      }
    }
    return best;
  }
};

MoveList sorted_legal_moves(const BoardState& s) {
  MoveList moves = chess::legal_moves(s);
  if (moves.empty()) throw ContractError("search requested at a terminal position");
  std::sort(moves.begin(), moves.end());
  return moves;
}

SearchResult root_search(const EvalProfile& profile, const BoardState& s, int depth, bool prune) {
  if (depth < 1) throw ContractError("search depth must be at least 1");
  const MoveList moves = sorted_legal_moves(s);
  Searcher searcher{profile, prune};
  SearchResult result{moves[0], -kInfinity, 0};
  int alpha = -kInfinity;
  for (const Move& m : moves) {
    const int v = -searcher.negamax(chess::apply_move_unchecked(s, m), depth - 1, -kInfinity, prune ? -alpha : kInfinity, 1);
    if (v > result.value) {
      result.value = v;
      result.best = m;
    }
    if (prune) alpha = std::max(alpha, v);
  }
  result.nodes = searcher.nodes + 1;
  return result;
}

Move greedy_move(const EvalProfile& profile, const BoardState& s) {
  const MoveList moves = sorted_legal_moves(s);
  Searcher searcher{profile, false};
  Move best = moves[0];
  int best_value = -kInfinity;
  for (const Move& m : moves) {
    const int v = -searcher.leaf(chess::apply_move_unchecked(s, m), 1);
    if (v > best_value) {
      best_value = v;
      best = m;
    }
  }
  return best;
}

Move worst_move(const EvalProfile& profile, const BoardState& s, int depth) {
  const MoveList moves = sorted_legal_moves(s);
  Searcher searcher{profile, true};
  Move worst = moves[0];
  int worst_value = kInfinity;
  for (const Move& m : moves) {
    const int v = -searcher.negamax(chess::apply_move_unchecked(s, m), depth - 1, -kInfinity, kInfinity, 1);
    if (v < worst_value) {
      worst_value = v;
      worst = m;
    }
  }
  return worst;
}

Move random_move(const BoardState& s, std::uint64_t seed, int ply) {
  const MoveList moves = sorted_legal_moves(s);
  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(ply), chess::position_hash(s)}));
  return moves[rng.uniform_index(moves.size())];
}

std::string kind_name(EngineKind k) {
  switch (k) {
    case EngineKind::Random: return "random";
    case EngineKind::Greedy: return "greedy";
    case EngineKind::AlphaBeta: return "alphabeta";
    case EngineKind::Worst: return "worst";
  }
  return "alphabeta";
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

int static_eval(const EvalProfile& profile, const BoardState& s) {
  int score = 0;
  for (int sq = 0; sq < 64; ++sq) {
    const chess::Cell c = s.placement[sq];
    if (chess::is_empty(c)) continue;
    const int kind = static_cast<int>(chess::kind_of(c));
    const bool white = chess::color_of(c) == Color::White;
    const int visual = white ? (7 - chess::rank_of(sq)) * 8 + chess::file_of(sq) : sq;
    const int v = profile.material[kind] * (kind == static_cast<int>(chess::PieceKind::King) ? 0 : 1) +
                  profile.pst[kind][visual];
    score += white ? v : -v;
  }
  if (profile.mobility_weight != 0)
    score += profile.mobility_weight * (chess::mobility(s, Color::White) - chess::mobility(s, Color::Black));
  const int persp = s.side_to_move == Color::White ? score : -score;
  return persp + profile.tempo_bonus;
}

SearchResult alphabeta_search(const EvalProfile& profile, const BoardState& s, int depth) {
  return root_search(profile, s, depth, true);
}

SearchResult plain_negamax_search(const EvalProfile& profile, const BoardState& s, int depth) {
  return root_search(profile, s, depth, false);
}

uci::EvalScore to_eval_score(int value) {
  if (value >= kMateThreshold) {
    const int plies = kMateValue - value;
    return uci::EvalScore::mate_in((plies + 1) / 2);
  }
  if (value <= -kMateThreshold) {
    const int plies = kMateValue + value;
    return uci::EvalScore::mate_in(-std::max(1, plies / 2));
  }
  return uci::EvalScore::centipawns(value);
}

std::string to_string(WeakWhen w) {
  switch (w) {
    case WeakWhen::Ahead: return "ahead";
    case WeakWhen::NotAhead: return "not_ahead";
    case WeakWhen::Behind: return "behind";
    case WeakWhen::NotBehind: return "not_behind";
  }
  return "ahead";
}

bool weak_condition_holds(WeakWhen w, int balance) {
  switch (w) {
    case WeakWhen::Ahead: return balance > 0;
    case WeakWhen::NotAhead: return balance <= 0;
    case WeakWhen::Behind: return balance < 0;
    case WeakWhen::NotBehind: return balance >= 0;
  }
  return false;
}

Move recommend(const BuiltinEngineSpec& spec, const BoardState& s, int ply) {
  Move choice;
  if (spec.weak_when) {
    if (weak_condition_holds(*spec.weak_when, chess::material_balance(s, s.side_to_move)))
      return worst_move(spec.profile, s, 2);
  }
  switch (spec.kind) {
    case EngineKind::Random: return random_move(s, spec.seed, ply);
    case EngineKind::Greedy: choice = greedy_move(spec.profile, s); break;
    case EngineKind::AlphaBeta: choice = alphabeta_search(spec.profile, s, spec.depth).best; break;
    case EngineKind::Worst: choice = worst_move(spec.profile, s, spec.depth); break;
  }
  if (spec.epsilon > 0.0) {
    Rng rng(derive_seed(spec.seed, {static_cast<std::uint64_t>(ply), chess::position_hash(s), 0xe95ULL}));
    if (rng.uniform01() < spec.epsilon) {
      const MoveList moves = sorted_legal_moves(s);
      choice = moves[rng.uniform_index(moves.size())];
    }
  }
  return choice;
}

uci::EvalScore evaluate(const BuiltinEngineSpec& spec, const BoardState& s) {
  if (!has_legal_move(s)) throw ContractError("evaluate called at a terminal position");
  switch (spec.kind) {
    case EngineKind::Random: return uci::EvalScore::centipawns(0);
    case EngineKind::Greedy: return uci::EvalScore::centipawns(static_eval(spec.profile, s));
    case EngineKind::AlphaBeta:
    case EngineKind::Worst: return to_eval_score(alphabeta_search(spec.profile, s, spec.depth).value);
  }
  return uci::EvalScore::centipawns(0);
}

std::string BuiltinEngineSpec::uri() const {
  std::ostringstream out;
  out << "builtin:" << kind_name(kind) << '?';
  std::string sep;
  auto add = [&](const std::string& key, const std::string& value) {
    out << sep << key << '=' << value;
    sep = "&";
  };
  if (kind == EngineKind::AlphaBeta || kind == EngineKind::Worst) add("depth", std::to_string(depth));
  if (kind != EngineKind::Random) add("profile", profile.name);
  if (seed != 0 || kind == EngineKind::Random) add("seed", std::to_string(seed));
  if (epsilon > 0.0) add("epsilon", format_double(epsilon));
  if (weak_when) add("weak_when", to_string(*weak_when));
  return out.str();
}

bool is_builtin_uri(const std::string& ref) { return ref.rfind("builtin:", 0) == 0; }

BuiltinEngineSpec parse_builtin_uri(const std::string& uri, const ProfileRegistry& profiles) {
  if (!is_builtin_uri(uri)) throw ParseError("not a builtin engine URI: " + uri);
  const std::string body = uri.substr(8);
  const auto q = body.find('?');
  const std::string kind = body.substr(0, q);
  BuiltinEngineSpec spec;
  spec.profile = neutral_profile();
  if (kind == "random") spec.kind = EngineKind::Random;
  else if (kind == "greedy") spec.kind = EngineKind::Greedy;
  else if (kind == "alphabeta") spec.kind = EngineKind::AlphaBeta;
  else if (kind == "worst") spec.kind = EngineKind::Worst;
  else throw ParseError("unknown builtin engine kind '" + kind + "' in " + uri);

  if (q != std::string::npos) {
    std::istringstream params(body.substr(q + 1));
    std::string pair;
    while (std::getline(params, pair, '&')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) throw ParseError("malformed parameter '" + pair + "' in " + uri);
      const std::string key = pair.substr(0, eq);
      const std::string value = pair.substr(eq + 1);
      try {
        if (key == "depth") {
          spec.depth = std::stoi(value);
        } else if (key == "profile") {
          const auto it = profiles.find(value);
          if (it == profiles.end()) throw ParseError("unknown profile '" + value + "'");
          spec.profile = it->second;
        } else if (key == "seed") {
          spec.seed = std::stoull(value);
        } else if (key == "epsilon") {
          spec.epsilon = std::stod(value);
        } else if (key == "weak_when") {
          for (WeakWhen w : {WeakWhen::Ahead, WeakWhen::NotAhead, WeakWhen::Behind, WeakWhen::NotBehind})
            if (value == to_string(w)) spec.weak_when = w;
          if (!spec.weak_when || to_string(*spec.weak_when) != value)
            throw ParseError("weak_when must be ahead, not_ahead, behind or not_behind");
        } else {
          throw ParseError("unknown parameter '" + key + "'");
        }
      } catch (const std::logic_error&) {
        throw ParseError("bad value for '" + key + "' in " + uri);
      }
    }
  }
  if ((spec.kind == EngineKind::AlphaBeta || spec.kind == EngineKind::Worst) && spec.depth < 1)
    throw ParseError("depth must be >= 1 in " + uri);
  if (spec.epsilon < 0.0 || spec.epsilon > 1.0) throw ParseError("epsilon must lie in [0, 1] in " + uri);
  return spec;
}

BuiltinEngine::BuiltinEngine(BuiltinEngineSpec spec, std::string display_name)
    : spec_(std::move(spec)),
      base_seed_(spec_.seed),
      name_(display_name.empty() ? spec_.uri() : std::move(display_name)) {}

void BuiltinEngine::new_game(std::uint64_t game_seed) {
  if (!spec_.deterministic()) spec_.seed = derive_seed(base_seed_, {game_seed});
}

Move BuiltinEngine::recommend(const BoardState& s, int ply) { return engines::recommend(spec_, s, ply); }

uci::EvalScore BuiltinEngine::evaluate(const BoardState& s) { return engines::evaluate(spec_, s); }

std::vector<BuiltinEngineSpec> strength_ladder(const LadderConfig& config) {
  std::vector<BuiltinEngineSpec> out;
  BuiltinEngineSpec random;
  random.kind = EngineKind::Random;
  random.seed = config.seed;
  random.profile = config.profile;
  out.push_back(random);
  BuiltinEngineSpec greedy;
  greedy.kind = EngineKind::Greedy;
  greedy.profile = config.profile;
  out.push_back(greedy);
  for (int d = 1; d <= config.max_depth; ++d) {
    BuiltinEngineSpec ab;
    ab.kind = EngineKind::AlphaBeta;
    ab.depth = d;
    ab.profile = config.profile;
    out.push_back(ab);
  }
  return out;
}

std::vector<std::size_t> ladder_violations(const std::vector<double>& wdl, double tolerance) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < wdl.size(); ++i)
    if (wdl[i] < wdl[i - 1] - tolerance) out.push_back(i);
  return out;
}

}  // namespace teamchess::engines
