#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "teamchess/engines/engine.hpp"
#include "teamchess/engines/profile.hpp"

namespace teamchess::engines {

enum class EngineKind : std::uint8_t { Random, Greedy, AlphaBeta, Worst };

/// Material condition, from the mover's point of view, under which a
/// switching engine drops to its weak mode.
enum class WeakWhen : std::uint8_t { Ahead, NotAhead, Behind, NotBehind };

std::string to_string(WeakWhen w);
/// True when `balance` (mover's material minus opponent's, in pawns) triggers `w`.
bool weak_condition_holds(WeakWhen w, int balance);

struct BuiltinEngineSpec {
  EngineKind kind = EngineKind::AlphaBeta;
  int depth = 1;
  EvalProfile profile;
  std::uint64_t seed = 0;
  /// Probability of replacing the chosen move by a uniformly random one.
  double epsilon = 0.0;
  /// When set and the condition holds, play the worst move at depth 2.
  std::optional<WeakWhen> weak_when;

  /// Canonical URI, e.g. "builtin:alphabeta?depth=2&profile=mstyle".
  std::string uri() const;
  bool deterministic() const { return kind != EngineKind::Random && epsilon == 0.0; }

  friend bool operator==(const BuiltinEngineSpec&, const BuiltinEngineSpec&) = default;
};

/// Parses "builtin:<random|greedy|alphabeta|worst>?key=value&...". Keys:
/// depth, profile, seed, epsilon, weak_when (ahead|not_ahead|behind|not_behind).
BuiltinEngineSpec parse_builtin_uri(const std::string& uri, const ProfileRegistry& profiles = default_profiles());

bool is_builtin_uri(const std::string& ref);

struct SearchResult {
  chess::Move best;
  int value = 0;  // internal scale: mate = +/-(kMateValue - ply)
  std::uint64_t nodes = 0;
};

inline constexpr int kMateValue = 100000;

/// Static evaluation from the side to move's perspective.
int static_eval(const EvalProfile& profile, const chess::BoardState& s);

/// Negamax with alpha-beta pruning. Root moves are tried in ascending
/// (from, to, promotion) order and only a strictly better value replaces the
/// incumbent, so ties resolve to the lowest triple.
SearchResult alphabeta_search(const EvalProfile& profile, const chess::BoardState& s, int depth);

/// Same contract without pruning; the reference for alphabeta_search.
SearchResult plain_negamax_search(const EvalProfile& profile, const chess::BoardState& s, int depth);

/// Converts an internal search value to a UCI-style score.
uci::EvalScore to_eval_score(int value);

chess::Move recommend(const BuiltinEngineSpec& spec, const chess::BoardState& s, int ply);
uci::EvalScore evaluate(const BuiltinEngineSpec& spec, const chess::BoardState& s);

class BuiltinEngine final : public Engine {
 public:
  explicit BuiltinEngine(BuiltinEngineSpec spec, std::string display_name = {});

  std::string name() const override { return name_; }
  chess::Move recommend(const chess::BoardState& s, int ply) override;
  uci::EvalScore evaluate(const chess::BoardState& s) override;
  bool deterministic() const override { return spec_.deterministic(); }
  void new_game(std::uint64_t game_seed) override;
  const BuiltinEngineSpec& spec() const { return spec_; }

 private:
  BuiltinEngineSpec spec_;
  std::uint64_t base_seed_;
  std::string name_;
};

struct LadderConfig {
  int max_depth = 4;
  EvalProfile profile = neutral_profile();
  std::uint64_t seed = 0;
};

/// random, greedy, alphabeta depth 1..max_depth, weakest first. Whether the
/// standalone results really increase is checked by ladder_is_monotone.
std::vector<BuiltinEngineSpec> strength_ladder(const LadderConfig& config);

/// Indices i where wdl[i] < wdl[i-1] - tolerance.
std::vector<std::size_t> ladder_violations(const std::vector<double>& wdl, double tolerance = 0.0);

}  // namespace teamchess::engines
