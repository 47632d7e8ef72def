#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace teamchess::uci {

struct SearchLimits {
  std::optional<int> depth;
  std::optional<std::int64_t> nodes;
  std::optional<int> movetime_ms;

  bool valid() const { return depth || nodes || movetime_ms; }
  static SearchLimits at_depth(int plies) { return {plies, std::nullopt, std::nullopt}; }
};

enum class ScoreKind : std::uint8_t { Centipawns, MateIn };

/// Engine score from the side to move's perspective. Mate values count full
/// moves as UCI does: +3 mates in three, -3 is mated in three.
struct EvalScore {
  ScoreKind kind = ScoreKind::Centipawns;
  int value = 0;

  static EvalScore centipawns(int cp) { return {ScoreKind::Centipawns, cp}; }
  static EvalScore mate_in(int moves);

  /// Total order across both kinds: mate scores map to +/-(100000 - plies to mate).
  std::int64_t comparable() const;

  std::string to_string() const;

  friend bool operator==(const EvalScore&, const EvalScore&) = default;
};

inline constexpr std::int64_t kMateScore = 100000;

}  // namespace teamchess::uci
