#pragma once

#include <array>
#include <map>
#include <string>

#include "teamchess/chess/types.hpp"

namespace teamchess::engines {

/// Static evaluation parameters, all in centipawns. Piece-square tables are
/// written from White's side with index 0 = a8 (the usual visual layout) and
/// mirrored for Black.
struct EvalProfile {
  std::string name;
  std::array<int, chess::kPieceKinds> material{};  // king entry is ignored
  std::array<std::array<int, 64>, chess::kPieceKinds> pst{};
  int mobility_weight = 0;
  int tempo_bonus = 0;

  friend bool operator==(const EvalProfile&, const EvalProfile&) = default;
};

/// Kings are never traded, so their weight is effectively infinite; the
/// evaluator does not count them.
inline constexpr int kKingValue = 20000;

EvalProfile material_profile();
/// Material plus mobility.
EvalProfile lstyle_profile();
/// Material plus piece-square tables plus tempo.
EvalProfile mstyle_profile();
/// Material plus piece-square tables; used for adversaries.
EvalProfile neutral_profile();

using ProfileRegistry = std::map<std::string, EvalProfile>;

/// The four profiles above, keyed by name.
ProfileRegistry default_profiles();

}  // namespace teamchess::engines
