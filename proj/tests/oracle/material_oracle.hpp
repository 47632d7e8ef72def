#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

inline constexpr std::array<int, 6> kMaterialWeights{100, 320, 330, 500, 900, 0};

/// White-minus-black material counted straight off the FEN placement field,
/// signed for the side to move.
int fen_material(const std::string& fen, const std::array<int, 6>& weights = kMaterialWeights);

/// Moves whose resulting material is maximal for the mover, a mate counting
/// above everything.
std::vector<std::string> best_material_replies(const std::string& fen,
                                               const std::array<int, 6>& weights = kMaterialWeights);

/// A mating move if one exists, by exhaustive two-ply enumeration.
std::optional<std::string> mate_in_one(const std::string& fen);

}  // namespace oracle
