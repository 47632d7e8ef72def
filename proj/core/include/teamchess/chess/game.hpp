#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "teamchess/chess/board.hpp"

namespace teamchess::chess {

inline constexpr int kDefaultPlyCap = 300;

enum class OutcomeKind : std::uint8_t { Win, Draw, Loss };
enum class OutcomeReason : std::uint8_t { Checkmate, Stalemate, FiftyMove, Threefold, PlyCap, Adjudicated };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Draw;
  Color perspective = Color::White;
  OutcomeReason reason = OutcomeReason::PlyCap;

  /// win 1, draw 0.5, loss 0 for `perspective`.
  double score() const;
  /// The same result seen from `c`.
  Outcome relative_to(Color c) const;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string to_string(OutcomeKind k);
std::string to_string(OutcomeReason r);
OutcomeKind outcome_kind_from_string(const std::string& s);
OutcomeReason outcome_reason_from_string(const std::string& s);

/// Adjudicates `s`. `history` holds the hashes of every earlier position of
/// the game, `ply` the number of plies played so far. The outcome is reported
/// from the side to move's perspective.
std::optional<Outcome> game_result(const BoardState& s, std::span<const std::uint64_t> history, int ply,
                                   int ply_cap = kDefaultPlyCap);

/// Permutes all 64 square contents under `seed`. Side to move is kept;
/// castling rights and en-passant are cleared. The result is generally not a
/// reachable chess position and only serves as an analysis control.
BoardState shuffle_position(const BoardState& s, std::uint64_t seed);

}  // namespace teamchess::chess
