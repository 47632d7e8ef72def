#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "teamchess/analysis/stats.hpp"
#include "teamchess/rl/model.hpp"
#include "teamchess/team/game.hpp"

namespace teamchess::analysis {

enum class Grouping {
  PieceVsEmpty,
  /// Pieces of either color attacked by the other color vs the remaining pieces.
  AttackedVsNot,
  /// The same, restricted to the side to move's pieces.
  AttackedVsNotSideToMove,
};

enum class Control {
  None,
  /// Fresh seeded parameters replace the trained ones.
  Untrained,
  /// Square contents are permuted before encoding.
  Shuffled,
};

std::string to_string(Grouping g);
std::string to_string(Control c);
Grouping grouping_from_string(const std::string& s);  // ConfigError
Control control_from_string(const std::string& s);    // ConfigError

/// CLS attention to each square token, averaged over layers and heads.
std::array<double, 64> extract_cls_attention(const rl::ModelParams& p, const chess::BoardState& s);

struct SquareGroups {
  std::vector<int> a;  // pieces / attacked pieces
  std::vector<int> b;  // empty squares / pieces not attacked
};

SquareGroups square_groups(const chess::BoardState& s, Grouping g);

struct PairedSample {
  std::size_t position = 0;
  double a = 0.0;  // mean attention over group A squares
  double b = 0.0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

struct AttentionStudy {
  Grouping grouping = Grouping::PieceVsEmpty;
  Control control = Control::None;
  std::vector<PairedSample> samples;
  /// Positions where one of the groups was empty.
  std::size_t skipped = 0;
  /// Stochastic superiority of group A means over group B means.
  double a_w = 0.5;
  /// Same with each position weighted by its group size.
  double a_w_weighted = 0.5;
  /// Fraction of positions where a > b.
  double paired_a_greater = 0.0;
  BoxStats box_a;
  BoxStats box_b;
};

/// With Control::Untrained, position i is scored by init_params(p.arch,
/// derive_seed(seed, {i}), init_gain), so the control averages over
/// initializations rather than inheriting one draw's fixed bias. Throws
/// ContractError when no position has both groups.
AttentionStudy attention_group_study(const rl::ModelParams& p, std::span<const chess::BoardState> positions,
                                     Grouping grouping, Control control, std::uint64_t seed, unsigned workers = 1,
                                     double init_gain = 0.02);

/// Non-terminal positions replayed from finished games, drawn in equal
/// shares from opening (ply < 20), middlegame (20-59) and endgame (60+)
/// strata when available, and topped up from the others otherwise.
std::vector<chess::BoardState> sample_positions_from_games(std::span<const team::GameRecord> games, std::size_t n,
                                                           std::uint64_t seed);

/// "position,a,b,size_a,size_b" rows.
std::string paired_samples_csv(const AttentionStudy& s);

/// One row per group with the box statistics.
std::string box_stats_csv(const AttentionStudy& s);

}  // namespace teamchess::analysis
