#include "teamchess/analysis/attention.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

#include "teamchess/chess/fen.hpp"
#include "teamchess/chess/game.hpp"
#include "teamchess/chess/movegen.hpp"
#include "teamchess/util/errors.hpp"
#include "teamchess/util/parallel.hpp"

namespace teamchess::analysis {

using chess::BoardState;
using chess::Color;

std::string to_string(Grouping g) {
  switch (g) {
    case Grouping::PieceVsEmpty: return "piece-vs-empty";
    case Grouping::AttackedVsNot: return "attacked-vs-not";
    case Grouping::AttackedVsNotSideToMove: return "attacked-vs-not-stm";
  }
  return "piece-vs-empty";
}

std::string to_string(Control c) {
  switch (c) {
    case Control::None: return "none";
    case Control::Untrained: return "untrained";
    case Control::Shuffled: return "shuffled";
  }
  return "none";
}

Grouping grouping_from_string(const std::string& s) {
  for (Grouping g : {Grouping::PieceVsEmpty, Grouping::AttackedVsNot, Grouping::AttackedVsNotSideToMove})
    if (to_string(g) == s) return g;
  throw ConfigError("unknown grouping '" + s + "'");
}

Control control_from_string(const std::string& s) {
  for (Control c : {Control::None, Control::Untrained, Control::Shuffled})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown control '" + s + "'");
}

std::array<double, 64> extract_cls_attention(const rl::ModelParams& p, const BoardState& s) {
  return rl::cls_square_attention(rl::forward(p, rl::encode_board(s)));
}

SquareGroups square_groups(const BoardState& s, Grouping g) {
  SquareGroups out;
  for (int sq = 0; sq < 64; ++sq) {
    const chess::Cell c = s.placement[sq];
    if (g == Grouping::PieceVsEmpty) {
      (chess::is_empty(c) ? out.b : out.a).push_back(sq);
      continue;
    }
    if (chess::is_empty(c)) continue;
    const Color owner = chess::color_of(c);
    if (g == Grouping::AttackedVsNotSideToMove && owner != s.side_to_move) continue;
    const bool attacked = chess::is_attacked(s, static_cast<chess::Square>(sq), chess::opposite(owner));
    (attacked ? out.a : out.b).push_back(sq);
  }
  return out;
}

namespace {

double group_mean(const std::array<double, 64>& att, const std::vector<int>& squares) {
  double s = 0.0;
  for (int sq : squares) s += att[sq];
  return s / static_cast<double>(squares.size());
}

}  // namespace

AttentionStudy attention_group_study(const rl::ModelParams& p, std::span<const BoardState> positions,
                                     Grouping grouping, Control control, std::uint64_t seed, unsigned workers,
                                     double init_gain) {
  if (positions.empty()) throw ContractError("attention study needs positions");
  std::vector<std::optional<PairedSample>> slots(positions.size());
  parallel_for(positions.size(), workers, [&](std::size_t i) {
    const auto key = static_cast<std::uint64_t>(i);
    const BoardState s =
        control == Control::Shuffled ? chess::shuffle_position(positions[i], derive_seed(seed, {key})) : positions[i];
    const SquareGroups g = square_groups(s, grouping);
    if (g.a.empty() || g.b.empty()) return;
    std::array<double, 64> att;
    if (control == Control::Untrained)
      att = extract_cls_attention(rl::init_params(p.arch, derive_seed(seed, {key}), init_gain), s);
    else
      att = extract_cls_attention(p, s);
    slots[i] = PairedSample{i, group_mean(att, g.a), group_mean(att, g.b), g.a.size(), g.b.size()};
  });

  AttentionStudy st;
  st.grouping = grouping;
  st.control = control;
  for (auto& s : slots) {
    if (s)
      st.samples.push_back(*s);
    else
      ++st.skipped;
  }
  if (st.samples.empty()) throw ContractError("no position has both square groups for " + to_string(grouping));
  std::vector<double> a, b, wa, wb;
  std::size_t greater = 0;
  for (const auto& s : st.samples) {
    a.push_back(s.a);
    b.push_back(s.b);
    wa.push_back(static_cast<double>(s.size_a));
    wb.push_back(static_cast<double>(s.size_b));
    if (s.a > s.b) ++greater;
  }
  st.a_w = a_w_effect_size(a, b);
  st.a_w_weighted = a_w_weighted(a, wa, b, wb);
  st.paired_a_greater = static_cast<double>(greater) / static_cast<double>(st.samples.size());
  st.box_a = box_stats(a);
  st.box_b = box_stats(b);
  return st;
}

std::vector<BoardState> sample_positions_from_games(std::span<const team::GameRecord> games, std::size_t n,
                                                    std::uint64_t seed) {
  std::array<std::vector<BoardState>, 3> strata;
  for (const auto& g : games) {
    if (g.aborted()) continue;
    BoardState s = chess::parse_fen(g.opening_fen);
    for (std::size_t ply = 0; ply < g.moves.size(); ++ply) {
      const std::size_t k = ply < 20 ? 0 : ply < 60 ? 1 : 2;
      strata[k].push_back(s);
      s = chess::apply_move(s, g.moves[ply]);
    }
  }
  Rng rng(seed);
  for (auto& v : strata)
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
  std::vector<BoardState> out;
  std::array<std::size_t, 3> used{};
  const std::size_t share = n / 3;
  for (std::size_t k = 0; k < 3; ++k) {
    used[k] = std::min(k < 2 ? share : n - 2 * share, strata[k].size());
    out.insert(out.end(), strata[k].begin(), strata[k].begin() + static_cast<std::ptrdiff_t>(used[k]));
  }
  for (std::size_t k = 0; k < 3 && out.size() < n; ++k) {
    const std::size_t extra = std::min(n - out.size(), strata[k].size() - used[k]);
    out.insert(out.end(), strata[k].begin() + static_cast<std::ptrdiff_t>(used[k]),
               strata[k].begin() + static_cast<std::ptrdiff_t>(used[k] + extra));
  }
  return out;
}

std::string paired_samples_csv(const AttentionStudy& s) {
  std::ostringstream os;
  os << std::setprecision(17) << "position,a,b,size_a,size_b\n";
  for (const auto& p : s.samples) os << p.position << ',' << p.a << ',' << p.b << ',' << p.size_a << ',' << p.size_b << '\n';
  return os.str();
}

std::string box_stats_csv(const AttentionStudy& s) {
  std::ostringstream os;
  os << std::setprecision(17)
     << "grouping,control,group,n,min,whisker_low,q1,median,q3,whisker_high,max,mean,outliers\n";
  auto row = [&](const char* name, const BoxStats& b) {
    os << to_string(s.grouping) << ',' << to_string(s.control) << ',' << name << ',' << b.n << ',' << b.min << ','
       << b.whisker_low << ',' << b.q1 << ',' << b.median << ',' << b.q3 << ',' << b.whisker_high << ',' << b.max
       << ',' << b.mean << ',' << b.outliers << '\n';
  };
  row("a", s.box_a);
  row("b", s.box_b);
  return os.str();
}

}  // namespace teamchess::analysis
