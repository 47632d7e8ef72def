#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teamchess/engines/registry.hpp"
#include "teamchess/team/match.hpp"

namespace teamchess::sme {

struct SmeConfig {
  /// For builtin experts the URI depth is the evaluation depth; UCI experts
  /// use `expert.limits`.
  engines::EngineRef expert;
  /// Score differences up to this many centipawns count as a tie.
  int tie_epsilon = 0;
};

/// Value of playing `m` in `s` for the mover, on the comparable scale: mate
/// delivered by `m` scores kMateScore, stalemate 0, otherwise the negated
/// expert evaluation of the child position.
std::int64_t score_move(engines::Engine& expert, const chess::BoardState& s, const chess::Move& m);

/// The member whose move scores higher, or nullopt on a tie.
std::optional<team::MemberId> sme_prefer(engines::Engine& expert, const chess::BoardState& s, const chess::Move& a1,
                                         const chess::Move& a2, int tie_epsilon);

/// sme_prefer with ties resolved by a coin flip from `rng`.
team::MemberId sme_decide(engines::Engine& expert, const chess::BoardState& s, const chess::Move& a1,
                          const chess::Move& a2, int tie_epsilon, Rng& rng);

class SmeManager final : public team::Manager {
 public:
  SmeManager(std::unique_ptr<engines::Engine> expert, int tie_epsilon);
  std::string name() const override;
  /// Ties are reported as indifference so the team records a random tiebreak.
  std::optional<team::MemberId> decide(const team::DecisionContext& ctx) override;

 private:
  std::unique_ptr<engines::Engine> expert_;
  int tie_epsilon_;
};

team::ManagerFactory make_sme_factory(const SmeConfig& cfg);

struct LadderRow {
  std::string expert_name;
  team::MatchResult solo;
  team::MatchResult team;
};

/// For each expert: its solo result against the adversary and the result of
/// the team it manages.
std::vector<LadderRow> run_expertise_ladder(std::span<const SmeConfig> ladder, const engines::EngineFactory& member1,
                                            const engines::EngineFactory& member2,
                                            const engines::EngineFactory& adversary,
                                            std::span<const chess::BoardState> openings, std::uint64_t seed,
                                            const team::MatchOptions& options = {});

/// Columns: expert_name, expert_solo_wdl, expert_solo_sem, team_wdl, team_sem, games.
std::string ladder_csv(const std::vector<LadderRow>& rows);

}  // namespace teamchess::sme
